#include "smotenn/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace smotenn {

using nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

json imbalance_json(const ImbalanceStats& s) {
  return {{"minority", s.minority_count}, {"majority", s.majority_count}, {"ir", s.ir}};
}

ImbalanceStats imbalance_from(const json& j) {
  ImbalanceStats s;
  s.minority_count = j.value("minority", std::size_t{0});
  s.majority_count = j.value("majority", std::size_t{0});
  s.ir = j.value("ir", 0.0);
  return s;
}

json spec_to(const ResampleSpec& s) {
  json j = {{"method", to_string(s.method)},
            {"k", s.k},
            {"n", s.n_oversample},
            {"p", s.p_ratio},
            {"target_ir", s.target_ir},
            {"seed", s.seed},
            {"engine", to_string(s.engine.kind)},
            {"tau", s.engine.index.tau},
            {"rho", s.engine.index.rho},
            {"leaf_size", s.engine.index.leaf_size},
            {"defeatist", s.engine.index.defeatist_search},
            {"partitions", s.partitions},
            {"threads", s.threads}};
  j["fixed_u"] = s.fixed_u ? json(*s.fixed_u) : json(nullptr);
  return j;
}

ResampleSpec spec_from(const json& j) {
  ResampleSpec s;
  if (j.contains("method")) s.method = parse_method(j["method"].get<std::string>());
  s.k = j.value("k", s.k);
  s.n_oversample = j.value("n", s.n_oversample);
  s.p_ratio = j.value("p", s.p_ratio);
  s.target_ir = j.value("target_ir", s.target_ir);
  s.seed = j.value("seed", s.seed);
  if (j.contains("engine")) s.engine.kind = parse_engine(j["engine"].get<std::string>());
  s.engine.index.tau = j.value("tau", s.engine.index.tau);
  s.engine.index.rho = j.value("rho", s.engine.index.rho);
  s.engine.index.leaf_size = j.value("leaf_size", s.engine.index.leaf_size);
  s.engine.index.defeatist_search = j.value("defeatist", s.engine.index.defeatist_search);
  s.partitions = j.value("partitions", s.partitions);
  s.threads = j.value("threads", s.threads);
  if (j.contains("fixed_u") && !j["fixed_u"].is_null()) s.fixed_u = j["fixed_u"].get<double>();
  return s;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t file_digest(const std::filesystem::path& path) { return fnv1a(read_text(path)); }

std::string hex_digest(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

std::string resampled_csv(const ResampleResult& result) {
  const Dataset& d = result.output;
  std::string out = "id";
  for (const auto& c : d.columns()) out += ',' + csv_field(c.name);
  out += ",class,synthetic\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += std::to_string(d.id(i));
    for (std::size_t j = 0; j < d.dim(); ++j) out += ',' + g17(d.row(i)(static_cast<Eigen::Index>(j)));
    out += ',' + csv_field(d.label(i) == Label::Minority ? d.minority_name() : d.majority_name());
    out += result.provenance.contains(d.id(i)) ? ",1\n" : ",0\n";
  }
  return out;
}

void write_resampled_csv(const std::filesystem::path& path, const ResampleResult& result) {
  write_text(path, resampled_csv(result));
}

std::string sidecar_json(const ResampleResult& result, const ResampleSpec& spec) {
  json j;
  j["spec"] = spec_to(spec);
  j["removed_ids"] = result.removed_ids;
  j["edited_ids"] = result.edited_ids;
  j["synthetic_count"] = result.synthetic_count;
  j["provenance"] = json::array();
  for (const auto& [id, p] : result.provenance) {
    j["provenance"].push_back({{"id", id}, {"parent", p.parent}, {"neighbor", p.neighbor}, {"u", p.u}});
  }
  return j.dump(2) + '\n';
}

std::string spec_json(const ResampleSpec& spec) { return spec_to(spec).dump(2); }

ResampleSpec spec_from_json(std::string_view text) {
  try {
    return spec_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad spec json: ") + e.what());
  }
}

std::string RunManifest::to_json() const {
  json j;
  j["version"] = version;
  j["spec"] = spec_to(spec);
  j["input"] = {{"path", input_path},
                {"label_column", label_column},
                {"minority_value", minority_value ? json(*minority_value) : json(nullptr)},
                {"format", format ? json(*format) : json(nullptr)},
                {"digest", hex_digest(input_digest)}};
  j["output_digest"] = hex_digest(output_digest);
  j["timings_ms"] = timings_ms;
  j["before"] = imbalance_json(before);
  j["after"] = imbalance_json(after);
  j["synthetic_count"] = synthetic_count;
  j["removed_count"] = removed_count;
  j["blocks"] = json::array();
  for (const auto& b : blocks) {
    j["blocks"].push_back({{"block", b.block},
                           {"input", b.input_size},
                           {"minority_in", b.minority_in},
                           {"majority_in", b.majority_in},
                           {"removed", b.removed},
                           {"synthetic", b.synthetic},
                           {"ms", b.millis}});
  }
  return j.dump(2) + '\n';
}

RunManifest RunManifest::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    RunManifest m;
    m.version = j.value("version", std::string(kVersion));
    m.spec = spec_from(j.at("spec"));
    const auto& in = j.at("input");
    m.input_path = in.at("path").get<std::string>();
    m.label_column = in.value("label_column", m.label_column);
    if (in.contains("minority_value") && !in["minority_value"].is_null()) {
      m.minority_value = in["minority_value"].get<std::string>();
    }
    if (in.contains("format") && !in["format"].is_null()) m.format = in["format"].get<std::string>();
    m.input_digest = std::stoull(in.at("digest").get<std::string>(), nullptr, 16);
    m.output_digest = std::stoull(j.at("output_digest").get<std::string>(), nullptr, 16);
    m.timings_ms = j.value("timings_ms", m.timings_ms);
    if (j.contains("before")) m.before = imbalance_from(j["before"]);
    if (j.contains("after")) m.after = imbalance_from(j["after"]);
    m.synthetic_count = j.value("synthetic_count", std::size_t{0});
    m.removed_count = j.value("removed_count", std::size_t{0});
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("bad manifest: digest is not hexadecimal");
  }
}

std::string index_stats_json(const SpillTreeIndex::Stats& s, const IndexConfig& config, double recall, std::size_t k) {
  json j = {{"config", {{"tau", config.tau}, {"rho", config.rho}, {"leaf_size", config.leaf_size},
                        {"defeatist", config.defeatist_search}}},
            {"points", s.point_count},
            {"nodes", s.node_count},
            {"leaves", s.leaf_count},
            {"internal_nodes", s.internal_nodes},
            {"overlap_nodes", s.overlap_nodes},
            {"overlap_fraction", s.overlap_fraction()},
            {"max_depth", s.max_depth},
            {"depth_histogram", s.depth_histogram},
            {"leaf_size_min", s.min_leaf},
            {"leaf_size_max", s.max_leaf},
            {"leaf_size_mean", s.mean_leaf},
            {"replication", s.replication},
            {"k", k},
            {"recall_at_k", recall}};
  return j.dump(2) + '\n';
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace smotenn
