// smotenn command-line tool: resample, bench, index-stats, generate, replay.

#include "smotenn/eval.hpp"
#include "smotenn/ingest.hpp"
#include "smotenn/io.hpp"
#include "smotenn/knn.hpp"
#include "smotenn/partition.hpp"
#include "smotenn/resample.hpp"
#include "smotenn/spill_tree.hpp"
#include "smotenn/stats.hpp"
#include "smotenn/synthetic.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>

using namespace smotenn;

namespace {

struct CommonFlags {
  std::string method = "smotenn";
  std::string engine = "exact";
  std::size_t n = 1;
  double p = 4.0;
  double target_ir = 1.0;
  double tau = 0.1;
  double rho = 0.7;
  std::size_t leaf_size = 32;
  bool backtrack = false;
  std::size_t partitions = 1;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  std::string label_column = "class";
  std::string minority;
  std::string format;

  ResampleSpec spec(std::size_t k) const {
    ResampleSpec s;
    s.method = parse_method(method);
    s.k = k;
    s.n_oversample = n;
    s.p_ratio = p;
    s.target_ir = target_ir;
    s.seed = seed;
    s.engine.kind = parse_engine(engine);
    s.engine.index.tau = tau;
    s.engine.index.rho = rho;
    s.engine.index.leaf_size = leaf_size;
    s.engine.index.defeatist_search = !backtrack;
    s.partitions = partitions;
    s.threads = threads;
    return s;
  }

  std::optional<std::string> minority_value() const {
    return minority.empty() ? std::nullopt : std::optional(minority);
  }
  std::optional<std::string> format_value() const { return format.empty() ? std::nullopt : std::optional(format); }
};

void add_engine_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--engine", f.engine, "Neighbor engine: exact | spilltree")->capture_default_str();
  cmd->add_option("--tau", f.tau, "Spill-tree overlap fraction")->capture_default_str();
  cmd->add_option("--rho", f.rho, "Spill-tree balance factor")->capture_default_str();
  cmd->add_option("--leaf-size", f.leaf_size, "Spill-tree leaf size")->capture_default_str();
  cmd->add_flag("--backtrack", f.backtrack, "Backtrack through overlap nodes too (exact search)");
}

void add_input_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--label-column", f.label_column, "CSV label column")->capture_default_str();
  cmd->add_option("--minority", f.minority, "Label value to treat as minority (CSV)");
  cmd->add_option("--format", f.format, "Input format: csv | keel (default: by extension)");
}

void add_resample_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--method", f.method, "none | rus | enn | smote | rus+smote | enn+smote | smotenn")
      ->capture_default_str();
  cmd->add_option("--n", f.n, "Synthetics per minority sample (N < K)")->capture_default_str();
  cmd->add_option("--p", f.p, "Majority:minority ratio kept by undersampling")->capture_default_str();
  cmd->add_option("--target-ir", f.target_ir, "ENN stopping IR")->capture_default_str();
  cmd->add_option("--partitions", f.partitions, "Stratified blocks processed independently")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Root seed")->capture_default_str();
  add_engine_flags(cmd, f);
  add_input_flags(cmd, f);
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void print_imbalance(const char* tag, const ImbalanceStats& s) {
  std::printf("%-7s minority=%zu majority=%zu IR=%.4f\n", tag, s.minority_count, s.majority_count, s.ir);
}

struct ResampleOutcome {
  RunManifest manifest;
  std::string csv;
  std::string sidecar;
};

ResampleOutcome resample_file(const std::string& input, const ResampleSpec& spec, const std::string& label_column,
                              const std::optional<std::string>& minority, const std::optional<std::string>& format) {
  ResampleOutcome o;
  auto& m = o.manifest;
  m.spec = spec;
  m.input_path = input;
  m.label_column = label_column;
  m.minority_value = minority;
  m.format = format;

  auto t0 = std::chrono::steady_clock::now();
  m.input_digest = file_digest(input);
  const Dataset d = load_dataset(input, label_column, minority, format);
  m.timings_ms["load"] = ms_since(t0);
  m.before = compute_imbalance(d);

  t0 = std::chrono::steady_clock::now();
  ResampleResult r = [&] {
    if (spec.partitions <= 1) return resample(d, spec);
    auto pr = run_partitioned(d, spec);
    m.blocks = std::move(pr.blocks);
    return std::move(pr.result);
  }();
  m.timings_ms["resample"] = ms_since(t0);
  m.after = compute_imbalance(r.output);
  m.synthetic_count = r.synthetic_count;
  m.removed_count = r.removed_ids.size();

  o.csv = resampled_csv(r);
  o.sidecar = sidecar_json(r, spec);
  m.output_digest = fnv1a(o.csv);
  return o;
}

int cmd_resample(const CommonFlags& f, std::size_t k, const std::string& input, const std::string& output) {
  const auto spec = f.spec(k);
  spec.validate();
  auto o = resample_file(input, spec, f.label_column, f.minority_value(), f.format_value());
  const auto t0 = std::chrono::steady_clock::now();
  write_text(output, o.csv);
  write_text(output + ".provenance.json", o.sidecar);
  o.manifest.timings_ms["write"] = ms_since(t0);
  write_text(output + ".manifest.json", o.manifest.to_json());

  print_imbalance("before", o.manifest.before);
  print_imbalance("after", o.manifest.after);
  std::printf("removed=%zu synthetic=%zu digest=%s\n", o.manifest.removed_count, o.manifest.synthetic_count,
              hex_digest(o.manifest.output_digest).c_str());
  return 0;
}

int cmd_replay(const std::string& manifest_path) {
  const auto m = RunManifest::from_json(read_text(manifest_path));
  const auto input_digest = file_digest(m.input_path);
  if (input_digest != m.input_digest) {
    std::fprintf(stderr, "input %s changed: digest %s, manifest says %s\n", m.input_path.c_str(),
                 hex_digest(input_digest).c_str(), hex_digest(m.input_digest).c_str());
    return 3;
  }
  const auto o = resample_file(m.input_path, m.spec, m.label_column, m.minority_value, m.format);
  const bool same = o.manifest.output_digest == m.output_digest;
  std::printf("%s output digest %s (manifest %s)\n", same ? "reproduced" : "MISMATCH",
              hex_digest(o.manifest.output_digest).c_str(), hex_digest(m.output_digest).c_str());
  return same ? 0 : 2;
}

std::vector<std::filesystem::path> collect_inputs(const std::vector<std::string>& args) {
  std::vector<std::filesystem::path> out;
  for (const auto& a : args) {
    if (std::filesystem::is_directory(a)) {
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(a)) {
        const auto ext = e.path().extension();
        if (e.is_regular_file() && (ext == ".csv" || ext == ".dat")) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else if (std::filesystem::exists(a)) {
      out.emplace_back(a);
    } else {
      throw IoError("no such file or directory: " + a);
    }
  }
  return out;
}

void emit_report(const ScoreMatrix& m, const std::string& report, const std::string& report_out, double alpha,
                 bool two_sided) {
  const auto r = rank_report(m, alpha, two_sided ? Tail::TwoSided : Tail::OneSided);
  const std::string text = report == "json" ? to_json(r) + "\n" : to_markdown(r);
  if (report_out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text(report_out, text);
  }
}

struct BenchFlags {
  std::vector<std::string> inputs;
  std::string methods = "none,smotenn";
  std::vector<std::size_t> ks{5};
  std::size_t folds = 10;
  std::size_t classifier_k = 5;
  std::string fixtures;
  std::string matrix_out = "bench_matrix.csv";
  std::string report = "md";
  std::string report_out;
  double alpha = 0.05;
  bool two_sided = false;
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(',', start);
    const auto piece = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

int cmd_bench(const CommonFlags& f, const BenchFlags& b) {
  if (b.report != "md" && b.report != "json") throw ConfigError("--report must be md or json");
  if (!b.fixtures.empty()) {
    emit_report(load_score_directory(b.fixtures), b.report, b.report_out, b.alpha, b.two_sided);
    return 0;
  }

  const auto files = collect_inputs(b.inputs);
  if (files.empty()) throw ConfigError("bench needs input datasets or --fixtures");
  const auto method_names = split_commas(b.methods);
  if (method_names.empty()) throw ConfigError("--methods is empty");
  std::vector<Method> methods;
  for (const auto& name : method_names) methods.push_back(parse_method(name));
  for (auto k : b.ks) f.spec(k);  // surface bad flags before any work

  ScoreMatrix matrix;
  for (auto m : methods) matrix.methods.emplace_back(to_string(m));
  std::vector<std::vector<double>> rows;
  std::size_t runs = 0, failures = 0;

  for (const auto& file : files) {
    std::optional<Dataset> data;
    try {
      data = load_dataset(file, f.label_column, f.minority_value(), f.format_value());
    } catch (const Error& e) {
      std::fprintf(stderr, "skip %s: %s\n", file.string().c_str(), e.what());
      runs += methods.size() * b.ks.size();
      failures += methods.size() * b.ks.size();
      continue;
    }
    for (auto k : b.ks) {
      std::vector<double> row;
      for (auto m : methods) {
        auto spec = f.spec(k);
        spec.method = m;
        ++runs;
        try {
          spec.validate();
          ClassifierConfig clf;
          clf.k = b.classifier_k;
          const auto cv = cross_validate(*data, spec, b.folds, clf, RngStream(spec.seed, 0));
          row.push_back(cv.mean_g_mean);
          std::printf("%s k=%zu %s g-mean=%.4f\n", file.filename().string().c_str(), k,
                      std::string(to_string(m)).c_str(), cv.mean_g_mean);
        } catch (const Error& e) {
          ++failures;
          row.push_back(std::numeric_limits<double>::quiet_NaN());
          std::fprintf(stderr, "FAILED %s k=%zu %s: %s\n", file.string().c_str(), k, std::string(to_string(m)).c_str(),
                       e.what());
        }
      }
      matrix.row_labels.push_back(file.stem().string() + (b.ks.size() > 1 ? "/k=" + std::to_string(k) : ""));
      rows.push_back(std::move(row));
    }
  }
  std::fflush(stdout);

  matrix.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(methods.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < methods.size(); ++j) {
      matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  write_score_matrix(b.matrix_out, matrix);
  std::printf("wrote %s (%zu rows x %zu methods); %zu/%zu runs failed\n", b.matrix_out.c_str(), rows.size(),
              methods.size(), failures, runs);

  if (runs > 0 && failures == runs) return 2;

  // Ranking needs complete rows.
  ScoreMatrix complete;
  complete.methods = matrix.methods;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
    if (matrix.values.row(i).array().isFinite().all()) keep.push_back(i);
  }
  if (keep.size() < 2 || methods.size() < 2) {
    std::fprintf(stderr, "rank report skipped: needs >= 2 complete rows and >= 2 methods\n");
    return 0;
  }
  complete.values.resize(static_cast<Eigen::Index>(keep.size()), matrix.values.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    complete.values.row(static_cast<Eigen::Index>(i)) = matrix.values.row(keep[i]);
    complete.row_labels.push_back(matrix.row_labels[static_cast<std::size_t>(keep[i])]);
  }
  emit_report(complete, b.report, b.report_out, b.alpha, b.two_sided);
  return 0;
}

int cmd_index_stats(const CommonFlags& f, std::size_t k, const std::string& input, const std::string& report) {
  IndexConfig config;
  config.tau = f.tau;
  config.rho = f.rho;
  config.leaf_size = f.leaf_size;
  config.defeatist_search = !f.backtrack;
  config.validate();
  const Dataset d = load_dataset(input, f.label_column, f.minority_value(), f.format_value());
  const SpillTreeIndex index(d, config, RngStream(f.seed, 0).derive("index"));
  const double recall = recall_at_k(index, d, k);
  const auto s = index.stats();
  if (report == "json") {
    std::fputs(index_stats_json(s, config, recall, k).c_str(), stdout);
    return 0;
  }
  std::printf("points=%zu nodes=%zu leaves=%zu depth=%zu overlap_fraction=%.4f replication=%.4f\n", s.point_count,
              s.node_count, s.leaf_count, s.max_depth, s.overlap_fraction(), s.replication);
  std::printf("leaf size min=%zu max=%zu mean=%.2f\n", s.min_leaf, s.max_leaf, s.mean_leaf);
  std::printf("depth histogram (leaves per depth):");
  for (std::size_t i = 0; i < s.depth_histogram.size(); ++i) std::printf(" %zu:%zu", i, s.depth_histogram[i]);
  std::printf("\nrecall@%zu vs brute force = %.4f\n", k, recall);
  return 0;
}

int cmd_generate(std::size_t m, double ir, std::size_t dim, double separation, std::uint64_t seed,
                 const std::string& output) {
  if (m < 2 || ir < 1.0 || dim < 1) throw ConfigError("generate needs m >= 2, ir >= 1, dim >= 1");
  auto minority = static_cast<std::size_t>(std::llround(static_cast<double>(m) / (1.0 + ir)));
  minority = std::clamp<std::size_t>(minority, 1, m - 1);
  const Dataset d = two_gaussians(minority, m - minority, dim, separation, RngStream(seed, 0));
  std::string out;
  for (std::size_t j = 0; j < dim; ++j) out += "x" + std::to_string(j) + ",";
  out += "class\n";
  char buf[40];
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,", d.row(i)(static_cast<Eigen::Index>(j)));
      out += buf;
    }
    out += d.label(i) == Label::Minority ? "positive\n" : "negative\n";
  }
  write_text(output, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SMOTENN resampling, spill-tree kNN, and classifier comparison toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonFlags f;
  std::size_t k = 5;
  std::string input, output, report = "md", manifest;

  auto* res = app.add_subcommand("resample", "Resample one dataset; writes CSV, provenance sidecar, and run manifest");
  add_resample_flags(res, f);
  res->add_option("--k", k, "Neighborhood size K")->capture_default_str();
  res->add_option("input", input, "Input dataset (.dat KEEL or .csv)")->required();
  res->add_option("output", output, "Output CSV")->required();

  BenchFlags b;
  auto* bench = app.add_subcommand("bench", "Cross-validated g-mean matrix plus Friedman/Holm rank report");
  add_resample_flags(bench, f);
  bench->add_option("--k", b.ks, "Neighborhood size grid, e.g. 5,11,15")->delimiter(',')->default_str("5");
  bench->add_option("--methods", b.methods, "Comma-separated methods")->capture_default_str();
  bench->add_option("--folds", b.folds, "Cross-validation folds")->capture_default_str();
  bench->add_option("--classifier-k", b.classifier_k, "k of the kNN classifier")->capture_default_str();
  bench->add_option("--fixtures", b.fixtures, "Rank a score-matrix CSV or directory instead of running CV");
  bench->add_option("--matrix-out", b.matrix_out, "Where to write the g-mean matrix")->capture_default_str();
  bench->add_option("--report", b.report, "Report format: md | json")->capture_default_str();
  bench->add_option("--report-out", b.report_out, "Write the report here instead of stdout");
  bench->add_option("--alpha", b.alpha, "Holm significance level")->capture_default_str();
  bench->add_flag("--two-sided", b.two_sided, "Two-sided Holm p-values");
  bench->add_option("inputs", b.inputs, "Dataset files or directories");

  auto* stats = app.add_subcommand("index-stats", "Build a spill tree and report its shape and recall@k");
  add_engine_flags(stats, f);
  add_input_flags(stats, f);
  stats->add_option("--k", k, "Neighbors for recall@k")->capture_default_str();
  stats->add_option("--seed", f.seed, "Root seed")->capture_default_str();
  stats->add_option("--report", report, "md | json")->capture_default_str();
  stats->add_option("input", input, "Input dataset")->required();

  std::size_t gen_m = 2000, gen_dim = 2;
  double gen_ir = 10.0, gen_sep = 2.0;
  auto* gen = app.add_subcommand("generate", "Write a two-Gaussian CSV (label column 'class')");
  gen->add_option("--m", gen_m, "Samples")->capture_default_str();
  gen->add_option("--ir", gen_ir, "Imbalance ratio")->capture_default_str();
  gen->add_option("--dim", gen_dim, "Features")->capture_default_str();
  gen->add_option("--separation", gen_sep, "Distance between class means")->capture_default_str();
  gen->add_option("--seed", f.seed, "Seed")->capture_default_str();
  gen->add_option("output", output, "Output CSV")->required();

  auto* replay = app.add_subcommand("replay", "Re-run a resample manifest and compare output digests");
  replay->add_option("manifest", manifest, "*.manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*res) return cmd_resample(f, k, input, output);
    if (*bench) return cmd_bench(f, b);
    if (*stats) return cmd_index_stats(f, k, input, report);
    if (*gen) return cmd_generate(gen_m, gen_ir, gen_dim, gen_sep, f.seed, output);
    if (*replay) return cmd_replay(manifest);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
