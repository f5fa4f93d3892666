#include "smotenn/stats.hpp"

#include "smotenn/ingest.hpp"
#include "smotenn/types.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace smotenn {

namespace {

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

ScoreMatrix load_score_matrix(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(csv.string() + ": empty file");
  const auto header = split_csv_record(line);

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_record(line);
    if (cells.size() != header.size()) {
      throw ParseError(csv.string() + ": row " + std::to_string(rows.size() + 1) + " has " +
                       std::to_string(cells.size()) + " cells, header has " + std::to_string(header.size()));
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw ParseError(csv.string() + ": no data rows");

  std::size_t label_cols = 0;
  while (label_cols < header.size() &&
         std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return !is_number(r[label_cols]); })) {
    ++label_cols;
  }
  if (header.size() - label_cols < 2) throw ParseError(csv.string() + ": need at least two numeric method columns");

  ScoreMatrix m;
  m.methods.assign(header.begin() + static_cast<std::ptrdiff_t>(label_cols), header.end());
  m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.methods.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string label;
    for (std::size_t c = 0; c < label_cols; ++c) label += (c ? "/" : "") + rows[i][c];
    m.row_labels.push_back(label);
    for (std::size_t j = label_cols; j < header.size(); ++j) {
      if (!is_number(rows[i][j])) {
        throw ParseError(csv.string() + ": row " + std::to_string(i + 1) + ", column " + header[j] + " is not numeric");
      }
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - label_cols)) = std::stod(rows[i][j]);
    }
  }
  return m;
}

ScoreMatrix load_score_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) return load_score_matrix(dir);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .csv files in " + dir.string());

  ScoreMatrix out;
  std::vector<Eigen::MatrixXd> parts;
  Eigen::Index total = 0;
  for (const auto& f : files) {
    auto m = load_score_matrix(f);
    if (out.methods.empty()) {
      out.methods = m.methods;
    } else if (m.methods != out.methods) {
      throw ParseError(f.string() + ": method columns differ from " + files.front().string());
    }
    out.row_labels.insert(out.row_labels.end(), m.row_labels.begin(), m.row_labels.end());
    total += m.values.rows();
    parts.push_back(std::move(m.values));
  }
  out.values.resize(total, static_cast<Eigen::Index>(out.methods.size()));
  Eigen::Index r = 0;
  for (const auto& p : parts) {
    out.values.middleRows(r, p.rows()) = p;
    r += p.rows();
  }
  return out;
}

void write_score_matrix(const std::filesystem::path& csv, const ScoreMatrix& m) {
  std::ofstream out(csv);
  if (!out) throw IoError("cannot write " + csv.string());
  out << "experiment";
  for (const auto& name : m.methods) out << ',' << name;
  out << '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    out << m.row_labels.at(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) out << ',' << fmt("%.17g", m.values(i, j));
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + csv.string());
}

FriedmanResult friedman_iman_davenport(const Eigen::MatrixXd& scores) {
  const auto n = scores.rows();
  const auto k = scores.cols();
  if (k < 2) throw PreconditionError("Friedman test needs at least 2 methods");
  if (n < 2) throw PreconditionError("Friedman test needs at least 2 rows");

  FriedmanResult r;
  r.rows = static_cast<std::size_t>(n);
  r.methods = static_cast<std::size_t>(k);
  r.avg_ranks = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < n; ++i) r.avg_ranks += rank_row(scores.row(i).transpose());
  r.avg_ranks /= static_cast<double>(n);

  const double N = static_cast<double>(n);
  const double K = static_cast<double>(k);
  r.chi2 = 12.0 * N / (K * (K + 1.0)) * (r.avg_ranks.squaredNorm() - K * (K + 1.0) * (K + 1.0) / 4.0);
  if (std::abs(r.chi2) < 1e-12) r.chi2 = 0.0;

  const double denom = N * (K - 1.0) - r.chi2;
  if (r.chi2 == 0.0) {
    r.f_statistic = 0.0;
    r.p_value = 1.0;
  } else if (denom <= 0.0) {
    // Every row ranks the methods identically.
    r.f_statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
  } else {
    r.f_statistic = (N - 1.0) * r.chi2 / denom;
    const boost::math::fisher_f dist(K - 1.0, (K - 1.0) * (N - 1.0));
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.f_statistic));
  }
  return r;
}

std::vector<HolmRow> holm_posthoc(const Eigen::VectorXd& avg_ranks, std::size_t n_rows, double alpha, Tail tail) {
  const auto k = static_cast<std::size_t>(avg_ranks.size());
  if (k < 2) throw PreconditionError("Holm test needs at least 2 methods");
  if (n_rows < 1) throw PreconditionError("Holm test needs at least 1 row");

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return avg_ranks(static_cast<Eigen::Index>(a)) < avg_ranks(static_cast<Eigen::Index>(b)); });
  const double best = avg_ranks(static_cast<Eigen::Index>(order[0]));
  const double K = static_cast<double>(k);
  const double se = std::sqrt(K * (K + 1.0) / (6.0 * static_cast<double>(n_rows)));
  const boost::math::normal normal;

  std::vector<HolmRow> rows;
  for (std::size_t j = 1; j < k; ++j) {
    HolmRow h;
    h.method = order[j];
    h.avg_rank = avg_ranks(static_cast<Eigen::Index>(h.method));
    h.z = (h.avg_rank - best) / se;
    const double upper = boost::math::cdf(boost::math::complement(normal, std::abs(h.z)));
    h.p_value = tail == Tail::OneSided ? boost::math::cdf(boost::math::complement(normal, h.z)) : 2.0 * upper;
    h.threshold = alpha / static_cast<double>(j);
    rows.push_back(h);
  }

  // Step down from the strictest threshold (worst rank, smallest p).
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->p_value > it->threshold) break;
    it->reject = true;
  }
  return rows;
}

std::vector<WinsTiesLosses> wins_ties_losses(const Eigen::MatrixXd& scores, std::size_t control) {
  const auto c = static_cast<Eigen::Index>(control);
  if (c >= scores.cols()) throw PreconditionError("control column out of range");
  std::vector<WinsTiesLosses> out(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    auto& w = out[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      if (scores(i, j) > scores(i, c)) {
        ++w.wins;
      } else if (scores(i, j) < scores(i, c)) {
        ++w.losses;
      } else {
        ++w.ties;
      }
    }
  }
  return out;
}

std::size_t RankReport::method_index(const std::string& name) const {
  const auto it = std::find(method_names.begin(), method_names.end(), name);
  if (it == method_names.end()) throw ConfigError("unknown method column: " + name);
  return static_cast<std::size_t>(it - method_names.begin());
}

const HolmRow& RankReport::holm_for(const std::string& name) const {
  const auto idx = method_index(name);
  for (const auto& h : holm) {
    if (h.method == idx) return h;
  }
  throw ConfigError(name + " is the control method and has no Holm row");
}

RankReport rank_report(const ScoreMatrix& scores, double alpha, Tail tail) {
  RankReport r;
  r.method_names = scores.methods;
  r.friedman = friedman_iman_davenport(scores.values);
  r.avg_ranks = r.friedman.avg_ranks;
  r.alpha = alpha;
  r.tail = tail;
  r.holm = holm_posthoc(r.avg_ranks, r.friedman.rows, alpha, tail);
  Eigen::Index best = 0;
  r.avg_ranks.minCoeff(&best);
  r.control = static_cast<std::size_t>(best);
  r.wins_ties_losses = wins_ties_losses(scores.values, r.control);
  r.mean_scores = scores.values.colwise().mean().transpose();
  const double n = static_cast<double>(scores.values.rows());
  r.std_scores = ((scores.values.rowwise() - r.mean_scores.transpose()).array().square().colwise().sum() / std::max(1.0, n - 1.0))
                     .sqrt()
                     .transpose();
  return r;
}

std::string to_markdown(const RankReport& r) {
  std::ostringstream out;
  out << "| Method | Avg. rank | Mean ± SD | p-value | alpha/(j-1) | Outcome | W/T/L |\n";
  out << "|---|---|---|---|---|---|---|\n";
  auto row = [&](std::size_t m, const HolmRow* h) {
    const auto i = static_cast<Eigen::Index>(m);
    const auto& w = r.wins_ties_losses[m];
    out << "| " << r.method_names[m] << " | " << fmt("%.2f", r.avg_ranks(i)) << " | " << fmt("%.2f", r.mean_scores(i))
        << " ± " << fmt("%.2f", r.std_scores(i)) << " | ";
    if (h) {
      out << (h->p_value < 0.001 ? std::string("<0.001") : fmt("%.3f", h->p_value)) << " | " << fmt("%.3f", h->threshold)
          << " | " << (h->reject ? "reject" : "not reject") << " | " << w.wins << '/' << w.ties << '/' << w.losses;
    } else {
      out << "- | - | control | -";
    }
    out << " |\n";
  };
  row(r.control, nullptr);
  for (const auto& h : r.holm) row(h.method, &h);
  out << "\nFriedman chi2 = " << fmt("%.4f", r.friedman.chi2) << ", Iman-Davenport F = " << fmt("%.4f", r.friedman.f_statistic)
      << " (df " << r.friedman.methods - 1 << ", " << (r.friedman.methods - 1) * (r.friedman.rows - 1)
      << "), p = " << fmt("%.3g", r.friedman.p_value) << "; N = " << r.friedman.rows << ", "
      << (r.tail == Tail::OneSided ? "one-sided" : "two-sided") << " Holm p-values, alpha = " << fmt("%g", r.alpha) << '\n';
  return out.str();
}

std::string to_json(const RankReport& r) {
  nlohmann::json j;
  j["methods"] = r.method_names;
  j["avg_ranks"] = std::vector<double>(r.avg_ranks.data(), r.avg_ranks.data() + r.avg_ranks.size());
  j["mean_scores"] = std::vector<double>(r.mean_scores.data(), r.mean_scores.data() + r.mean_scores.size());
  j["std_scores"] = std::vector<double>(r.std_scores.data(), r.std_scores.data() + r.std_scores.size());
  j["control"] = r.method_names[r.control];
  j["friedman"] = {{"chi2", r.friedman.chi2},
                   {"iman_davenport_f", std::isfinite(r.friedman.f_statistic) ? nlohmann::json(r.friedman.f_statistic)
                                                                              : nlohmann::json("inf")},
                   {"p_value", r.friedman.p_value},
                   {"rows", r.friedman.rows},
                   {"methods", r.friedman.methods}};
  j["alpha"] = r.alpha;
  j["tail"] = r.tail == Tail::OneSided ? "one-sided" : "two-sided";
  j["holm"] = nlohmann::json::array();
  for (const auto& h : r.holm) {
    const auto& w = r.wins_ties_losses[h.method];
    j["holm"].push_back({{"method", r.method_names[h.method]},
                         {"avg_rank", h.avg_rank},
                         {"z", h.z},
                         {"p_value", h.p_value},
                         {"threshold", h.threshold},
                         {"decision", h.reject ? "reject" : "not_reject"},
                         {"wins_ties_losses", {w.wins, w.ties, w.losses}}});
  }
  return j.dump(2);
}

}  // namespace smotenn
