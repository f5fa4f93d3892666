#pragma once

#include "smotenn/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace smotenn {

/// Rows are experiments (dataset x classifier), columns are methods.
struct ScoreMatrix {
  std::vector<std::string> methods;
  std::vector<std::string> row_labels;
  Eigen::MatrixXd values;
};

/// CSV with a header; the leading non-numeric columns (e.g. dataset,
/// classifier) become the row label, every remaining column is a method.
ScoreMatrix load_score_matrix(const std::filesystem::path& csv);
/// Stacks every *.csv in a directory (sorted by file name). Method columns
/// must agree across files.
ScoreMatrix load_score_directory(const std::filesystem::path& dir);
void write_score_matrix(const std::filesystem::path& csv, const ScoreMatrix& m);

/// Ranks one row: 1 = largest score, ties share the average rank.
template <typename Derived>
Eigen::VectorXd rank_row(const Eigen::MatrixBase<Derived>& row) {
  const Eigen::Index k = row.size();
  Eigen::VectorXd ranks(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index greater = 0, equal = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      greater += row(i) > row(j);
      equal += row(i) == row(j);
    }
    ranks(j) = static_cast<double>(greater) + (static_cast<double>(equal) + 1.0) / 2.0;
  }
  return ranks;
}

struct FriedmanResult {
  Eigen::VectorXd avg_ranks;
  double chi2 = 0.0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  std::size_t rows = 0;
  std::size_t methods = 0;
};

/// Friedman chi-square with the Iman-Davenport F correction.
FriedmanResult friedman_iman_davenport(const Eigen::MatrixXd& scores);

enum class Tail { OneSided, TwoSided };

struct HolmRow {
  std::size_t method = 0;  // column index
  double avg_rank = 0.0;
  double z = 0.0;
  double p_value = 0.0;
  double threshold = 0.0;
  bool reject = false;
};

/// Compares every method against the best-ranked one. Rows come back in rank
/// order (j = 2..k) with threshold alpha/(j-1); decisions follow Holm's
/// step-down rule.
std::vector<HolmRow> holm_posthoc(const Eigen::VectorXd& avg_ranks, std::size_t n_rows, double alpha = 0.05,
                                  Tail tail = Tail::OneSided);

struct WinsTiesLosses {
  std::size_t wins = 0;
  std::size_t ties = 0;
  std::size_t losses = 0;
  bool operator==(const WinsTiesLosses&) const = default;
};

/// Per column, how often it beats / ties / loses to the control column.
std::vector<WinsTiesLosses> wins_ties_losses(const Eigen::MatrixXd& scores, std::size_t control);

struct RankReport {
  std::vector<std::string> method_names;
  Eigen::VectorXd avg_ranks;
  Eigen::VectorXd mean_scores;
  Eigen::VectorXd std_scores;
  FriedmanResult friedman;
  std::size_t control = 0;
  double alpha = 0.05;
  Tail tail = Tail::OneSided;
  std::vector<HolmRow> holm;
  std::vector<WinsTiesLosses> wins_ties_losses;  // indexed by method column

  std::size_t method_index(const std::string& name) const;
  const HolmRow& holm_for(const std::string& name) const;
};

RankReport rank_report(const ScoreMatrix& scores, double alpha = 0.05, Tail tail = Tail::OneSided);

std::string to_markdown(const RankReport& report);
std::string to_json(const RankReport& report);

}  // namespace smotenn
