#include "smotenn/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace smotenn {

Dataset::Dataset(std::string name, FeatureMatrix features, std::vector<Label> labels, std::vector<SampleId> ids,
                 std::vector<ColumnSpec> columns, std::string minority_name, std::string majority_name)
    : name_(std::move(name)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      ids_(std::move(ids)),
      columns_(std::move(columns)),
      minority_name_(std::move(minority_name)),
      majority_name_(std::move(majority_name)) {
  const auto m = labels_.size();
  if (static_cast<std::size_t>(features_.rows()) != m || ids_.size() != m) {
    throw ParseError("dataset '" + name_ + "': feature rows, labels and ids differ in length");
  }
  if (m < 2) throw ParseError("dataset '" + name_ + "': degenerate dataset (fewer than 2 samples)");
  if (!features_.allFinite()) throw ParseError("dataset '" + name_ + "': non-finite feature value");

  const bool has_minority = std::find(labels_.begin(), labels_.end(), Label::Minority) != labels_.end();
  const bool has_majority = std::find(labels_.begin(), labels_.end(), Label::Majority) != labels_.end();
  if (!has_minority || !has_majority) {
    throw ParseError("dataset '" + name_ + "': degenerate dataset (one class absent)");
  }

  std::unordered_set<SampleId> seen;
  seen.reserve(m);
  for (auto id : ids_) {
    if (!seen.insert(id).second) throw ParseError("dataset '" + name_ + "': duplicate sample id " + std::to_string(id));
  }

  if (columns_.empty()) {
    for (Eigen::Index j = 0; j < features_.cols(); ++j) {
      columns_.push_back({"x" + std::to_string(j), ColumnKind::Real, features_.col(j).minCoeff(),
                          features_.col(j).maxCoeff()});
    }
  } else if (columns_.size() != static_cast<std::size_t>(features_.cols())) {
    throw ParseError("dataset '" + name_ + "': column metadata does not match feature count");
  }
}

Dataset Dataset::with_sequential_ids(std::string name, FeatureMatrix features, std::vector<Label> labels) {
  std::vector<SampleId> ids(labels.size());
  std::iota(ids.begin(), ids.end(), SampleId{0});
  return Dataset(std::move(name), std::move(features), std::move(labels), std::move(ids));
}

SampleId Dataset::max_id() const { return *std::max_element(ids_.begin(), ids_.end()); }

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  FeatureMatrix f(static_cast<Eigen::Index>(rows.size()), features_.cols());
  std::vector<Label> labels;
  std::vector<SampleId> ids;
  labels.reserve(rows.size());
  ids.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    f.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(rows[r]));
    labels.push_back(labels_[rows[r]]);
    ids.push_back(ids_[rows[r]]);
  }
  return Dataset(name_, std::move(f), std::move(labels), std::move(ids), columns_, minority_name_, majority_name_);
}

Dataset Dataset::with_features(FeatureMatrix features) const {
  return Dataset(name_, std::move(features), labels_, ids_, columns_, minority_name_, majority_name_);
}

ImbalanceStats compute_imbalance(std::span<const Label> labels) {
  ImbalanceStats s;
  for (auto l : labels) {
    if (l == Label::Minority) {
      ++s.minority_count;
    } else {
      ++s.majority_count;
    }
  }
  if (s.minority_count == 0 || s.majority_count == 0) throw ParseError("degenerate dataset: one class absent");
  s.ir = static_cast<double>(s.majority_count) / static_cast<double>(s.minority_count);
  return s;
}

ImbalanceStats compute_imbalance(const Dataset& dataset) { return compute_imbalance(dataset.labels()); }

ClassSplit split_by_class(const Dataset& dataset) {
  ClassSplit split;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (dataset.label(i) == Label::Minority ? split.minority : split.majority).push_back(i);
  }
  return split;
}

}  // namespace smotenn
