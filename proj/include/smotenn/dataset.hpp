#pragma once

#include "smotenn/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace smotenn {

enum class ColumnKind { Real, Integer, Class };

/// Column metadata. observed_min/max are the raw ranges seen at ingestion,
/// kept so normalized features can be mapped back.
struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Real;
  double observed_min = 0.0;
  double observed_max = 0.0;
};

/// Immutable table of labelled feature vectors.
///
/// Invariants (checked on construction): m >= 2, both labels present, all
/// features finite, ids unique. Row i of `features()` belongs to `ids()[i]`.
class Dataset {
 public:
  Dataset(std::string name, FeatureMatrix features, std::vector<Label> labels, std::vector<SampleId> ids,
          std::vector<ColumnSpec> columns = {}, std::string minority_name = "positive",
          std::string majority_name = "negative");

  /// Same as the checked constructor, with ids 0..m-1.
  static Dataset with_sequential_ids(std::string name, FeatureMatrix features, std::vector<Label> labels);

  const std::string& name() const { return name_; }
  const FeatureMatrix& features() const { return features_; }
  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<SampleId>& ids() const { return ids_; }
  const std::vector<ColumnSpec>& columns() const { return columns_; }
  const std::string& minority_name() const { return minority_name_; }
  const std::string& majority_name() const { return majority_name_; }

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }
  auto row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)); }
  Label label(std::size_t i) const { return labels_[i]; }
  SampleId id(std::size_t i) const { return ids_[i]; }
  SampleId max_id() const;

  /// Rows at the given positions, in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;
  /// Same metadata with a different feature matrix (same shape).
  Dataset with_features(FeatureMatrix features) const;

 private:
  std::string name_;
  FeatureMatrix features_;
  std::vector<Label> labels_;
  std::vector<SampleId> ids_;
  std::vector<ColumnSpec> columns_;
  std::string minority_name_;
  std::string majority_name_;
};

struct ImbalanceStats {
  std::size_t minority_count = 0;
  std::size_t majority_count = 0;
  /// majority_count / minority_count, not clamped to >= 1.
  double ir = 0.0;
};

ImbalanceStats compute_imbalance(const Dataset& dataset);
ImbalanceStats compute_imbalance(std::span<const Label> labels);

/// Row positions of each class, in dataset order.
struct ClassSplit {
  std::vector<std::size_t> minority;
  std::vector<std::size_t> majority;
};

ClassSplit split_by_class(const Dataset& dataset);

}  // namespace smotenn
