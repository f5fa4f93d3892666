#pragma once

#include "smotenn/dataset.hpp"
#include "smotenn/rng.hpp"
#include "smotenn/spec.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace smotenn {

struct Neighbor {
  SampleId id = 0;
  /// Row position in the dataset the searcher was built over.
  std::size_t row = 0;
  double distance = 0.0;
};

/// k nearest neighbors of one query, ascending by (distance, id).
struct NeighborSet {
  std::optional<SampleId> query_id;
  std::vector<Neighbor> neighbors;
};

using QueryRow = Eigen::Ref<const FeatureRow>;

/// Bounded candidate list ordered by (squared distance, id). Keeps at most k
/// entries and ignores rows already present.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) { items_.reserve(k + 1); }

  bool full() const { return items_.size() >= k_; }
  std::size_t size() const { return items_.size(); }
  /// Squared distance of the current k-th candidate (infinity while not full).
  double worst() const;
  void offer(double sq_distance, SampleId id, std::size_t row);
  NeighborSet finish(std::optional<SampleId> query_id) const;

 private:
  struct Item {
    double sq;
    SampleId id;
    std::size_t row;
  };
  std::size_t k_;
  std::vector<Item> items_;
};

/// A k-NN query engine over a fixed dataset. The dataset must outlive it.
class NeighborSearcher {
 public:
  virtual ~NeighborSearcher() = default;
  /// k nearest rows to `query`, skipping the row whose id equals `exclude`.
  virtual NeighborSet query(QueryRow query, std::size_t k, std::optional<SampleId> exclude) const = 0;
  /// Neighbors of the dataset's own row i (self excluded).
  NeighborSet query_row(std::size_t row, std::size_t k) const;
  virtual const Dataset& data() const = 0;
};

/// Linear scan over every indexed row.
class BruteForceSearcher final : public NeighborSearcher {
 public:
  explicit BruteForceSearcher(const Dataset& data);
  /// Searches only the given rows of `data`.
  BruteForceSearcher(const Dataset& data, std::vector<std::size_t> rows);
  NeighborSet query(QueryRow query, std::size_t k, std::optional<SampleId> exclude) const override;
  const Dataset& data() const override { return *data_; }

 private:
  const Dataset* data_;
  std::vector<std::size_t> rows_;
};

/// Exact k-NN of a dataset row (self excluded). Ties go to the smaller id.
NeighborSet brute_force_knn(const Dataset& dataset, std::size_t row, std::size_t k);
/// Exact k-NN of an arbitrary point. `exclude` removes one id from consideration.
NeighborSet brute_force_knn(const Dataset& dataset, QueryRow query, std::size_t k,
                            std::optional<SampleId> exclude = std::nullopt);

/// Builds the configured engine over `data`; `rng` seeds spill-tree pivots.
std::unique_ptr<NeighborSearcher> make_searcher(const Dataset& data, const EngineConfig& config, RngStream rng);
/// Same, restricted to a subset of rows. Returned neighbor rows index `data`.
std::unique_ptr<NeighborSearcher> make_searcher(const Dataset& data, std::vector<std::size_t> rows,
                                                const EngineConfig& config, RngStream rng);

/// Mean over all rows of |approx ∩ exact| / k, self excluded.
double recall_at_k(const NeighborSearcher& approx, const Dataset& dataset, std::size_t k);

}  // namespace smotenn
