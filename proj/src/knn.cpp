#include "smotenn/knn.hpp"

#include "smotenn/distance.hpp"
#include "smotenn/spill_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace smotenn {

double TopK::worst() const {
  return full() ? items_.back().sq : std::numeric_limits<double>::infinity();
}

void TopK::offer(double sq_distance, SampleId id, std::size_t row) {
  if (k_ == 0) return;
  auto before = [](double sa, SampleId ia, double sb, SampleId ib) { return sa < sb || (sa == sb && ia < ib); };
  if (full() && !before(sq_distance, id, items_.back().sq, items_.back().id)) return;
  for (const auto& it : items_) {
    if (it.row == row) return;
  }
  auto pos = items_.end();
  while (pos != items_.begin() && before(sq_distance, id, std::prev(pos)->sq, std::prev(pos)->id)) --pos;
  items_.insert(pos, Item{sq_distance, id, row});
  if (items_.size() > k_) items_.pop_back();
}

NeighborSet TopK::finish(std::optional<SampleId> query_id) const {
  NeighborSet out;
  out.query_id = query_id;
  out.neighbors.reserve(items_.size());
  for (const auto& it : items_) out.neighbors.push_back({it.id, it.row, std::sqrt(it.sq)});
  return out;
}

NeighborSet NeighborSearcher::query_row(std::size_t row, std::size_t k) const {
  const auto& d = data();
  return query(d.row(row), k, d.id(row));
}

BruteForceSearcher::BruteForceSearcher(const Dataset& data) : data_(&data), rows_(data.size()) {
  std::iota(rows_.begin(), rows_.end(), std::size_t{0});
}

BruteForceSearcher::BruteForceSearcher(const Dataset& data, std::vector<std::size_t> rows)
    : data_(&data), rows_(std::move(rows)) {}

NeighborSet BruteForceSearcher::query(QueryRow query, std::size_t k, std::optional<SampleId> exclude) const {
  const auto& d = *data_;
  if (rows_.empty()) throw StateError("query on an empty searcher");
  if (static_cast<std::size_t>(query.size()) != d.dim()) throw PreconditionError("query dimensionality mismatch");
  if (k + (exclude ? 1 : 0) > rows_.size()) {
    throw PreconditionError("k=" + std::to_string(k) + " must be smaller than the number of samples (" +
                            std::to_string(rows_.size()) + ")");
  }
  TopK top(k);
  for (auto i : rows_) {
    if (exclude && d.id(i) == *exclude) continue;
    top.offer(squared_distance(d.row(i), query), d.id(i), i);
  }
  return top.finish(exclude);
}

NeighborSet brute_force_knn(const Dataset& dataset, std::size_t row, std::size_t k) {
  return BruteForceSearcher(dataset).query_row(row, k);
}

NeighborSet brute_force_knn(const Dataset& dataset, QueryRow query, std::size_t k, std::optional<SampleId> exclude) {
  return BruteForceSearcher(dataset).query(query, k, exclude);
}

std::unique_ptr<NeighborSearcher> make_searcher(const Dataset& data, const EngineConfig& config, RngStream rng) {
  if (config.kind == EngineKind::Exact) return std::make_unique<BruteForceSearcher>(data);
  return std::make_unique<SpillTreeIndex>(data, config.index, rng);
}

std::unique_ptr<NeighborSearcher> make_searcher(const Dataset& data, std::vector<std::size_t> rows,
                                                const EngineConfig& config, RngStream rng) {
  if (config.kind == EngineKind::Exact) return std::make_unique<BruteForceSearcher>(data, std::move(rows));
  return std::make_unique<SpillTreeIndex>(data, std::move(rows), config.index, rng);
}

double recall_at_k(const NeighborSearcher& approx, const Dataset& dataset, std::size_t k) {
  if (k >= dataset.size()) throw PreconditionError("recall@k needs k < m");
  if (k == 0) return 1.0;
  BruteForceSearcher exact(dataset);
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto truth = exact.query_row(i, k);
    const auto got = approx.query(dataset.row(i), k, dataset.id(i));
    std::size_t hits = 0;
    for (const auto& a : got.neighbors) {
      for (const auto& b : truth.neighbors) {
        if (a.id == b.id) {
          ++hits;
          break;
        }
      }
    }
    total += static_cast<double>(hits) / static_cast<double>(k);
  }
  return total / static_cast<double>(dataset.size());
}

}  // namespace smotenn
