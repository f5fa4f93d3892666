#include "smotenn/spill_tree.hpp"

#include "smotenn/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace smotenn {
namespace {

std::size_t farthest_from(const Dataset& data, const std::vector<std::size_t>& rows, std::size_t from) {
  std::size_t best = rows.front();
  double best_sq = -1.0;
  for (auto r : rows) {
    const double sq = squared_distance(data.row(r), data.row(from));
    if (sq > best_sq) {
      best_sq = sq;
      best = r;
    }
  }
  return best;
}

}  // namespace

SpillTreeIndex::SpillTreeIndex(const Dataset& data, IndexConfig config, RngStream rng)
    : data_(&data), config_(config) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  build(std::move(rows), rng);
}

SpillTreeIndex::SpillTreeIndex(const Dataset& data, std::vector<std::size_t> rows, IndexConfig config, RngStream rng)
    : data_(&data), config_(config) {
  build(std::move(rows), rng);
}

void SpillTreeIndex::build(std::vector<std::size_t> rows, RngStream rng) {
  config_.validate();
  point_count_ = rows.size();
  if (rows.empty()) return;
  build_node(std::move(rows), 0, rng);
}

std::int32_t SpillTreeIndex::make_leaf(const std::vector<std::size_t>& rows, std::uint32_t depth) {
  Node leaf;
  leaf.depth = depth;
  leaf.begin = leaf_rows_.size();
  leaf_rows_.insert(leaf_rows_.end(), rows.begin(), rows.end());
  leaf.end = leaf_rows_.size();
  nodes_.push_back(std::move(leaf));
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t SpillTreeIndex::build_node(std::vector<std::size_t> rows, std::uint32_t depth, RngStream rng) {
  const auto& data = *data_;
  const std::size_t n = rows.size();
  if (n <= config_.leaf_size) return make_leaf(rows, depth);

  const std::size_t start = rows[static_cast<std::size_t>(rng.below(n))];
  const std::size_t pl = farthest_from(data, rows, start);
  const std::size_t pr = farthest_from(data, rows, pl);
  const double span_sq = squared_distance(data.row(pl), data.row(pr));
  if (span_sq == 0.0) return make_leaf(rows, depth);  // all points identical

  Node node;
  node.depth = depth;
  node.origin = data.row(pl);
  node.direction = (data.row(pr) - data.row(pl)) / std::sqrt(span_sq);

  std::vector<double> proj(n);
  for (std::size_t i = 0; i < n; ++i) proj[i] = (data.row(rows[i]) - node.origin).dot(node.direction);

  std::vector<double> sorted = proj;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((n - 1) / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double median = *mid;
  const auto [lo_it, hi_it] = std::minmax_element(proj.begin(), proj.end());
  const double tau = config_.tau * (*hi_it - *lo_it);

  std::vector<std::size_t> left, right;
  left.reserve(n / 2 + 1);
  right.reserve(n / 2 + 1);

  bool overlap = false;
  if (tau > 0.0) {
    std::size_t left_count = 0, right_count = 0;
    for (double p : proj) {
      left_count += p <= median + tau;
      right_count += p >= median - tau;
    }
    const double cap = config_.rho * static_cast<double>(n);
    overlap = static_cast<double>(left_count) <= cap && static_cast<double>(right_count) <= cap &&
              left_count < n && right_count < n;
  }

  node.overlap = overlap;
  node.boundary = median;
  node.left_max = -std::numeric_limits<double>::infinity();
  node.right_min = std::numeric_limits<double>::infinity();
  auto send = [&](std::vector<std::size_t>& side, std::size_t i) {
    side.push_back(rows[i]);
    if (&side == &left) {
      node.left_max = std::max(node.left_max, proj[i]);
    } else {
      node.right_min = std::min(node.right_min, proj[i]);
    }
  };

  if (overlap) {
    for (std::size_t i = 0; i < n; ++i) {
      if (proj[i] <= median + tau) send(left, i);
      if (proj[i] >= median - tau) send(right, i);
    }
  } else {
    // More than half of the projections may tie at the maximum; then split strictly below it.
    const std::size_t at_or_below = static_cast<std::size_t>(std::count_if(proj.begin(), proj.end(), [&](double p) { return p <= median; }));
    const bool strict = at_or_below == n;
    for (std::size_t i = 0; i < n; ++i) send((strict ? proj[i] < median : proj[i] <= median) ? left : right, i);
  }

  rows.clear();
  rows.shrink_to_fit();
  proj.clear();
  proj.shrink_to_fit();

  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(std::move(node));
  const auto l = build_node(std::move(left), depth + 1, rng.derive(0));
  const auto r = build_node(std::move(right), depth + 1, rng.derive(1));
  nodes_[static_cast<std::size_t>(self)].children[0] = l;
  nodes_[static_cast<std::size_t>(self)].children[1] = r;
  return self;
}

std::span<const std::size_t> SpillTreeIndex::leaf_rows(const Node& node) const {
  return {leaf_rows_.data() + node.begin, node.end - node.begin};
}

NeighborSet SpillTreeIndex::query(QueryRow query, std::size_t k, std::optional<SampleId> exclude) const {
  if (nodes_.empty()) throw StateError("query on an empty spill tree index");
  if (static_cast<std::size_t>(query.size()) != data_->dim()) throw PreconditionError("query dimensionality mismatch");
  if (k + (exclude ? 1 : 0) > point_count_) {
    throw PreconditionError("k=" + std::to_string(k) + " must be smaller than the indexed point count (" +
                            std::to_string(point_count_) + ")");
  }
  TopK top(k);
  search(0, query, exclude, top);
  return top.finish(exclude);
}

void SpillTreeIndex::search(std::int32_t index, QueryRow query, std::optional<SampleId> exclude, TopK& top) const {
  const Node& node = nodes_[static_cast<std::size_t>(index)];
  const auto& data = *data_;
  if (node.is_leaf()) {
    for (auto r : leaf_rows(node)) {
      if (exclude && data.id(r) == *exclude) continue;
      top.offer(squared_distance(data.row(r), query), data.id(r), r);
    }
    return;
  }

  const double p = (query - node.origin).dot(node.direction);
  const int near = p <= node.boundary ? 0 : 1;
  const int far = 1 - near;
  search(node.children[near], query, exclude, top);

  if (node.overlap && config_.defeatist_search && top.full()) return;
  const double gap = far == 1 ? std::max(0.0, node.right_min - p) : std::max(0.0, p - node.left_max);
  if (!top.full()) {
    search(node.children[far], query, exclude, top);
    return;
  }
  // Projection onto a unit vector never increases distances, so the gap is a
  // lower bound for every point on the far side. The slack absorbs rounding.
  const double radius = std::sqrt(top.worst());
  if (gap <= radius + 1e-9 * (1.0 + radius)) search(node.children[far], query, exclude, top);
}

SpillTreeIndex::Stats SpillTreeIndex::stats() const {
  Stats s;
  s.point_count = point_count_;
  s.node_count = nodes_.size();
  s.min_leaf = std::numeric_limits<std::size_t>::max();
  std::size_t slots = 0;
  for (const auto& n : nodes_) {
    s.max_depth = std::max<std::size_t>(s.max_depth, n.depth);
    if (n.is_leaf()) {
      ++s.leaf_count;
      const auto size = n.end - n.begin;
      slots += size;
      s.min_leaf = std::min(s.min_leaf, size);
      s.max_leaf = std::max(s.max_leaf, size);
      if (s.depth_histogram.size() <= n.depth) s.depth_histogram.resize(n.depth + 1, 0);
      ++s.depth_histogram[n.depth];
    } else {
      ++s.internal_nodes;
      s.overlap_nodes += n.overlap;
    }
  }
  if (s.leaf_count == 0) s.min_leaf = 0;
  s.mean_leaf = s.leaf_count == 0 ? 0.0 : static_cast<double>(slots) / static_cast<double>(s.leaf_count);
  s.replication = point_count_ == 0 ? 0.0 : static_cast<double>(slots) / static_cast<double>(point_count_);
  return s;
}

}  // namespace smotenn
