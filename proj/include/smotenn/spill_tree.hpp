#pragma once

#include "smotenn/knn.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace smotenn {

/// Hybrid spill tree.
///
/// Each internal node splits its points along the line from pivot p_l to
/// pivot p_r (p_l is the point farthest from a random member, p_r the point
/// farthest from p_l). With L the median projection, a spill split sends
/// everything at or left of L + tau to the left child and everything at or
/// right of L - tau to the right child, so points in the band are shared. If
/// either spill child would exceed rho * |node|, the node falls back to a
/// metric split (projection <= L goes left) with no sharing.
///
/// Search descends by the side of L the query projects to. Metric nodes are
/// backtracked with the usual bound test; overlap nodes are not when
/// `defeatist_search` is set (unless fewer than k candidates were found).
class SpillTreeIndex final : public NeighborSearcher {
 public:
  struct Node {
    // Internal nodes: children[0] = left, children[1] = right.
    std::int32_t children[2] = {-1, -1};
    bool overlap = false;
    std::uint32_t depth = 0;
    // Projection axis: origin at p_l, unit direction towards p_r.
    FeatureRow origin;
    FeatureRow direction;
    double boundary = 0.0;
    // Largest projection held by the left child and smallest held by the right.
    double left_max = 0.0;
    double right_min = 0.0;
    // Leaves: range into leaf_rows_.
    std::size_t begin = 0;
    std::size_t end = 0;

    bool is_leaf() const { return children[0] < 0; }
  };

  struct Stats {
    std::size_t point_count = 0;
    std::size_t node_count = 0;
    std::size_t leaf_count = 0;
    std::size_t overlap_nodes = 0;
    std::size_t internal_nodes = 0;
    std::size_t max_depth = 0;
    /// Leaf count per depth.
    std::vector<std::size_t> depth_histogram;
    std::size_t min_leaf = 0;
    std::size_t max_leaf = 0;
    double mean_leaf = 0.0;
    /// Total leaf slots / point_count; 1.0 without spill splits.
    double replication = 0.0;

    double overlap_fraction() const {
      return internal_nodes == 0 ? 0.0 : static_cast<double>(overlap_nodes) / static_cast<double>(internal_nodes);
    }
  };

  /// Builds over every row of `data`, which must outlive the index.
  SpillTreeIndex(const Dataset& data, IndexConfig config, RngStream rng);
  /// Builds over a subset of rows.
  SpillTreeIndex(const Dataset& data, std::vector<std::size_t> rows, IndexConfig config, RngStream rng);

  NeighborSet query(QueryRow query, std::size_t k, std::optional<SampleId> exclude) const override;
  const Dataset& data() const override { return *data_; }

  const IndexConfig& config() const { return config_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  /// Dataset rows stored in leaf `node`.
  std::span<const std::size_t> leaf_rows(const Node& node) const;
  std::size_t point_count() const { return point_count_; }
  Stats stats() const;

 private:
  void build(std::vector<std::size_t> rows, RngStream rng);
  std::int32_t build_node(std::vector<std::size_t> rows, std::uint32_t depth, RngStream rng);
  std::int32_t make_leaf(const std::vector<std::size_t>& rows, std::uint32_t depth);
  void search(std::int32_t node, QueryRow query, std::optional<SampleId> exclude, TopK& top) const;

  const Dataset* data_;
  IndexConfig config_;
  std::size_t point_count_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::size_t> leaf_rows_;
};

}  // namespace smotenn
