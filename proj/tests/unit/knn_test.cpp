#include "smotenn/distance.hpp"
#include "smotenn/knn.hpp"
#include "smotenn/spill_tree.hpp"
#include "smotenn/synthetic.hpp"

#include "../oracle/reference.hpp"
#include "../support/gen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

using namespace smotenn;

namespace {

Dataset line(std::vector<double> xs, std::vector<SampleId> ids = {}) {
  FeatureMatrix f(static_cast<Eigen::Index>(xs.size()), 1);
  std::vector<Label> labels;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    f(static_cast<Eigen::Index>(i), 0) = xs[i];
    labels.push_back(i == 0 ? Label::Minority : Label::Majority);
  }
  if (ids.empty()) {
    for (std::size_t i = 0; i < xs.size(); ++i) ids.push_back(static_cast<SampleId>(i));
  }
  return Dataset("line", f, labels, ids);
}

std::vector<SampleId> ids_of(const NeighborSet& s) {
  std::vector<SampleId> out;
  for (const auto& n : s.neighbors) out.push_back(n.id);
  return out;
}

IndexConfig exact_tree(std::size_t leaf = 4) {
  IndexConfig c;
  c.tau = 0.0;
  c.defeatist_search = false;
  c.leaf_size = leaf;
  return c;
}

}  // namespace

TEST(Distance, SquaredDistanceAndInterpolate) {
  Eigen::RowVector2d a(0, 0), b(2, 4);
  EXPECT_DOUBLE_EQ(squared_distance(a, b), 20.0);
  EXPECT_TRUE(interpolate(a, b, 0.5).isApprox(Eigen::RowVector2d(1, 2)));
  EXPECT_EQ(interpolate(a, b, 0.0), a);
  const Eigen::RowVector2f af(1, 1), bf(4, 5);
  EXPECT_FLOAT_EQ(squared_distance(af, bf), 25.0f);
}

TEST(BruteForce, PointsOnALine) {
  const auto d = line({0, 1, 2, 10});
  EXPECT_EQ(ids_of(brute_force_knn(d, 0, 2)), (std::vector<SampleId>{1, 2}));
  const auto nb = brute_force_knn(d, 0, 3);
  EXPECT_DOUBLE_EQ(nb.neighbors[2].distance, 10.0);
  EXPECT_EQ(nb.query_id, std::optional<SampleId>(0));
}

TEST(BruteForce, DuplicateTiesGoToLowerId) {
  const auto d = line({0, 1, 1, -1, 1}, {50, 9, 4, 7, 2});
  EXPECT_EQ(ids_of(brute_force_knn(d, 0, 4)), (std::vector<SampleId>{2, 4, 7, 9}));
}

TEST(BruteForce, Errors) {
  const auto d = line({0, 1, 2, 10});
  EXPECT_THROW(brute_force_knn(d, 0, 4), PreconditionError);
  Eigen::RowVector2d q(0, 0);
  EXPECT_THROW(brute_force_knn(d, q, 1), PreconditionError);
}

TEST(BruteForce, MatchesQuadraticReference) {
  const auto d = testgen::make({100, 5, 30}, RngStream(11, 0));
  const auto t = ref::Table::from(d);
  const auto rows = ref::all_rows(t);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto got = brute_force_knn(d, i, 5);
    const auto want = ref::knn(t, t.x[i], 5, rows, t.id[i]);
    ASSERT_EQ(got.neighbors.size(), 5u);
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(got.neighbors[j].row, want[j]);
      EXPECT_TRUE(j == 0 || got.neighbors[j - 1].distance <= got.neighbors[j].distance);
    }
  }
}

TEST(SpillTree, CollinearMetricTree) {
  const auto d = line({0, 1, 2, 3, 4, 5, 6, 7});
  const SpillTreeIndex tree(d, exact_tree(2), RngStream(1, 0));
  const auto s = tree.stats();
  EXPECT_EQ(s.max_depth + 1, 3u);  // three levels: root, two internal, four leaves
  EXPECT_EQ(s.leaf_count, 4u);
  EXPECT_EQ(s.overlap_nodes, 0u);
  EXPECT_DOUBLE_EQ(s.replication, 1.0);
  std::set<std::size_t> seen;
  for (const auto& n : tree.nodes()) {
    if (!n.is_leaf()) continue;
    EXPECT_EQ(n.end - n.begin, 2u);
    for (auto r : tree.leaf_rows(n)) EXPECT_TRUE(seen.insert(r).second);
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(SpillTree, BandMembersAreShared) {
  const auto d = line({0, 1, 2, 3, 4, 5, 6, 7});
  IndexConfig c;
  c.tau = 0.5 / 7.0;  // half the spacing, relative to the projected spread of 7
  c.leaf_size = 5;
  c.rho = 0.7;
  const SpillTreeIndex tree(d, c, RngStream(1, 0));
  const auto& root = tree.nodes()[0];
  ASSERT_FALSE(root.is_leaf());
  EXPECT_TRUE(root.overlap);
  std::map<std::size_t, int> count;
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf()) {
      for (auto r : tree.leaf_rows(n)) ++count[r];
    }
  }
  std::vector<double> shared;
  for (const auto& [r, c2] : count) {
    if (c2 > 1) shared.push_back(d.row(r)(0));
  }
  // Lower median of the projections sits at the 4th point from p_l; only that point is within +-0.5.
  ASSERT_EQ(shared.size(), 1u);
  EXPECT_TRUE(shared[0] == 3.0 || shared[0] == 4.0);
  EXPECT_EQ(count.size(), 8u);
}

TEST(SpillTree, SingleLeafIsExhaustive) {
  const auto d = line({0, 1, 2, 10});
  const SpillTreeIndex tree(d, IndexConfig{}, RngStream(2, 0));
  EXPECT_EQ(tree.stats().leaf_count, 1u);
  EXPECT_EQ(tree.stats().max_depth, 0u);
  EXPECT_EQ(ids_of(tree.query_row(0, 2)), (std::vector<SampleId>{1, 2}));
}

TEST(SpillTree, IdenticalPointsGiveOneLeaf) {
  FeatureMatrix f = FeatureMatrix::Ones(40, 3);
  std::vector<Label> labels(40, Label::Majority);
  labels[0] = Label::Minority;
  const auto d = Dataset::with_sequential_ids("same", f, labels);
  const SpillTreeIndex tree(d, exact_tree(4), RngStream(2, 0));
  EXPECT_EQ(tree.stats().leaf_count, 1u);
  EXPECT_EQ(ids_of(tree.query_row(5, 3)), (std::vector<SampleId>{0, 1, 2}));
}

TEST(SpillTree, DepthBoundOnUniformCube) {
  RngStream r(8, 0);
  FeatureMatrix f(1000, 3);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = r.uniform01();
  std::vector<Label> labels(1000, Label::Majority);
  labels[0] = Label::Minority;
  const auto d = Dataset::with_sequential_ids("cube", f, labels);
  const SpillTreeIndex tree(d, exact_tree(16), RngStream(3, 0));
  EXPECT_LE(static_cast<double>(tree.stats().max_depth), 2.0 * std::log2(1000.0 / 16.0) + 2.0);
}

TEST(SpillTree, EveryPointReachable) {
  const auto d = testgen::make({500, 4, 100}, RngStream(5, 0));
  const SpillTreeIndex tree(d, IndexConfig{}, RngStream(5, 1));
  std::set<std::size_t> seen;
  for (const auto& n : tree.nodes()) {
    if (n.is_leaf()) {
      for (auto r : tree.leaf_rows(n)) seen.insert(r);
    }
  }
  EXPECT_EQ(seen.size(), d.size());
  EXPECT_GE(tree.stats().replication, 1.0);
}

TEST(SpillTree, ExactModeMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream g(seed, 99);
    const auto d = testgen::make(testgen::random_shape(g, 30, 400, 6), RngStream(seed, 1));
    const SpillTreeIndex tree(d, exact_tree(1 + static_cast<std::size_t>(g.below(20))), RngStream(seed, 2));
    for (std::size_t i = 0; i < d.size(); ++i) {
      ASSERT_EQ(ids_of(tree.query_row(i, 5)), ids_of(brute_force_knn(d, i, 5))) << "seed " << seed << " row " << i;
    }
  }
}

TEST(SpillTree, SubsetIndexOnlyReturnsSubsetRows) {
  const auto d = testgen::make({200, 2, 50}, RngStream(4, 0));
  const auto minority = split_by_class(d).minority;
  const SpillTreeIndex tree(d, minority, exact_tree(4), RngStream(4, 1));
  const BruteForceSearcher brute(d, minority);
  const std::set<std::size_t> allowed(minority.begin(), minority.end());
  for (auto i : minority) {
    const auto a = tree.query_row(i, 5);
    EXPECT_EQ(ids_of(a), ids_of(brute.query_row(i, 5)));
    for (const auto& n : a.neighbors) EXPECT_TRUE(allowed.contains(n.row));
  }
}

TEST(SpillTree, EmptyIndexIsStateError) {
  const auto d = line({0, 1, 2});
  const SpillTreeIndex tree(d, std::vector<std::size_t>{}, IndexConfig{}, RngStream(0, 0));
  Eigen::Matrix<double, 1, 1> q(0.0);
  EXPECT_THROW(tree.query(q, 1, std::nullopt), StateError);
}

TEST(SpillTree, DefaultsRecallOnGaussians) {
  const auto d = two_gaussians(1000, 1000, 4, 3.0, RngStream(21, 0));
  const SpillTreeIndex tree(d, IndexConfig{}, RngStream(21, 1));
  EXPECT_GE(recall_at_k(tree, d, 5), 0.90);
}

TEST(Recall, SelfIsOneDisjointIsZero) {
  const auto d = testgen::make({100, 3, 20}, RngStream(6, 0));
  const BruteForceSearcher brute(d);
  EXPECT_DOUBLE_EQ(recall_at_k(brute, d, 5), 1.0);

  // A searcher that always answers with the k farthest points.
  struct Farthest final : NeighborSearcher {
    const Dataset* d;
    explicit Farthest(const Dataset& data) : d(&data) {}
    NeighborSet query(QueryRow q, std::size_t k, std::optional<SampleId> exclude) const override {
      std::vector<std::pair<double, std::size_t>> all;
      for (std::size_t i = 0; i < d->size(); ++i) {
        if (exclude && d->id(i) == *exclude) continue;
        all.push_back({-squared_distance(q, d->row(i)), i});
      }
      std::sort(all.begin(), all.end());
      NeighborSet s;
      for (std::size_t j = 0; j < k; ++j) s.neighbors.push_back({d->id(all[j].second), all[j].second, 0.0});
      return s;
    }
    const Dataset& data() const override { return *d; }
  };
  EXPECT_DOUBLE_EQ(recall_at_k(Farthest(d), d, 5), 0.0);
}

TEST(TopK, KeepsBestAndDedupes) {
  TopK top(3);
  top.offer(4.0, 10, 0);
  top.offer(1.0, 11, 1);
  top.offer(1.0, 11, 1);
  top.offer(9.0, 12, 2);
  top.offer(1.0, 3, 3);
  top.offer(16.0, 1, 4);
  EXPECT_TRUE(top.full());
  EXPECT_DOUBLE_EQ(top.worst(), 4.0);
  const auto s = top.finish(std::nullopt);
  EXPECT_EQ(ids_of(s), (std::vector<SampleId>{3, 11, 10}));
  EXPECT_DOUBLE_EQ(s.neighbors[2].distance, 2.0);
}
