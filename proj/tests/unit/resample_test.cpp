#include "smotenn/knn.hpp"
#include "smotenn/resample.hpp"

#include "../oracle/reference.hpp"
#include "../support/gen.hpp"

#include <gtest/gtest.h>

using namespace smotenn;

namespace {

Dataset from_points(const std::vector<std::vector<double>>& pts, const std::vector<int>& minority) {
  FeatureMatrix f(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(pts[0].size()));
  std::vector<Label> labels;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts[i].size(); ++j) f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pts[i][j];
    labels.push_back(minority[i] ? Label::Minority : Label::Majority);
  }
  return Dataset::with_sequential_ids("pts", f, labels);
}

Dataset counts(std::size_t minority, std::size_t majority, std::uint64_t seed = 1) {
  testgen::Shape s;
  s.m = minority + majority;
  s.minority = minority;
  s.dim = 2;
  return testgen::make(s, RngStream(seed, 0));
}

ResampleSpec spec_for(Method m, std::size_t k = 5, std::size_t n = 1, double p = 4.0) {
  ResampleSpec s;
  s.method = m;
  s.k = k;
  s.n_oversample = n;
  s.p_ratio = p;
  return s;
}

}  // namespace

TEST(Rus, TargetRatio) {
  const auto d = counts(100, 1000);
  auto one = rus(d, 1.0, RngStream(1, 1));
  EXPECT_EQ(compute_imbalance(one.output).majority_count, 100u);
  EXPECT_DOUBLE_EQ(compute_imbalance(one.output).ir, 1.0);
  EXPECT_EQ(one.removed_ids.size(), 900u);
  EXPECT_EQ(one.synthetic_count, 0u);
  EXPECT_EQ(compute_imbalance(rus(d, 3.0, RngStream(1, 1)).output).majority_count, 300u);
}

TEST(Rus, CapKeepsEverything) {
  const auto d = counts(100, 250);
  const auto r = rus(d, 5.0, RngStream(1, 1));
  EXPECT_EQ(r.output.size(), 350u);
  EXPECT_TRUE(r.removed_ids.empty());
  EXPECT_THROW(rus(d, 0.0, RngStream(1, 1)), ConfigError);
}

TEST(Enn, LoneMajorityInMinorityCluster) {
  std::vector<std::vector<double>> pts{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}};
  std::vector<int> minority{0, 1, 1, 1, 1, 1};
  for (int i = 0; i < 10; ++i) {
    pts.push_back({50.0 + i, 50.0});
    minority.push_back(0);
  }
  const auto d = from_points(pts, minority);
  const auto r = enn(d, 5, 1.0, {}, RngStream(0, 0));
  EXPECT_EQ(r.removed_ids, (std::set<SampleId>{0}));
  EXPECT_EQ(r.edited_ids, (std::set<SampleId>{0}));
}

TEST(Enn, SeparatedClustersAreAFixpoint) {
  std::vector<std::vector<double>> pts;
  std::vector<int> minority;
  for (int i = 0; i < 10; ++i) {
    pts.push_back({static_cast<double>(i) * 0.1, 0});
    minority.push_back(1);
  }
  for (int i = 0; i < 30; ++i) {
    pts.push_back({100 + static_cast<double>(i) * 0.1, 0});
    minority.push_back(0);
  }
  const auto r = enn(from_points(pts, minority), 5, 1.0, {}, RngStream(0, 0));
  EXPECT_TRUE(r.removed_ids.empty());
  EXPECT_EQ(r.output.size(), 40u);
}

TEST(Enn, SinglePassMatchesReference) {
  testgen::Shape s;
  s.m = 60;
  s.minority = 25;
  s.separation = 0.8;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = testgen::make(s, RngStream(seed, 0));
    const auto marks = ref::enn_marks(ref::Table::from(d), 5);
    const auto st = compute_imbalance(d);
    if (marks.empty() || marks.size() > st.majority_count - st.minority_count) continue;
    // target_ir chosen so exactly one pass runs: the first pass always ends at or below it.
    const double after = static_cast<double>(st.majority_count - marks.size()) / static_cast<double>(st.minority_count);
    const auto r = enn(d, 5, std::max(1.0, after), {}, RngStream(seed, 1));
    EXPECT_EQ(r.removed_ids, marks) << "seed " << seed;
  }
}

TEST(Enn, NeverDropsMajorityBelowMinority) {
  testgen::Shape s;
  s.m = 200;
  s.minority = 90;
  s.separation = 0.2;
  const auto d = testgen::make(s, RngStream(3, 0));
  const auto r = enn(d, 5, 1.0, {}, RngStream(3, 1));
  const auto after = compute_imbalance(r.output);
  EXPECT_GE(after.majority_count, after.minority_count);
  EXPECT_EQ(after.minority_count, 90u);
}

TEST(Smote, MidpointAndEndpoints) {
  const std::vector<std::vector<double>> pts{{0, 0}, {2, 4}, {9, 9}, {9, 10}, {10, 9}};
  const auto d = from_points(pts, {1, 1, 0, 0, 0});
  ExecOptions opt;
  opt.fixed_u = 0.5;
  auto r = smote(d, 1, 0, {}, RngStream(0, 0), opt);
  EXPECT_EQ(r.synthetic_count, 0u);
  EXPECT_THROW(smote(d, 1, 1, {}, RngStream(0, 0), opt), ConfigError);
  // K=1 with two minority points is not enough (minority must exceed K).
  const std::vector<std::vector<double>> more{{0, 0}, {2, 4}, {100, 100}, {9, 9}, {9, 10}, {10, 9}};
  const auto d2 = from_points(more, {1, 1, 1, 0, 0, 0});
  r = smote(d2, 2, 1, {}, RngStream(0, 0), opt);
  ASSERT_EQ(r.synthetic_count, 3u);
  const auto& out = r.output;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto it = r.provenance.find(out.id(i));
    if (it == r.provenance.end()) continue;
    const auto parent = d2.row(static_cast<std::size_t>(it->second.parent));
    const auto neighbor = d2.row(static_cast<std::size_t>(it->second.neighbor));
    EXPECT_EQ(it->second.u, 0.5);
    EXPECT_TRUE(out.row(i).isApprox((parent + neighbor) / 2.0));
  }
  opt.fixed_u = 0.0;
  r = smote(d2, 2, 1, {}, RngStream(0, 0), opt);
  EXPECT_EQ(r.output.row(r.output.size() - 3), d2.row(0));
}

TEST(Smote, CountLaw) {
  const auto d = counts(1000, 1500, 4);
  const auto r = smote(d, 5, 2, {}, RngStream(4, 1));
  const auto s = compute_imbalance(r.output);
  EXPECT_EQ(s.minority_count, 3000u);
  EXPECT_EQ(s.majority_count, 1500u);
  EXPECT_TRUE(r.removed_ids.empty());
}

TEST(Smote, NeedsMoreMinorityThanK) {
  const auto d = counts(5, 50);
  EXPECT_THROW(smote(d, 5, 1, {}, RngStream(0, 0)), PreconditionError);
}

TEST(Smotenn, UnanimousNeighborhoodMakesOneSynthetic) {
  // Six tight minority points far from the majority.
  std::vector<std::vector<double>> pts{{0, 0}, {0.1, 0}, {0, 0.1}, {-0.1, 0}, {0, -0.1}, {0.1, 0.1}};
  std::vector<int> minority(6, 1);
  for (int i = 0; i < 24; ++i) {
    pts.push_back({100.0 + i, 0});
    minority.push_back(0);
  }
  const auto d = from_points(pts, minority);
  auto s = spec_for(Method::SMOTENN, 5, 1, 4.0);
  const auto r = smotenn::smotenn(d, s, RngStream(0, 0));
  EXPECT_EQ(r.synthetic_count, 6u);
  EXPECT_TRUE(r.edited_ids.empty());
  for (const auto& [id, p] : r.provenance) {
    EXPECT_LT(p.parent, 6);
    EXPECT_LT(p.neighbor, 6);
    EXPECT_NE(p.parent, p.neighbor);
  }
}

TEST(Smotenn, GateFailsWithTwoOfFive) {
  // Minority point 0 has 2 minority + 3 majority neighbors.
  const std::vector<std::vector<double>> pts{{0, 0}, {1, 0}, {-1, 0}, {0, 0.9}, {0, -0.9}, {0.8, 0.8},
                                             {50, 50}, {51, 50}, {52, 50}, {53, 50}, {54, 50}, {55, 50}};
  const auto d = from_points(pts, {1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  auto s = spec_for(Method::SMOTENN, 5, 1, 100.0);
  const auto r = smotenn::smotenn(d, s, RngStream(0, 0));
  for (const auto& [id, p] : r.provenance) EXPECT_NE(p.parent, 0);
  EXPECT_TRUE(r.edited_ids.empty());
}

TEST(Smotenn, EvenKTieFailsGate) {
  // Minority 0 has exactly 2 minority + 2 majority neighbors at K=4.
  const std::vector<std::vector<double>> pts{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {30, 30}, {31, 30}, {32, 30}};
  const auto d = from_points(pts, {1, 1, 1, 0, 0, 0, 0, 0});
  auto s = spec_for(Method::SMOTENN, 4, 1, 100.0);
  const auto r = smotenn::smotenn(d, s, RngStream(0, 0));
  for (const auto& [id, p] : r.provenance) EXPECT_NE(p.parent, 0);
}

TEST(Smotenn, ToySetMatchesStraightLineTranscription) {
  testgen::Shape sh;
  sh.m = 150;
  sh.minority = 30;
  sh.separation = 1.5;
  const auto d = testgen::make(sh, RngStream(17, 0));
  const auto spec = spec_for(Method::SMOTENN, 5, 1, 4.0);
  const auto got = smotenn::smotenn(d, spec, RngStream(17, 1));
  const auto want = ref::smotenn(ref::Table::from(d), 5, 1, 4.0, RngStream(17, 1));
  EXPECT_EQ(got.removed_ids, want.removed);
  ASSERT_EQ(got.synthetic_count, want.synthetic.size());
  EXPECT_GT(got.synthetic_count, 0u);
  for (const auto& s : want.synthetic) {
    const auto& p = got.provenance.at(s.id);
    EXPECT_EQ(p.parent, s.parent);
    EXPECT_EQ(p.neighbor, s.neighbor);
    EXPECT_EQ(p.u, s.u);
  }
}

TEST(Smotenn, Preconditions) {
  const std::vector<std::vector<double>> pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  const auto d = from_points(pts, {1, 0, 0, 0});
  EXPECT_THROW(smotenn::smotenn(d, spec_for(Method::SMOTENN, 2, 1), RngStream(0, 0)), PreconditionError);
  const auto d2 = from_points(pts, {1, 1, 0, 0});
  EXPECT_THROW(smotenn::smotenn(d2, spec_for(Method::SMOTENN, 5, 1), RngStream(0, 0)), PreconditionError);
  EXPECT_THROW(smotenn::smotenn(d2, spec_for(Method::SMOTENN, 2, 2), RngStream(0, 0)), ConfigError);
}

TEST(Compose, RusSmoteCounts) {
  const auto d = counts(100, 1000, 8);
  const auto r = resample(d, spec_for(Method::RUS_SMOTE, 5, 1, 1.0), RngStream(8, 1));
  const auto s = compute_imbalance(r.output);
  EXPECT_EQ(s.minority_count, 200u);
  EXPECT_EQ(s.majority_count, 100u);
  EXPECT_EQ(r.removed_ids.size(), 900u);
}

TEST(Compose, EnnSmoteOnSeparableEqualsSmote) {
  std::vector<std::vector<double>> pts;
  std::vector<int> minority;
  for (int i = 0; i < 20; ++i) {
    pts.push_back({static_cast<double>(i % 5), static_cast<double>(i / 5)});
    minority.push_back(1);
  }
  for (int i = 0; i < 60; ++i) {
    pts.push_back({100.0 + i % 10, static_cast<double>(i / 10)});
    minority.push_back(0);
  }
  const auto d = from_points(pts, minority);
  const auto root = RngStream(2, 0);
  const auto composed = resample(d, spec_for(Method::ENN_SMOTE, 5, 2), root);
  EXPECT_TRUE(composed.removed_ids.empty());
  const auto alone = smote(d, 5, 2, {}, root.derive("stage1"));
  EXPECT_EQ(composed.provenance, alone.provenance);
  EXPECT_EQ(composed.output.features(), alone.output.features());
}

TEST(Compose, MatchesManualStages) {
  testgen::Shape sh;
  sh.m = 200;
  sh.minority = 40;
  sh.separation = 1.0;
  const auto d = testgen::make(sh, RngStream(12, 0));
  const RngStream root(12, 1);

  auto spec = spec_for(Method::RUS_SMOTE, 5, 2, 2.0);
  const auto composed = resample(d, spec, root);
  const auto stage0 = rus(d, 2.0, root.derive("stage0"));
  ExecOptions opt;
  opt.first_synthetic_id = d.max_id() + 1;
  const auto stage1 = smote(stage0.output, 5, 2, {}, root.derive("stage1"), opt);
  EXPECT_EQ(composed.output.ids(), stage1.output.ids());
  EXPECT_EQ(composed.output.features(), stage1.output.features());
  EXPECT_EQ(composed.removed_ids, stage0.removed_ids);

  spec = spec_for(Method::ENN_SMOTE, 5, 2);
  const auto c2 = resample(d, spec, root);
  const auto e0 = enn(d, 5, 1.0, {}, root.derive("stage0"));
  const auto e1 = smote(e0.output, 5, 2, {}, root.derive("stage1"), opt);
  EXPECT_EQ(c2.output.ids(), e1.output.ids());
  EXPECT_EQ(c2.output.features(), e1.output.features());
  EXPECT_EQ(c2.removed_ids, e0.removed_ids);
}

TEST(Resample, NoneIsPassthroughAndValidationRuns) {
  const auto d = counts(10, 40);
  const auto r = resample(d, spec_for(Method::None));
  EXPECT_EQ(r.output.ids(), d.ids());
  EXPECT_EQ(r.output.features(), d.features());
  EXPECT_THROW(resample(d, spec_for(Method::SMOTE, 5, 7)), ConfigError);
}

TEST(Resample, ThreadCountDoesNotChangeOutput) {
  const auto d = counts(80, 320, 6);
  for (auto m : {Method::SMOTE, Method::ENN, Method::SMOTENN}) {
    auto s = spec_for(m, 5, 2, 3.0);
    s.seed = 6;
    s.threads = 1;
    const auto a = resample(d, s);
    s.threads = 4;
    const auto b = resample(d, s);
    EXPECT_EQ(a.output.ids(), b.output.ids());
    EXPECT_EQ(a.output.features(), b.output.features());
    EXPECT_EQ(a.provenance, b.provenance);
  }
}
