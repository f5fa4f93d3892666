#include "smotenn/partition.hpp"

#include "../support/gen.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace smotenn;

namespace {

Dataset counts(std::size_t minority, std::size_t majority, std::uint64_t seed = 1) {
  testgen::Shape s;
  s.m = minority + majority;
  s.minority = minority;
  s.dim = 3;
  return testgen::make(s, RngStream(seed, 0));
}

}  // namespace

TEST(PlanPartitions, IdentityPlan) {
  const auto d = counts(20, 80);
  const auto plan = plan_partitions(d, 1, RngStream(0, 0));
  for (const auto& [id, b] : plan.assignment) EXPECT_EQ(b, 0u);
  EXPECT_EQ(plan.assignment.size(), 100u);
}

TEST(PlanPartitions, StratifiedDivisibleCounts) {
  const auto d = counts(100, 900);
  const auto plan = plan_partitions(d, 4, RngStream(0, 0));
  for (const auto& rows : plan.block_rows(d)) {
    std::size_t minority = 0;
    for (auto r : rows) minority += d.label(r) == Label::Minority;
    EXPECT_EQ(minority, 25u);
    EXPECT_EQ(rows.size() - minority, 225u);
  }
}

TEST(PlanPartitions, InfeasibleSuggestsFewerBlocks) {
  const auto d = counts(10, 90);
  try {
    plan_partitions(d, 16, RngStream(0, 0));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("at most 10"), std::string::npos) << e.what();
  }
  EXPECT_THROW(plan_partitions(d, 5, RngStream(0, 0), 30), ConfigError);
  EXPECT_THROW(plan_partitions(d, 0, RngStream(0, 0)), ConfigError);
}

TEST(RunPartitioned, OneBlockEqualsSequential) {
  const auto d = counts(60, 340, 3);
  for (auto m : {Method::RUS, Method::ENN, Method::SMOTE, Method::RUS_SMOTE, Method::ENN_SMOTE, Method::SMOTENN}) {
    ResampleSpec s;
    s.method = m;
    s.seed = 31;
    s.n_oversample = 2;
    const auto seq = resample(d, s);
    const auto par = run_partitioned(d, s).result;
    EXPECT_EQ(seq.output.ids(), par.output.ids()) << to_string(m);
    EXPECT_EQ(seq.output.features(), par.output.features()) << to_string(m);
    EXPECT_EQ(seq.removed_ids, par.removed_ids) << to_string(m);
    EXPECT_EQ(seq.provenance, par.provenance) << to_string(m);
  }
}

TEST(RunPartitioned, UnionAccounting) {
  const auto d = counts(800, 3200, 4);
  ResampleSpec s;
  s.method = Method::SMOTENN;
  s.partitions = 4;
  s.seed = 4;
  const auto pr = run_partitioned(d, s);
  std::size_t synthetic = 0, removed = 0;
  for (const auto& b : pr.blocks) {
    synthetic += b.synthetic;
    removed += b.removed;
    EXPECT_EQ(b.input_size, 1000u);
  }
  EXPECT_EQ(pr.result.synthetic_count, synthetic);
  EXPECT_EQ(pr.result.removed_ids.size(), removed);
  auto ids = pr.result.output.ids();
  std::sort(ids.begin(), ids.end());
  EXPECT_EQ(std::adjacent_find(ids.begin(), ids.end()), ids.end());
  EXPECT_EQ(pr.result.output.size(), d.size() - pr.result.removed_ids.size() + pr.result.synthetic_count);
}

TEST(RunPartitioned, SyntheticParentsShareABlock) {
  const auto d = counts(300, 1200, 5);
  ResampleSpec s;
  s.method = Method::SMOTENN;
  s.partitions = 3;
  s.seed = 5;
  const auto plan = plan_partitions(d, 3, RngStream(5, 0).derive("plan"), s.k + 1);
  const auto pr = run_partitioned(d, s, plan);
  EXPECT_GT(pr.result.synthetic_count, 0u);
  for (const auto& [id, p] : pr.result.provenance) {
    EXPECT_EQ(plan.assignment.at(p.parent), plan.assignment.at(p.neighbor));
  }
}

TEST(RunPartitioned, ScheduleIndependent) {
  const auto d = counts(200, 800, 6);
  ResampleSpec s;
  s.method = Method::SMOTENN;
  s.partitions = 5;
  s.seed = 6;
  s.threads = 1;
  const auto a = run_partitioned(d, s).result;
  s.threads = 5;
  const auto b = run_partitioned(d, s).result;
  EXPECT_EQ(a.output.ids(), b.output.ids());
  EXPECT_EQ(a.output.features(), b.output.features());
  EXPECT_EQ(a.provenance, b.provenance);
}

TEST(RunPartitioned, BlockErrorsNameTheBlock) {
  const auto d = counts(12, 200, 7);
  ResampleSpec s;
  s.method = Method::SMOTE;
  s.partitions = 2;  // 6 minority per block: fine for K=5
  PartitionPlan plan = plan_partitions(d, 2, RngStream(0, 0));
  // Move one minority sample to block 0 so block 1 keeps only 5.
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.label(i) == Label::Minority && plan.assignment[d.id(i)] == 1) {
      plan.assignment[d.id(i)] = 0;
      break;
    }
  }
  try {
    run_partitioned(d, s, plan);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("block 1:", 0), 0u) << e.what();
  }
}
