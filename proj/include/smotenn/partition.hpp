#pragma once

#include "smotenn/resample.hpp"

#include <unordered_map>
#include <vector>

namespace smotenn {

/// Assignment of every sample to one block. Blocks play the role of map keys.
struct PartitionPlan {
  std::size_t block_count = 1;
  std::unordered_map<SampleId, std::size_t> assignment;
  bool stratified = true;

  /// Row positions of each block in dataset order.
  std::vector<std::vector<std::size_t>> block_rows(const Dataset& dataset) const;
};

/// Stratified random plan: each class is shuffled and dealt round-robin.
/// Rejects plans where a block would hold no minority sample or fewer than
/// min_block_size samples.
PartitionPlan plan_partitions(const Dataset& dataset, std::size_t block_count, RngStream rng,
                              std::size_t min_block_size = 2);

/// Checks a plan against a dataset; throws ConfigError on any violation.
void validate_plan(const Dataset& dataset, const PartitionPlan& plan, std::size_t min_block_size);

struct BlockReport {
  std::size_t block = 0;
  std::size_t input_size = 0;
  std::size_t minority_in = 0;
  std::size_t majority_in = 0;
  std::size_t removed = 0;
  std::size_t synthetic = 0;
  double millis = 0.0;
};

struct PartitionedResult {
  ResampleResult result;
  std::vector<BlockReport> blocks;
};

/// Map: resample each block independently on RngStream(spec.seed, block).
/// Reduce: union of block outputs. Retained originals keep input order;
/// synthetics follow block by block and are renumbered from max_id() + 1.
/// Blocks run on up to spec.threads workers; the result does not depend on it.
PartitionedResult run_partitioned(const Dataset& dataset, const ResampleSpec& spec, const PartitionPlan& plan);

/// Plans with spec.partitions blocks on RngStream(spec.seed, 0).derive("plan") and runs.
PartitionedResult run_partitioned(const Dataset& dataset, const ResampleSpec& spec);

}  // namespace smotenn
