#include "smotenn/partition.hpp"

#include "smotenn/parallel.hpp"

#include <chrono>
#include <exception>
#include <unordered_set>

namespace smotenn {

std::vector<std::vector<std::size_t>> PartitionPlan::block_rows(const Dataset& dataset) const {
  std::vector<std::vector<std::size_t>> blocks(block_count);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto it = assignment.find(dataset.id(i));
    if (it == assignment.end()) throw ConfigError("sample id " + std::to_string(dataset.id(i)) + " has no block");
    blocks.at(it->second).push_back(i);
  }
  return blocks;
}

void validate_plan(const Dataset& dataset, const PartitionPlan& plan, std::size_t min_block_size) {
  if (plan.block_count < 1) throw ConfigError("partition plan needs at least one block");
  if (plan.assignment.size() != dataset.size()) throw ConfigError("partition plan does not cover the dataset exactly");
  const auto blocks = plan.block_rows(dataset);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::size_t minority = 0;
    for (auto r : blocks[b]) minority += dataset.label(r) == Label::Minority;
    if (minority == 0 || blocks[b].size() < min_block_size) {
      throw ConfigError("block " + std::to_string(b) + " holds " + std::to_string(blocks[b].size()) + " samples (" +
                        std::to_string(minority) + " minority); needs >= 1 minority and >= " +
                        std::to_string(min_block_size) + " total. Try a smaller block count.");
    }
  }
}

PartitionPlan plan_partitions(const Dataset& dataset, std::size_t block_count, RngStream rng,
                              std::size_t min_block_size) {
  if (block_count < 1) throw ConfigError("block_count must be >= 1");
  auto split = split_by_class(dataset);
  if (split.minority.size() < block_count) {
    throw ConfigError("cannot spread " + std::to_string(split.minority.size()) + " minority samples over " +
                      std::to_string(block_count) + " blocks; use at most " + std::to_string(split.minority.size()) +
                      " blocks");
  }
  PartitionPlan plan;
  plan.block_count = block_count;
  plan.stratified = true;
  plan.assignment.reserve(dataset.size());
  auto minority_rng = rng.derive("minority");
  auto majority_rng = rng.derive("majority");
  minority_rng.shuffle(std::span<std::size_t>(split.minority));
  majority_rng.shuffle(std::span<std::size_t>(split.majority));
  for (std::size_t j = 0; j < split.minority.size(); ++j) plan.assignment[dataset.id(split.minority[j])] = j % block_count;
  for (std::size_t j = 0; j < split.majority.size(); ++j) plan.assignment[dataset.id(split.majority[j])] = j % block_count;
  validate_plan(dataset, plan, min_block_size);
  return plan;
}

PartitionedResult run_partitioned(const Dataset& dataset, const ResampleSpec& spec, const PartitionPlan& plan) {
  spec.validate();
  validate_plan(dataset, plan, 2);
  const auto blocks = plan.block_rows(dataset);

  ResampleSpec block_spec = spec;
  block_spec.threads = 1;

  std::vector<std::optional<ResampleResult>> outputs(blocks.size());
  std::vector<BlockReport> reports(blocks.size());
  std::vector<std::exception_ptr> errors(blocks.size());

  parallel_for(blocks.size(), spec.threads, [&](std::size_t b) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const Dataset block = dataset.subset(blocks[b]);
      auto& rep = reports[b];
      rep.block = b;
      rep.input_size = block.size();
      const auto s = compute_imbalance(block);
      rep.minority_in = s.minority_count;
      rep.majority_in = s.majority_count;
      outputs[b] = resample(block, block_spec, RngStream(spec.seed, b));
      rep.removed = outputs[b]->removed_ids.size();
      rep.synthetic = outputs[b]->synthetic_count;
    } catch (...) {
      errors[b] = std::current_exception();
    }
    reports[b].millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!errors[b]) continue;
    try {
      std::rethrow_exception(errors[b]);
    } catch (const ConfigError& e) {
      throw ConfigError("block " + std::to_string(b) + ": " + e.what());
    } catch (const PreconditionError& e) {
      throw PreconditionError("block " + std::to_string(b) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error("block " + std::to_string(b) + ": " + e.what());
    }
  }

  // Reduce.
  std::unordered_set<SampleId> retained;
  std::size_t synthetic_total = 0;
  for (const auto& out : outputs) {
    for (auto id : out->output.ids()) {
      if (!out->provenance.contains(id)) retained.insert(id);
    }
    synthetic_total += out->synthetic_count;
  }

  const auto total = retained.size() + synthetic_total;
  FeatureMatrix features(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(dataset.dim()));
  std::vector<Label> labels;
  std::vector<SampleId> ids;
  labels.reserve(total);
  ids.reserve(total);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!retained.contains(dataset.id(i))) continue;
    features.row(r++) = dataset.row(i);
    labels.push_back(dataset.label(i));
    ids.push_back(dataset.id(i));
  }

  std::set<SampleId> removed, edited;
  std::map<SampleId, Provenance> provenance;
  SampleId next = dataset.max_id() + 1;
  for (const auto& out : outputs) {
    removed.insert(out->removed_ids.begin(), out->removed_ids.end());
    edited.insert(out->edited_ids.begin(), out->edited_ids.end());
    const auto& o = out->output;
    for (std::size_t i = 0; i < o.size(); ++i) {
      const auto it = out->provenance.find(o.id(i));
      if (it == out->provenance.end()) continue;
      features.row(r++) = o.row(i);
      labels.push_back(Label::Minority);
      ids.push_back(next);
      provenance.emplace(next, it->second);
      ++next;
    }
  }

  PartitionedResult result{
      ResampleResult{Dataset(dataset.name(), std::move(features), std::move(labels), std::move(ids), dataset.columns(),
                             dataset.minority_name(), dataset.majority_name()),
                     std::move(removed), std::move(edited), synthetic_total, std::move(provenance)},
      std::move(reports)};
  return result;
}

PartitionedResult run_partitioned(const Dataset& dataset, const ResampleSpec& spec) {
  const auto plan = plan_partitions(dataset, spec.partitions, RngStream(spec.seed, 0).derive("plan"), spec.k + 1);
  return run_partitioned(dataset, spec, plan);
}

}  // namespace smotenn
