#pragma once

#include "smotenn/dataset.hpp"
#include "smotenn/rng.hpp"
#include "smotenn/spec.hpp"

#include <map>
#include <optional>
#include <set>

namespace smotenn {

/// Where a synthetic sample came from: parent + u * (neighbor - parent).
struct Provenance {
  SampleId parent = 0;
  SampleId neighbor = 0;
  double u = 0.0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ResampleResult {
  /// Retained originals in input order, followed by synthetics in creation order.
  Dataset output;
  /// Original majority ids dropped by any stage.
  std::set<SampleId> removed_ids;
  /// Subset of removed_ids dropped by a neighborhood rule (ENN pass or SMOTENN editing).
  std::set<SampleId> edited_ids;
  std::size_t synthetic_count = 0;
  std::map<SampleId, Provenance> provenance;
};

struct ExecOptions {
  /// Workers for per-sample neighbor queries; results do not depend on it.
  std::size_t threads = 1;
  std::optional<double> fixed_u;
  /// First id handed to a synthetic sample; defaults to max_id() + 1 of the input.
  std::optional<SampleId> first_synthetic_id;
};

// Random-draw discipline shared by smote and smotenn. Sample i draws from
// rng.derive("draws").derive(id_i); each synthetic consumes one
// below(|remaining|) to pick a neighbor position in the distance-ordered list
// (the pick is then erased from it), followed by one uniform01() for u.
// Spill-tree pivots use rng.derive("index") and never touch those streams.

/// Random undersampling of the majority class to round(p_ratio * minority), capped at the majority size.
ResampleResult rus(const Dataset& dataset, double p_ratio, RngStream rng);

/// Iterated edited nearest neighbor on the majority class.
///
/// Each pass votes every remaining majority sample against its k nearest
/// remaining neighbors and removes the ones outvoted by the minority (strictly
/// more than k/2), all at once. Stops at IR <= target_ir, on a pass that
/// removes nothing, or when the majority would shrink below the minority; in
/// that last case only the most strongly outvoted samples (ties by id) go.
ResampleResult enn(const Dataset& dataset, std::size_t k, double target_ir, const EngineConfig& engine, RngStream rng,
                   const ExecOptions& options = {});

/// Classic SMOTE: n_oversample synthetics per minority sample, interpolated
/// towards distinct members of its k minority-only neighbors.
ResampleResult smote(const Dataset& dataset, std::size_t k, std::size_t n_oversample, const EngineConfig& engine,
                     RngStream rng, const ExecOptions& options = {});

/// Single-pass hybrid undersampling/oversampling.
///
/// After undersampling the majority to p_ratio, every minority sample takes
/// its K nearest neighbors in the mixed post-undersampling set once. If the
/// minority holds a strict majority of them, the majority neighbors are marked
/// for removal and up to N synthetics are interpolated towards distinct
/// minority neighbors. Marked samples are removed only at the end.
ResampleResult smotenn(const Dataset& dataset, const ResampleSpec& spec, RngStream rng);

/// RUS+SMOTE or ENN+SMOTE: the first stage runs on rng.derive("stage0"), smote on rng.derive("stage1").
ResampleResult compose(const Dataset& dataset, const ResampleSpec& spec, RngStream rng);

/// Dispatches on spec.method.
ResampleResult resample(const Dataset& dataset, const ResampleSpec& spec, RngStream rng);
/// Sequential run rooted at RngStream(spec.seed, 0).
ResampleResult resample(const Dataset& dataset, const ResampleSpec& spec);

}  // namespace smotenn
