#include "smotenn/resample.hpp"

#include "smotenn/distance.hpp"
#include "smotenn/knn.hpp"
#include "smotenn/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace smotenn {
namespace {

struct Synthetic {
  SampleId id;
  FeatureRow features;
  Provenance from;
};

/// Retained input rows (in order) followed by synthetics.
Dataset assemble(const Dataset& input, const std::vector<bool>& keep, const std::vector<Synthetic>& synthetics) {
  const auto kept = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
  const auto total = kept + synthetics.size();
  FeatureMatrix f(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(input.dim()));
  std::vector<Label> labels;
  std::vector<SampleId> ids;
  labels.reserve(total);
  ids.reserve(total);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (!keep[i]) continue;
    f.row(r++) = input.row(i);
    labels.push_back(input.label(i));
    ids.push_back(input.id(i));
  }
  for (const auto& s : synthetics) {
    f.row(r++) = s.features;
    labels.push_back(Label::Minority);
    ids.push_back(s.id);
  }
  return Dataset(input.name(), std::move(f), std::move(labels), std::move(ids), input.columns(), input.minority_name(),
                 input.majority_name());
}

ResampleResult finish(const Dataset& input, const std::vector<bool>& keep, std::vector<Synthetic> synthetics) {
  ResampleResult result{assemble(input, keep, synthetics), {}, {}, synthetics.size(), {}};
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (!keep[i]) result.removed_ids.insert(input.id(i));
  }
  for (auto& s : synthetics) result.provenance.emplace(s.id, s.from);
  return result;
}

/// Draws up to `count` distinct neighbors from `pool` (distance order) and interpolates towards each.
void oversample_from(const Dataset& data, std::size_t parent_row, std::vector<std::size_t> pool, std::size_t count,
                     RngStream draws, const std::optional<double>& fixed_u, std::vector<Synthetic>& out) {
  const auto parent = data.row(parent_row);
  const std::size_t n = std::min(count, pool.size());
  for (std::size_t t = 0; t < n; ++t) {
    const auto pick = static_cast<std::size_t>(draws.below(pool.size()));
    const std::size_t nb = pool[pick];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    const double u = fixed_u ? *fixed_u : draws.uniform01();
    out.push_back({0, interpolate(parent, data.row(nb), u), Provenance{data.id(parent_row), data.id(nb), u}});
  }
}

SampleId first_id(const Dataset& data, const ExecOptions& options) {
  return options.first_synthetic_id ? *options.first_synthetic_id : data.max_id() + 1;
}

}  // namespace

ResampleResult rus(const Dataset& dataset, double p_ratio, RngStream rng) {
  if (!(p_ratio > 0.0)) throw ConfigError("p_ratio must be > 0");
  const auto split = split_by_class(dataset);
  const double wanted = std::round(p_ratio * static_cast<double>(split.minority.size()));
  const auto target = std::min(split.majority.size(), static_cast<std::size_t>(std::max(wanted, 1.0)));

  std::vector<bool> keep(dataset.size(), true);
  if (target < split.majority.size()) {
    const auto chosen = rng.sample_without_replacement(split.majority.size(), target);
    std::vector<bool> retained(split.majority.size(), false);
    for (auto c : chosen) retained[c] = true;
    for (std::size_t j = 0; j < split.majority.size(); ++j) keep[split.majority[j]] = retained[j];
  }
  return finish(dataset, keep, {});
}

ResampleResult enn(const Dataset& dataset, std::size_t k, double target_ir, const EngineConfig& engine, RngStream rng,
                   const ExecOptions& options) {
  if (k < 1) throw ConfigError("ENN needs k >= 1");
  if (!(target_ir >= 1.0)) throw ConfigError("ENN target IR must be >= 1");

  std::vector<bool> keep(dataset.size(), true);
  std::set<SampleId> edited;
  const RngStream index_rng = rng.derive("index");

  for (std::uint64_t pass = 0;; ++pass) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (keep[i]) rows.push_back(i);
    }
    const Dataset current = dataset.subset(rows);
    const auto stats = compute_imbalance(current);
    if (stats.ir <= target_ir) break;
    if (k >= current.size()) {
      throw PreconditionError("ENN needs k=" + std::to_string(k) + " < remaining sample count " +
                              std::to_string(current.size()));
    }

    const auto searcher = make_searcher(current, engine, index_rng.derive(pass));
    std::vector<std::size_t> votes(current.size(), 0);
    parallel_for(current.size(), options.threads, [&](std::size_t i) {
      if (current.label(i) != Label::Majority) return;
      const auto nb = searcher->query_row(i, k);
      votes[i] = static_cast<std::size_t>(std::count_if(nb.neighbors.begin(), nb.neighbors.end(), [&](const Neighbor& x) {
        return current.label(x.row) == Label::Minority;
      }));
    });

    std::vector<std::size_t> marked;
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (current.label(i) == Label::Majority && 2 * votes[i] > k) marked.push_back(i);
    }
    if (marked.empty()) break;

    const std::size_t allowed = stats.majority_count - std::min(stats.majority_count, stats.minority_count);
    if (allowed == 0) break;
    if (marked.size() > allowed) {
      std::sort(marked.begin(), marked.end(), [&](std::size_t a, std::size_t b) {
        return votes[a] != votes[b] ? votes[a] > votes[b] : current.id(a) < current.id(b);
      });
      marked.resize(allowed);
    }
    for (auto i : marked) {
      keep[rows[i]] = false;
      edited.insert(current.id(i));
    }
  }

  auto result = finish(dataset, keep, {});
  result.edited_ids = std::move(edited);
  return result;
}

ResampleResult smote(const Dataset& dataset, std::size_t k, std::size_t n_oversample, const EngineConfig& engine,
                     RngStream rng, const ExecOptions& options) {
  if (n_oversample >= k) {
    throw ConfigError("SMOTE needs N < K (got N=" + std::to_string(n_oversample) + ", K=" + std::to_string(k) + ")");
  }
  const auto split = split_by_class(dataset);
  if (split.minority.size() <= k) {
    throw PreconditionError("SMOTE needs more minority samples than K (minority_count=" +
                            std::to_string(split.minority.size()) + ", K=" + std::to_string(k) + ")");
  }

  // Neighborhoods are minority-only.
  const auto searcher = make_searcher(dataset, split.minority, engine, rng.derive("index"));
  const RngStream draws = rng.derive("draws");

  std::vector<std::vector<Synthetic>> per_sample(split.minority.size());
  parallel_for(split.minority.size(), options.threads, [&](std::size_t j) {
    const std::size_t i = split.minority[j];
    const auto nb = searcher->query_row(i, k);
    std::vector<std::size_t> pool;
    pool.reserve(nb.neighbors.size());
    for (const auto& x : nb.neighbors) pool.push_back(x.row);
    oversample_from(dataset, i, std::move(pool), n_oversample, draws.derive(static_cast<std::uint64_t>(dataset.id(i))),
                    options.fixed_u, per_sample[j]);
  });

  std::vector<Synthetic> synthetics;
  synthetics.reserve(split.minority.size() * n_oversample);
  SampleId next = first_id(dataset, options);
  for (auto& group : per_sample) {
    for (auto& s : group) {
      s.id = next++;
      synthetics.push_back(std::move(s));
    }
  }
  return finish(dataset, std::vector<bool>(dataset.size(), true), std::move(synthetics));
}

ResampleResult smotenn(const Dataset& dataset, const ResampleSpec& spec, RngStream rng) {
  const std::size_t K = spec.k;
  const std::size_t N = spec.n_oversample;
  if (N >= K) throw ConfigError("SMOTENN needs N < K (got N=" + std::to_string(N) + ", K=" + std::to_string(K) + ")");
  if (split_by_class(dataset).minority.size() < 2) {
    throw PreconditionError("SMOTENN needs at least two minority samples");
  }

  // Undersample, then one mixed-class neighborhood per minority sample.
  const auto undersampled = rus(dataset, spec.p_ratio, rng.derive("rus"));
  const Dataset& mixed = undersampled.output;
  if (K >= mixed.size()) {
    throw PreconditionError("SMOTENN needs K=" + std::to_string(K) + " < post-undersampling size " +
                            std::to_string(mixed.size()));
  }
  const auto searcher = make_searcher(mixed, spec.engine, rng.derive("index"));
  const RngStream draws = rng.derive("draws");
  const auto minority_rows = split_by_class(mixed).minority;

  struct Outcome {
    std::vector<std::size_t> edited;
    std::vector<Synthetic> synthetics;
  };
  std::vector<Outcome> outcomes(minority_rows.size());
  parallel_for(minority_rows.size(), spec.threads, [&](std::size_t j) {
    const std::size_t i = minority_rows[j];
    const auto nb = searcher->query_row(i, K);
    std::vector<std::size_t> same, other;
    for (const auto& x : nb.neighbors) (mixed.label(x.row) == Label::Minority ? same : other).push_back(x.row);
    if (2 * same.size() <= K) return;
    auto& out = outcomes[j];
    out.edited = std::move(other);
    oversample_from(mixed, i, std::move(same), N, draws.derive(static_cast<std::uint64_t>(mixed.id(i))), spec.fixed_u,
                    out.synthetics);
  });

  std::vector<bool> keep(mixed.size(), true);
  std::set<SampleId> edited;
  std::vector<Synthetic> synthetics;
  SampleId next = dataset.max_id() + 1;
  for (auto& o : outcomes) {
    for (auto r : o.edited) {
      keep[r] = false;
      edited.insert(mixed.id(r));
    }
    for (auto& s : o.synthetics) {
      s.id = next++;
      synthetics.push_back(std::move(s));
    }
  }

  auto result = finish(mixed, keep, std::move(synthetics));
  result.removed_ids.insert(undersampled.removed_ids.begin(), undersampled.removed_ids.end());
  result.edited_ids = std::move(edited);
  return result;
}

ResampleResult compose(const Dataset& dataset, const ResampleSpec& spec, RngStream rng) {
  ExecOptions options{spec.threads, spec.fixed_u, dataset.max_id() + 1};
  ResampleResult first = [&] {
    switch (spec.method) {
      case Method::RUS_SMOTE:
        return rus(dataset, spec.p_ratio, rng.derive("stage0"));
      case Method::ENN_SMOTE:
        return enn(dataset, spec.k, spec.target_ir, spec.engine, rng.derive("stage0"), options);
      default:
        throw ConfigError("compose needs RUS+SMOTE or ENN+SMOTE, got " + std::string(to_string(spec.method)));
    }
  }();
  auto second = smote(first.output, spec.k, spec.n_oversample, spec.engine, rng.derive("stage1"), options);
  second.removed_ids.insert(first.removed_ids.begin(), first.removed_ids.end());
  second.edited_ids.insert(first.edited_ids.begin(), first.edited_ids.end());
  return second;
}

ResampleResult resample(const Dataset& dataset, const ResampleSpec& spec, RngStream rng) {
  spec.validate();
  const ExecOptions options{spec.threads, spec.fixed_u, std::nullopt};
  switch (spec.method) {
    case Method::None:
      return finish(dataset, std::vector<bool>(dataset.size(), true), {});
    case Method::RUS:
      return rus(dataset, spec.p_ratio, rng);
    case Method::ENN:
      return enn(dataset, spec.k, spec.target_ir, spec.engine, rng, options);
    case Method::SMOTE:
      return smote(dataset, spec.k, spec.n_oversample, spec.engine, rng, options);
    case Method::RUS_SMOTE:
    case Method::ENN_SMOTE:
      return compose(dataset, spec, rng);
    case Method::SMOTENN:
      return smotenn(dataset, spec, rng);
  }
  throw ConfigError("unknown method");
}

ResampleResult resample(const Dataset& dataset, const ResampleSpec& spec) {
  return resample(dataset, spec, RngStream(spec.seed, 0));
}

}  // namespace smotenn
