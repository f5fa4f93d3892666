#include "smotenn/eval.hpp"

#include "smotenn/ingest.hpp"
#include "smotenn/knn.hpp"
#include "smotenn/parallel.hpp"
#include "smotenn/partition.hpp"

#include <cmath>

namespace smotenn {

double g_mean(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0 || cm.tn + cm.fp == 0) {
    throw PreconditionError("g-mean is undefined when a class is absent from the test set");
  }
  const double sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  const double specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  return std::sqrt(sensitivity * specificity);
}

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) throw PreconditionError("truth and prediction lengths differ");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pos = truth[i] == Label::Minority;
    const bool hit = truth[i] == predicted[i];
    if (pos) {
      hit ? ++cm.tp : ++cm.fn;
    } else {
      hit ? ++cm.tn : ++cm.fp;
    }
  }
  return cm;
}

std::vector<Label> knn_classify(const Dataset& train, const FeatureMatrix& test, std::size_t k,
                                const EngineConfig& engine, RngStream rng) {
  if (train.size() == 0) throw StateError("empty training set");
  if (k >= train.size()) {
    throw PreconditionError("classifier needs k=" + std::to_string(k) + " < training size " +
                            std::to_string(train.size()));
  }
  const auto searcher = make_searcher(train, engine, rng);
  std::vector<Label> out(static_cast<std::size_t>(test.rows()));
  for (Eigen::Index i = 0; i < test.rows(); ++i) {
    const auto nb = searcher->query(test.row(i), k, std::nullopt);
    std::size_t minority = 0;
    for (const auto& x : nb.neighbors) minority += train.label(x.row) == Label::Minority;
    out[static_cast<std::size_t>(i)] = 2 * minority >= nb.neighbors.size() ? Label::Minority : Label::Majority;
  }
  return out;
}

std::vector<std::size_t> stratified_folds(const Dataset& dataset, std::size_t folds, RngStream rng) {
  auto split = split_by_class(dataset);
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (split.minority.size() < folds) {
    throw ConfigError("minority class has " + std::to_string(split.minority.size()) + " samples, fewer than " +
                      std::to_string(folds) + " folds");
  }
  auto minority_rng = rng.derive("minority");
  auto majority_rng = rng.derive("majority");
  minority_rng.shuffle(std::span<std::size_t>(split.minority));
  majority_rng.shuffle(std::span<std::size_t>(split.majority));
  std::vector<std::size_t> fold_of(dataset.size());
  for (std::size_t j = 0; j < split.minority.size(); ++j) fold_of[split.minority[j]] = j % folds;
  // Continue dealing where the minority left off so fold sizes stay balanced.
  for (std::size_t j = 0; j < split.majority.size(); ++j) {
    fold_of[split.majority[j]] = (j + split.minority.size()) % folds;
  }
  return fold_of;
}

CrossValidation cross_validate(const Dataset& dataset, const ResampleSpec& spec, std::size_t folds,
                               const ClassifierConfig& classifier, RngStream rng) {
  spec.validate();
  const auto fold_of = stratified_folds(dataset, folds, rng.derive("folds"));
  const auto fold_rng = rng.derive("fold");

  ResampleSpec fold_spec = spec;
  fold_spec.threads = 1;

  CrossValidation cv;
  cv.folds.resize(folds);
  parallel_for(folds, spec.threads, [&](std::size_t f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < dataset.size(); ++i) (fold_of[i] == f ? test_rows : train_rows).push_back(i);

    const Dataset train_raw = dataset.subset(train_rows);
    const auto [train, ranges] = normalize_minmax(train_raw);
    const Dataset test = apply_minmax(dataset.subset(test_rows), ranges);

    const RngStream this_fold = fold_rng.derive(f);
    const ResampleResult resampled = fold_spec.partitions > 1 ? run_partitioned(train, fold_spec).result
                                                              : resample(train, fold_spec, this_fold);
    const auto predicted =
        knn_classify(resampled.output, test.features(), classifier.k, classifier.engine, this_fold.derive("classifier"));

    FoldResult& r = cv.folds[f];
    r.fold = f;
    r.confusion = confusion(test.labels(), predicted);
    r.g_mean = g_mean(r.confusion);
    r.train_size = train.size();
    r.resampled_size = resampled.output.size();
    r.train_digest = dataset_digest(resampled.output);
  });
  for (const auto& r : cv.folds) cv.mean_g_mean += r.g_mean;
  cv.mean_g_mean /= static_cast<double>(folds);
  return cv;
}

std::uint64_t dataset_digest(const Dataset& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto id = dataset.id(i);
    const auto label = static_cast<std::uint8_t>(dataset.label(i));
    feed(&id, sizeof id);
    feed(&label, sizeof label);
    for (std::size_t j = 0; j < dataset.dim(); ++j) {
      const double v = dataset.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      feed(&v, sizeof v);
    }
  }
  return h;
}

}  // namespace smotenn
