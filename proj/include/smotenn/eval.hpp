#pragma once

#include "smotenn/dataset.hpp"
#include "smotenn/resample.hpp"
#include "smotenn/spec.hpp"

#include <cstdint>
#include <vector>

namespace smotenn {

/// Positive = minority.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
};

/// sqrt(sensitivity * specificity). Throws PreconditionError when a class is absent.
double g_mean(const ConfusionMatrix& cm);

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted);

struct ClassifierConfig {
  std::size_t k = 5;
  EngineConfig engine{};
};

/// Majority vote over the k nearest training samples; a tied vote predicts Minority.
std::vector<Label> knn_classify(const Dataset& train, const FeatureMatrix& test, std::size_t k,
                                const EngineConfig& engine = {}, RngStream rng = RngStream(0, 0));

/// Stratified fold index for every row: each class is shuffled and dealt round-robin.
std::vector<std::size_t> stratified_folds(const Dataset& dataset, std::size_t folds, RngStream rng);

struct FoldResult {
  std::size_t fold = 0;
  double g_mean = 0.0;
  ConfusionMatrix confusion;
  std::size_t train_size = 0;
  std::size_t resampled_size = 0;
  /// Content hash of the normalized, resampled training set.
  std::uint64_t train_digest = 0;
};

struct CrossValidation {
  std::vector<FoldResult> folds;
  double mean_g_mean = 0.0;
};

/// Stratified k-fold CV. Per fold: fit min-max ranges on the training part,
/// resample the training part only, classify the test part, score g-mean.
/// Fold assignment uses rng.derive("folds"); fold f resamples on rng.derive("fold").derive(f).
CrossValidation cross_validate(const Dataset& dataset, const ResampleSpec& spec, std::size_t folds,
                               const ClassifierConfig& classifier, RngStream rng);

/// FNV-1a over ids, labels and the raw bytes of the features.
std::uint64_t dataset_digest(const Dataset& dataset);

}  // namespace smotenn
