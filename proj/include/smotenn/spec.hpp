#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace smotenn {

enum class Method { None, RUS, ENN, SMOTE, RUS_SMOTE, ENN_SMOTE, SMOTENN };

enum class EngineKind { Exact, SpillTree };

/// Hybrid spill tree parameters.
struct IndexConfig {
  /// Overlap half-width as a fraction of each node's projected spread.
  double tau = 0.1;
  /// Balance factor: a spill split is used only if both children hold at most rho * |node| points.
  double rho = 0.7;
  std::size_t leaf_size = 32;
  /// No backtracking through overlap nodes.
  bool defeatist_search = true;

  void validate() const;
};

struct EngineConfig {
  EngineKind kind = EngineKind::Exact;
  IndexConfig index{};
};

/// Full configuration of one resampling run.
struct ResampleSpec {
  Method method = Method::SMOTENN;
  std::size_t k = 5;
  std::size_t n_oversample = 1;
  /// Majority:minority ratio retained by random undersampling.
  double p_ratio = 4.0;
  /// ENN stopping target (majority / minority).
  double target_ir = 1.0;
  std::uint64_t seed = 0;
  EngineConfig engine{};
  std::size_t partitions = 1;
  /// Worker threads for neighbor queries inside one run; 0 = hardware concurrency.
  std::size_t threads = 1;
  /// Use this interpolation factor for every synthetic instead of a fresh draw.
  std::optional<double> fixed_u;

  /// Throws ConfigError on any field outside its domain (including N >= K).
  void validate() const;
};

std::string_view to_string(Method method);
std::string_view to_string(EngineKind kind);
/// Accepts the names printed by to_string plus lower-case aliases ("rus+smote", "smotenn", ...).
Method parse_method(std::string_view text);
EngineKind parse_engine(std::string_view text);

}  // namespace smotenn
