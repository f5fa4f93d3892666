#include "smotenn/spec.hpp"

#include "smotenn/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

namespace smotenn {

void IndexConfig::validate() const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be a finite value >= 0");
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("rho must lie in [0, 1)");
  if (leaf_size < 1) throw ConfigError("leaf_size must be >= 1");
}

void ResampleSpec::validate() const {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (!(p_ratio > 0.0) || !std::isfinite(p_ratio)) throw ConfigError("p_ratio must be > 0");
  if (!(target_ir >= 1.0)) throw ConfigError("target_ir must be >= 1");
  if (partitions < 1) throw ConfigError("partitions must be >= 1");
  if (fixed_u && !(*fixed_u >= 0.0 && *fixed_u <= 1.0)) throw ConfigError("fixed interpolation factor must lie in [0, 1]");
  const bool oversamples = method == Method::SMOTE || method == Method::RUS_SMOTE || method == Method::ENN_SMOTE ||
                           method == Method::SMOTENN;
  if (oversamples && n_oversample >= k) {
    throw ConfigError("oversampling amount N=" + std::to_string(n_oversample) + " must be smaller than K=" +
                      std::to_string(k));
  }
  engine.index.validate();
}

namespace {

struct MethodName {
  Method method;
  std::string_view name;
  std::string_view alias;
};

constexpr std::array<MethodName, 7> kMethods{{
    {Method::None, "NONE", "none"},
    {Method::RUS, "RUS", "rus"},
    {Method::ENN, "ENN", "enn"},
    {Method::SMOTE, "SMOTE", "smote"},
    {Method::RUS_SMOTE, "RUS+SMOTE", "rus_smote"},
    {Method::ENN_SMOTE, "ENN+SMOTE", "enn_smote"},
    {Method::SMOTENN, "SMOTENN", "smotenn"},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& m : kMethods) {
    if (m.method == method) return m.name;
  }
  return "?";
}

std::string_view to_string(EngineKind kind) { return kind == EngineKind::Exact ? "exact" : "spilltree"; }

Method parse_method(std::string_view text) {
  const auto t = lower(text);
  for (const auto& m : kMethods) {
    if (t == lower(m.name) || t == m.alias) return m.method;
  }
  if (t == "rus+smo" || t == "rus-smote") return Method::RUS_SMOTE;
  if (t == "enn+smo" || t == "enn-smote") return Method::ENN_SMOTE;
  throw ConfigError("unknown method '" + std::string(text) + "'");
}

EngineKind parse_engine(std::string_view text) {
  const auto t = lower(text);
  if (t == "exact" || t == "brute") return EngineKind::Exact;
  if (t == "spilltree" || t == "spill-tree" || t == "spill") return EngineKind::SpillTree;
  throw ConfigError("unknown engine '" + std::string(text) + "'");
}

}  // namespace smotenn
