#pragma once

#include "smotenn/dataset.hpp"
#include "smotenn/partition.hpp"
#include "smotenn/resample.hpp"
#include "smotenn/spec.hpp"
#include "smotenn/spill_tree.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace smotenn {

inline constexpr std::string_view kVersion = "0.1.0";

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t file_digest(const std::filesystem::path& path);
std::string hex_digest(std::uint64_t digest);

/// id, features..., class, synthetic (0/1). Features are printed with %.17g so they round-trip.
std::string resampled_csv(const ResampleResult& result);
void write_resampled_csv(const std::filesystem::path& path, const ResampleResult& result);

/// Provenance sidecar: removed ids, edited ids, one record per synthetic, spec echo.
std::string sidecar_json(const ResampleResult& result, const ResampleSpec& spec);

std::string spec_json(const ResampleSpec& spec);
/// Inverse of spec_json; missing keys keep their defaults.
ResampleSpec spec_from_json(std::string_view text);

struct RunManifest {
  ResampleSpec spec;
  std::string input_path;
  std::string label_column = "class";
  std::optional<std::string> minority_value;
  std::optional<std::string> format;
  std::uint64_t input_digest = 0;
  std::uint64_t output_digest = 0;
  std::map<std::string, double> timings_ms;
  ImbalanceStats before;
  ImbalanceStats after;
  std::size_t synthetic_count = 0;
  std::size_t removed_count = 0;
  /// Filled for partitioned runs.
  std::vector<BlockReport> blocks;
  std::string version{kVersion};

  std::string to_json() const;
  static RunManifest from_json(std::string_view text);
};

std::string index_stats_json(const SpillTreeIndex::Stats& stats, const IndexConfig& config, double recall,
                             std::size_t k);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace smotenn
