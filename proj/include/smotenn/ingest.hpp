#pragma once

#include "smotenn/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smotenn {

/// KEEL .dat reader. The class attribute comes from @outputs (else the last
/// attribute); its less frequent value becomes Minority, ties going to the
/// value declared first.
Dataset parse_keel(const std::filesystem::path& path);
Dataset parse_keel_text(std::string_view text, std::string_view source = "<memory>");

/// CSV reader (header row required, RFC-4180 quoting). Without
/// minority_value the less frequent label is Minority and equal counts are
/// rejected; with it, a minority value that is actually the larger class is
/// rejected as well.
Dataset parse_csv(const std::filesystem::path& path, const std::string& label_column,
                  const std::optional<std::string>& minority_value = std::nullopt);
Dataset parse_csv_text(std::string_view text, const std::string& label_column,
                       const std::optional<std::string>& minority_value = std::nullopt,
                       std::string_view source = "<memory>");

/// Picks the reader by extension (.dat -> KEEL, anything else -> CSV).
Dataset load_dataset(const std::filesystem::path& path, const std::string& label_column = "class",
                     const std::optional<std::string>& minority_value = std::nullopt,
                     std::optional<std::string> format = std::nullopt);

/// Splits one CSV record into fields. Quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv_record(std::string_view line);

/// Rescales every feature to [0, 1] using the dataset's own ranges. Constant
/// columns map to 0. The returned specs hold the original ranges.
std::pair<Dataset, std::vector<ColumnSpec>> normalize_minmax(const Dataset& dataset);
/// Applies previously fitted ranges; values outside them land outside [0, 1].
Dataset apply_minmax(const Dataset& dataset, const std::vector<ColumnSpec>& columns);
/// Inverse of apply_minmax. Constant columns map back to observed_min.
Dataset denormalize(const Dataset& dataset, const std::vector<ColumnSpec>& columns);

}  // namespace smotenn
