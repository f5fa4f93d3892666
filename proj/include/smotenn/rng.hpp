#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace smotenn {

/// Counter-based random stream.
///
/// The n-th output is a pure function of (seed, stream_id, n), so a stream can
/// be split into children (`derive`) and handed to workers without any shared
/// state. Two streams with equal (seed, stream_id) produce identical outputs.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Child stream keyed by an integer (block index, sample id, ...).
  RngStream derive(std::uint64_t key) const;
  /// Child stream keyed by a stage name ("rus", "index", ...).
  RngStream derive(std::string_view name) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform integer on [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace smotenn
