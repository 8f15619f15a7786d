#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include "riscnoma/linalg.hpp"

namespace riscnoma {

/// Counter-based 64-bit generator. Output i is a stateless mix of (key, i),
/// so a stream can be split into independent substreams by deriving new keys.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller; portable across standard libraries.
  double normal() noexcept;
  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  cplx complex_normal() noexcept;
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Independent generator keyed by this generator's key and a label.
  [[nodiscard]] CounterRng substream(std::string_view label) const noexcept;
  [[nodiscard]] CounterRng substream(std::uint64_t index) const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t hash_label(std::string_view label) noexcept;

}  // namespace riscnoma
