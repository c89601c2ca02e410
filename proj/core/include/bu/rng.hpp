#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace bu {

/// SplitMix64, used only to expand a 64-bit seed into xoshiro state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;

 private:
  std::uint64_t state_;
};

/// xoshiro256** seeded with four successive SplitMix64 outputs.
///
/// The draw helpers below are part of the dataset format: changing any of them
/// changes every generated dataset.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  std::uint64_t operator()() noexcept { return next(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  /// (next() >> 11) * 2^-53, in [0, 1).
  double uniform() noexcept;
  /// lo + (hi - lo) * uniform().
  double uniform(double lo, double hi) noexcept;
  /// floor(uniform() * n), in [0, n).
  int uniform_index(int n) noexcept;
  /// Box-Muller on two successive uniforms u1, u2:
  ///   r = sqrt(-2 ln(1 - u1)), z0 = r cos(2 pi u2), z1 = r sin(2 pi u2).
  /// Returns z0 and caches z1 for the following call.
  double normal() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  std::optional<double> spare_;
};

}  // namespace bu
