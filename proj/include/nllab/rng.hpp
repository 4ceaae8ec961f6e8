#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace nllab {

/// Seeded random stream used everywhere in the library.
///
/// The stream contract is fixed so that suites and estimates are
/// reproducible across platforms and standard libraries:
///   * state update and output mixing are SplitMix64 (64-bit state);
///   * uniform doubles take the top 53 bits of each output;
///   * normals use the Box-Muller transform, consuming two uniforms and
///     caching the second variate.
/// Any change to these rules must bump kGeneratorId.
class Rng {
 public:
  static constexpr std::string_view kGeneratorId = "splitmix64-boxmuller-v1";

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal N(0, 1).
  double normal();

  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2), so
  /// E|z|^2 = 1.
  std::complex<double> complex_normal();

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 output mixer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for trial `index` of a suite seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace nllab
