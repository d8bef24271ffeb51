#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace sngca {

/// Seedable random source with fixed sampling algorithms, so that streams
/// are reproducible across platforms for a given seed. The engine is
/// std::mt19937_64 (bit-exact by the standard); every distribution below is
/// implemented here rather than delegated to the implementation-defined
/// std::*_distribution adaptors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; the paired value is cached.
  double normal();

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Exponential with unit rate.
  double exponential();

  /// Laplace with unit scale (variance 2).
  double laplace();

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace sngca
