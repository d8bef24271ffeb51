#include "sngca/rng.hpp"

#include <cmath>

namespace sngca {

double Rng::normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // Box-Muller on (0,1] x [0,1) uniforms; 1-u avoids log(0).
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  cached_ = r * std::sin(a);
  have_cached_ = true;
  return r * std::cos(a);
}

double Rng::exponential() { return -std::log(1.0 - uniform01()); }

double Rng::laplace() {
  double e = exponential();
  return uniform01() < 0.5 ? -e : e;
}

}  // namespace sngca
