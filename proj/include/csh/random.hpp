#pragma once

// Seeded RNG used by the data generators and the sampling studies.
// Gaussian draws are hand-rolled Box-Muller on top of mt19937_64 so the
// byte stream behind a given seed does not depend on the standard library's
// normal_distribution implementation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace csh {

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  // uniform in (0, 1]
  double uniform() {
    const uint64_t bits = eng_() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 1.0) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // complex Gaussian with unit variance per component
  std::complex<double> cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace csh
