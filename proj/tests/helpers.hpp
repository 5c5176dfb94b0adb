#pragma once

#include <cmath>

#include "csh/random.hpp"
#include "csh/state.hpp"

namespace csh::test {

inline ScalarField random_band_field(const TorusGrid& g, int band, Rng& rng) {
  ScalarField f(g, Rep::spectral);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix)
      if (std::hypot(g.mode(ix), g.mode(iy)) <= band) f.at(ix, iy) = rng.cgaussian();
  return from_spectral(f);
}

inline ScalarField random_real_band_field(const TorusGrid& g, int band, Rng& rng) {
  return real_part(random_band_field(g, band, rng));
}

// curl-free, mean-free random gauge field (a gradient)
inline GaugeField random_cf_field(const TorusGrid& g, int band, Rng& rng,
                                  double amplitude) {
  ScalarField chi = random_real_band_field(g, band, rng);
  const double s = sup_norm(chi);
  if (s > 0.0) chi = scale(chi, amplitude / s);
  const ScalarField chi_s = to_spectral(chi);
  return GaugeField(derivative_real(chi_s, 0), derivative_real(chi_s, 1));
}

// Constraint-satisfying state with all products resolvable on the grid:
// keep the matter band small enough that cubic terms stay below Nyquist.
inline CSHState random_compatible_state(const TorusGrid& g, uint64_t seed,
                                        double amplitude = 0.5,
                                        int band = -1,
                                        double acf_amplitude = 0.25,
                                        std::array<double, 2> mean = {0.0, 0.0}) {
  Rng rng(seed);
  if (band < 0) band = std::max(2, g.n() / 8 - 1);
  ScalarField phi0 = random_band_field(g, band, rng);
  ScalarField phi1 = random_band_field(g, band, rng);
  const double h1 = sobolev_norm(as_spectral(phi0), 1.0);
  if (h1 > 0.0) phi0 = scale(phi0, amplitude / h1);
  const double l2 = l2_norm(phi1);
  if (l2 > 0.0) phi1 = scale(phi1, amplitude / l2);
  const double denom = integral(abs_squared(phi0)).real();
  if (denom > 0.0) {
    const double num = integral(imag_part(conj_multiply(phi0, phi1))).real();
    axpy(phi1, cplx(0.0, -num / denom), phi0);
  }
  GaugeField acf = random_cf_field(g, band, rng, acf_amplitude);
  return make_compatible_data(phi0, phi1, acf, mean);
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace csh::test
