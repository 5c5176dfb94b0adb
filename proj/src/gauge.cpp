#include "csh/gauge.hpp"

#include <cmath>

#include "csh/errors.hpp"
#include "csh/kernels.hpp"

namespace csh {

CSHState apply_gauge(const CSHState& state, const GaugeFunction& chi) {
  const ScalarField chi_p = as_physical(chi.chi);
  require_same_grid(state.phi(), chi_p);
  const TorusGrid& grid = state.grid();
  const int n = grid.n();

  ScalarField phi = state.phi();
  ScalarField phi_t = state.phi_t();
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) {
      const double c = chi_p[off + ix].real();
      const cplx phase(std::cos(c), std::sin(c));
      phi[off + ix] *= phase;
      phi_t[off + ix] *= phase;
    }
  });

  const ScalarField chi_s = as_spectral(chi_p);
  GaugeField grad_chi(derivative_real(chi_s, 0), derivative_real(chi_s, 1));
  GaugeField gauge = add(state.gauge(), grad_chi);
  return CSHState(state.time(), std::move(phi), std::move(phi_t),
                  std::move(gauge), state.a_mean(), state.storage());
}

GaugeFunction coulomb_chi(const GaugeField& a) {
  ScalarField div_a = to_spectral(divergence(a));
  ScalarField chi = apply_multiplier(div_a, Multiplier::inv_neg_lap());
  return GaugeFunction{real_part(from_spectral(chi))};
}

}  // namespace csh
