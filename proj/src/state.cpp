#include "csh/state.hpp"

#include <cmath>

#include "csh/errors.hpp"
#include "csh/kernels.hpp"

namespace csh {

CSHState::CSHState(double t, ScalarField phi, ScalarField phi_t,
                   GaugeField gauge, std::array<double, 2> a_mean,
                   GaugeStorage storage)
    : time_(t),
      phi_(as_physical(phi)),
      phi_t_(as_physical(phi_t)),
      gauge_(as_physical(gauge.x), as_physical(gauge.y)),
      a_mean_(a_mean),
      storage_(storage) {
  require_same_grid(phi_, phi_t_);
  require_same_grid(phi_, gauge_.x);
  require_same_grid(phi_, gauge_.y);
}

const GaugeField& CSHState::assembled_gauge() const {
  if (!assembled_) {
    if (storage_ == GaugeStorage::full_field) {
      assembled_ = gauge_;
    } else {
      assembled_ = add(adf_from_matter(phi_, phi_t_), gauge_);
    }
  }
  return *assembled_;
}

GaugeField CSHState::curl_free_part() const {
  if (storage_ == GaugeStorage::curl_free_part) return gauge_;
  return helmholtz_decompose(gauge_).cf;
}

GaugeField CSHState::div_free_part() const {
  if (storage_ == GaugeStorage::curl_free_part)
    return adf_from_matter(phi_, phi_t_);
  return helmholtz_decompose(gauge_).df;
}

// -- covariant calculus ----------------------------------------------------

std::array<ScalarField, 2> covariant_gradient(const ScalarField& phi,
                                              const GaugeField& a) {
  require_same_grid(phi, a.x);
  const ScalarField phi_s = as_spectral(phi);
  const ScalarField phi_p = as_physical(phi);
  std::array<ScalarField, 2> out = {
      from_spectral(apply_multiplier(phi_s, Multiplier::partial(0))),
      from_spectral(apply_multiplier(phi_s, Multiplier::partial(1)))};
  const ScalarField& ax = a.x;
  const ScalarField& ay = a.y;
  const int n = phi.grid().n();
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) {
      const cplx p = phi_p[off + ix];
      out[0][off + ix] -= cplx(0.0, 1.0) * ax[off + ix] * p;
      out[1][off + ix] -= cplx(0.0, 1.0) * ay[off + ix] * p;
    }
  });
  out[0] = dealias(out[0]);
  out[1] = dealias(out[1]);
  return out;
}

GaugeField adf_from_matter(const ScalarField& phi, const ScalarField& phi_t) {
  require_same_grid(phi, phi_t);
  ScalarField current = imag_part(conj_multiply(as_physical(phi), as_physical(phi_t)));
  ScalarField w = to_spectral(current);
  ScalarField a1 = scale(apply_multiplier(w, Multiplier::inv_lap_partial(1)), -2.0);
  ScalarField a2 = scale(apply_multiplier(w, Multiplier::inv_lap_partial(0)), 2.0);
  return GaugeField(real_part(from_spectral(a1)), real_part(from_spectral(a2)));
}

namespace {
GaugeField total_gauge(const CSHState& s) {
  GaugeField a = s.assembled_gauge();
  a.x = add_constant(a.x, s.a_mean()[0]);
  a.y = add_constant(a.y, s.a_mean()[1]);
  return a;
}
}  // namespace

double energy(const CSHState& state, const Potential& v) {
  const GaugeField a = total_gauge(state);
  const auto d = covariant_gradient(state.phi(), a);
  const ScalarField& phi_t = state.phi_t();
  const ScalarField& phi = state.phi();
  const int n = state.grid().n();
  const double sum = kernels::sum_over_lines(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      const size_t i = off + ix;
      acc += std::norm(phi_t[i]) + std::norm(d[0][i]) + std::norm(d[1][i]) +
             v.value(std::norm(phi[i]));
    }
    return acc;
  });
  return sum * state.grid().cell_area();
}

ConstraintResidual constraint_residual(const CSHState& state) {
  // the a_mean block drops out of the curl
  ScalarField res = curl(state.assembled_gauge());
  const ScalarField current =
      imag_part(conj_multiply(state.phi(), state.phi_t()));
  axpy(res, -2.0, current);
  const double l2 = l2_norm(res);
  return ConstraintResidual{std::move(res), l2};
}

double i_functional(const CSHState& state) {
  const GaugeField a = total_gauge(state);
  const auto d = covariant_gradient(state.phi(), a);
  return l2_norm(state.phi()) + l2_norm(d[0]) + l2_norm(d[1]) +
         l2_norm(state.phi_t());
}

CSHState make_compatible_data(const ScalarField& phi0, const ScalarField& phi1,
                              const GaugeField& a_cf_free,
                              std::array<double, 2> a_mean,
                              const CompatibleDataOptions& opt) {
  require_same_grid(phi0, phi1);
  require_same_grid(phi0, a_cf_free.x);

  // Topological obstruction: the constraint's left side is an exact curl,
  // so the matter current must be mean-free on the torus.
  const ScalarField current = imag_part(conj_multiply(as_physical(phi0), as_physical(phi1)));
  const double current_mean = mean(current).real();
  const double current_scale = std::max(1.0, sup_norm(current));
  if (std::abs(current_mean) > opt.mean_tolerance * current_scale) {
    throw IncompatibleDataError(
        "initial data is topologically obstructed on the torus: "
        "Im(conj(phi0) phi1) has spatial mean " +
        std::to_string(current_mean) +
        ", but the constraint forces a mean-free current");
  }

  GaugeField cf = a_cf_free;
  const auto free_mean = field_mean(a_cf_free);
  a_mean[0] += free_mean[0];
  a_mean[1] += free_mean[1];

  const double curl_l2 = l2_norm(curl(a_cf_free));
  const double a_scale = std::max(1.0, std::max(sup_norm(a_cf_free.x), sup_norm(a_cf_free.y)));
  if (curl_l2 > opt.curl_tolerance * a_scale) {
    if (!opt.project_curl)
      throw IncompatibleDataError(
          "free gauge part has curl (L2 = " + std::to_string(curl_l2) +
          "); pass project_curl to keep only its curl-free part");
    cf = helmholtz_decompose(a_cf_free).cf;
  } else {
    // strip the mean so the stored part is exactly mean-free
    cf.x = add_constant(as_physical(cf.x), -free_mean[0]);
    cf.y = add_constant(as_physical(cf.y), -free_mean[1]);
  }

  return CSHState(0.0, as_physical(phi0), as_physical(phi1), std::move(cf),
                  a_mean, GaugeStorage::curl_free_part);
}

HalfWavePair half_wave_split(const ScalarField& phi, const ScalarField& phi_t) {
  require_same_grid(phi, phi_t);
  ScalarField p = as_spectral(phi);
  // i^-1 <grad>^-1 phi_t = -i <grad>^-1 phi_t
  ScalarField q = scale(apply_multiplier(as_spectral(phi_t), Multiplier::bessel(-1.0)),
                        cplx(0.0, -1.0));
  ScalarField plus = scale(add(p, q), 0.5);
  ScalarField minus = scale(subtract(p, q), 0.5);
  return HalfWavePair{from_spectral(plus), from_spectral(minus)};
}

std::array<ScalarField, 2> half_wave_merge(const HalfWavePair& pair) {
  require_same_grid(pair.plus, pair.minus);
  ScalarField p = as_spectral(pair.plus);
  ScalarField m = as_spectral(pair.minus);
  ScalarField phi = add(p, m);
  ScalarField phi_t = scale(apply_multiplier(subtract(p, m), Multiplier::bessel(1.0)),
                            cplx(0.0, 1.0));
  return {from_spectral(phi), from_spectral(phi_t)};
}

}  // namespace csh
