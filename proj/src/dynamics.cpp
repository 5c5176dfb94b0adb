#include "csh/dynamics.hpp"

#include <cmath>
#include <limits>

#include "csh/errors.hpp"
#include "csh/kernels.hpp"

namespace csh {

namespace {

constexpr cplx kImag{0.0, 1.0};

// Flat evolved state shared by the explicit steppers. The gauge block holds
// A^cf for the reduced system and the whole mean-free A for the direct one;
// the k = 0 mode of A rides in `mean` either way.
struct SysVec {
  ScalarField phi, phi_t;
  ScalarField g1, g2;
  std::array<double, 2> mean;
};

struct RhsContext {
  const Potential* v;
  bool reformulated;
  RhsOptions opt;
};

SysVec add_scaled(const SysVec& a, double c, const SysVec& b) {
  SysVec r = a;
  axpy(r.phi, c, b.phi);
  axpy(r.phi_t, c, b.phi_t);
  axpy(r.g1, c, b.g1);
  axpy(r.g2, c, b.g2);
  r.mean[0] += c * b.mean[0];
  r.mean[1] += c * b.mean[1];
  return r;
}

bool sysvec_finite(const SysVec& y) {
  return all_finite(y.phi) && all_finite(y.phi_t) && all_finite(y.g1) &&
         all_finite(y.g2) && std::isfinite(y.mean[0]) && std::isfinite(y.mean[1]);
}

struct GaugeRate {
  ScalarField g1, g2;
  std::array<double, 2> mean;
};

// Spectral post-processing of the gauge-law currents: extract the k = 0 mode,
// optionally project onto the curl-free range, truncate, return real fields.
GaugeRate process_gauge_law(const ScalarField& c1, const ScalarField& c2,
                            bool cf_project, bool dealias_on) {
  ScalarField s1 = to_spectral(c1);
  ScalarField s2 = to_spectral(c2);
  const TorusGrid& g = c1.grid();
  const int n = g.n();
  GaugeRate out{ScalarField(g, Rep::physical), ScalarField(g, Rep::physical),
                {s1[0].real(), s2[0].real()}};
  kernels::for_each_line(n, [&](int iy) {
    const double ky = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const size_t i = static_cast<size_t>(iy) * n + ix;
      const double kx = g.wavenumber(ix);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0 || (dealias_on && !within_dealias_band(g, ix, iy))) {
        s1[i] = s2[i] = 0.0;
        continue;
      }
      if (cf_project) {
        const cplx kdot = (kx * s1[i] + ky * s2[i]) / k2;
        s1[i] = kx * kdot;
        s2[i] = ky * kdot;
      }
    }
  });
  out.g1 = real_part(from_spectral(s1));
  out.g2 = real_part(from_spectral(s2));
  return out;
}

// Shared right-hand side. Both formulations run the same matter pipeline on
// the assembled gauge field; they differ only in how the gauge block is put
// together and in the projection applied to its rate.
SysVec rhs_sysvec(const SysVec& y, const RhsContext& ctx) {
  const TorusGrid& grid = y.phi.grid();
  const int n = grid.n();
  const ScalarField phi_s = to_spectral(y.phi);
  const ScalarField d1phi = from_spectral(apply_multiplier(phi_s, Multiplier::partial(0)));
  const ScalarField d2phi = from_spectral(apply_multiplier(phi_s, Multiplier::partial(1)));
  const ScalarField lap_phi = from_spectral(apply_multiplier(phi_s, Multiplier::laplacian()));

  SysVec out{y.phi_t, ScalarField(grid, Rep::physical),
             ScalarField(grid, Rep::physical), ScalarField(grid, Rep::physical),
             {0.0, 0.0}};

  if (!ctx.opt.gauge_coupling) {
    ScalarField nprod(grid, Rep::physical);
    if (ctx.opt.potential_on) {
      kernels::for_each_line(n, [&](int iy) {
        const size_t off = static_cast<size_t>(iy) * n;
        for (int ix = 0; ix < n; ++ix) {
          const cplx p = y.phi[off + ix];
          nprod[off + ix] = -p * ctx.v->prime(std::norm(p));
        }
      });
      if (ctx.opt.dealias) nprod = dealias(nprod);
    }
    out.phi_t = add(lap_phi, nprod);
    return out;
  }

  ScalarField a1(grid, Rep::physical), a2(grid, Rep::physical);
  if (ctx.reformulated) {
    const GaugeField adf = adf_from_matter(y.phi, y.phi_t);
    a1 = add(adf.x, y.g1);
    a2 = add(adf.y, y.g2);
  } else {
    a1 = y.g1;
    a2 = y.g2;
  }
  a1 = add_constant(a1, y.mean[0]);
  a2 = add_constant(a2, y.mean[1]);

  // div A = div of the evolved block: the reconstructed A^df is
  // divergence-free and the k = 0 mode is constant.
  const ScalarField div_a = divergence(GaugeField(y.g1, y.g2));

  ScalarField nprod(grid, Rep::physical);
  ScalarField cur1(grid, Rep::physical), cur2(grid, Rep::physical);
  const bool pot_on = ctx.opt.potential_on;
  const Potential* v = ctx.v;
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) {
      const size_t i = off + ix;
      const cplx p = y.phi[i];
      const cplx dp1 = d1phi[i];
      const cplx dp2 = d2phi[i];
      const double ax = a1[i].real();
      const double ay = a2[i].real();
      const cplx cov1 = dp1 - kImag * ax * p;
      const cplx cov2 = dp2 - kImag * ay * p;
      cplx val = -2.0 * kImag * (ax * dp1 + ay * dp2) -
                 kImag * div_a[i].real() * p - (ax * ax + ay * ay) * p;
      if (pot_on) val -= p * v->prime(std::norm(p));
      nprod[i] = val;
      cur1[i] = -2.0 * std::imag(std::conj(p) * cov2);
      cur2[i] = 2.0 * std::imag(std::conj(p) * cov1);
    }
  });
  if (ctx.opt.dealias) nprod = dealias(nprod);
  out.phi_t = add(lap_phi, nprod);

  GaugeRate gr = process_gauge_law(cur1, cur2, ctx.reformulated, ctx.opt.dealias);
  out.g1 = std::move(gr.g1);
  out.g2 = std::move(gr.g2);
  out.mean = gr.mean;
  return out;
}

SysVec rk4_step(const SysVec& y, double dt, const RhsContext& ctx) {
  const SysVec k1 = rhs_sysvec(y, ctx);
  const SysVec k2 = rhs_sysvec(add_scaled(y, 0.5 * dt, k1), ctx);
  const SysVec k3 = rhs_sysvec(add_scaled(y, 0.5 * dt, k2), ctx);
  const SysVec k4 = rhs_sysvec(add_scaled(y, dt, k3), ctx);
  SysVec out = add_scaled(y, dt / 6.0, k1);
  out = add_scaled(out, dt / 3.0, k2);
  out = add_scaled(out, dt / 3.0, k3);
  out = add_scaled(out, dt / 6.0, k4);
  return out;
}

SysVec to_sysvec(const CSHState& s, bool reformulated) {
  if (reformulated) {
    GaugeField cf = s.curl_free_part();
    return SysVec{s.phi(), s.phi_t(), std::move(cf.x), std::move(cf.y), s.a_mean()};
  }
  GaugeField full = s.assembled_gauge();
  return SysVec{s.phi(), s.phi_t(), std::move(full.x), std::move(full.y), s.a_mean()};
}

CSHState from_sysvec(const SysVec& y, double t, bool reformulated) {
  return CSHState(t, y.phi, y.phi_t, GaugeField(y.g1, y.g2), y.mean,
                  reformulated ? GaugeStorage::curl_free_part
                               : GaugeStorage::full_field);
}

CSHState dealias_state(const CSHState& s) {
  return CSHState(s.time(), dealias(s.phi()), dealias(s.phi_t()),
                  dealias_real(s.gauge()), s.a_mean(), s.storage());
}

}  // namespace

// -- public right-hand sides ------------------------------------------------

DirectRates rhs_direct(const CSHState& state, const Potential& v,
                       const RhsOptions& opt) {
  RhsContext ctx{&v, false, opt};
  SysVec rate = rhs_sysvec(to_sysvec(state, false), ctx);
  GaugeField da(add_constant(rate.g1, rate.mean[0]),
                add_constant(rate.g2, rate.mean[1]));
  return DirectRates{std::move(rate.phi), std::move(rate.phi_t), std::move(da)};
}

ReformulatedRates rhs_reformulated(const CSHState& state, const Potential& v,
                                   const RhsOptions& opt) {
  RhsContext ctx{&v, true, opt};
  SysVec rate = rhs_sysvec(to_sysvec(state, true), ctx);
  return ReformulatedRates{std::move(rate.phi), std::move(rate.phi_t),
                           GaugeField(std::move(rate.g1), std::move(rate.g2)),
                           rate.mean};
}

GaugeField NullformAcfRates::total() const {
  return add(add(null_term, cross_term), cubic_term);
}

NullformAcfRates rhs_acf_nullform(const CSHState& state, const RhsOptions& opt) {
  const TorusGrid& grid = state.grid();
  const ScalarField& phi = state.phi();
  const ScalarField phi_s = to_spectral(phi);
  const ScalarField d1phi = from_spectral(apply_multiplier(phi_s, Multiplier::partial(0)));
  const ScalarField d2phi = from_spectral(apply_multiplier(phi_s, Multiplier::partial(1)));

  const ScalarField r = abs_squared(phi);
  const ScalarField r_s = to_spectral(r);
  const ScalarField r1 = real_part(from_spectral(apply_multiplier(r_s, Multiplier::partial(0))));
  const ScalarField r2 = real_part(from_spectral(apply_multiplier(r_s, Multiplier::partial(1))));

  GaugeField a = state.assembled_gauge();
  a.x = add_constant(a.x, state.a_mean()[0]);
  a.y = add_constant(a.y, state.a_mean()[1]);

  const ScalarField w = imag_part(conj_multiply(phi, state.phi_t()));

  const int n = grid.n();
  ScalarField qnull(grid, Rep::physical);
  ScalarField cross(grid, Rep::physical);
  ScalarField cubic(grid, Rep::physical);
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) {
      const size_t i = off + ix;
      qnull[i] = std::imag(std::conj(d2phi[i]) * d1phi[i] -
                           std::conj(d1phi[i]) * d2phi[i]);
      cross[i] = a.y[i].real() * r1[i].real() - a.x[i].real() * r2[i].real();
      cubic[i] = w[i].real() * r[i].real();
    }
  });

  auto lift = [&](const ScalarField& src, double c) {
    ScalarField s = to_spectral(src);
    if (opt.dealias) s = dealias(s);
    ScalarField t1 = scale(apply_multiplier(s, Multiplier::inv_lap_partial(0)), c);
    ScalarField t2 = scale(apply_multiplier(s, Multiplier::inv_lap_partial(1)), c);
    return GaugeField(real_part(from_spectral(t1)), real_part(from_spectral(t2)));
  };

  return NullformAcfRates{lift(qnull, 2.0), lift(cross, 2.0), lift(cubic, 4.0)};
}

GaugeField adf_rate_formula(const CSHState& state) {
  GaugeField a = state.assembled_gauge();
  a.x = add_constant(a.x, state.a_mean()[0]);
  a.y = add_constant(a.y, state.a_mean()[1]);
  const auto cov = covariant_gradient(state.phi(), a);
  const ScalarField w1 = imag_part(conj_multiply(state.phi(), cov[0]));
  const ScalarField w2 = imag_part(conj_multiply(state.phi(), cov[1]));
  ScalarField s = add(apply_multiplier(to_spectral(w1), Multiplier::partial(0)),
                      apply_multiplier(to_spectral(w2), Multiplier::partial(1)));
  ScalarField a1 = scale(apply_multiplier(s, Multiplier::inv_lap_partial(1)), -2.0);
  ScalarField a2 = scale(apply_multiplier(s, Multiplier::inv_lap_partial(0)), 2.0);
  return GaugeField(real_part(from_spectral(a1)), real_part(from_spectral(a2)));
}

// -- steppers -----------------------------------------------------------------

CSHState step_rk4(const CSHState& state, const Potential& v,
                  const SchemeConfig& scheme) {
  if (!(scheme.dt > 0.0)) throw UsageError("step_rk4 needs dt > 0");
  const bool reform = scheme.formulation != Formulation::direct;
  RhsContext ctx{&v, reform,
                 RhsOptions{scheme.dealias, scheme.gauge_coupling, scheme.potential_on}};
  SysVec y = to_sysvec(state, reform);
  y = rk4_step(y, scheme.dt, ctx);
  if (!sysvec_finite(y))
    throw BlowUpError("non-finite values after step", state.time() + scheme.dt);
  return from_sysvec(y, state.time() + scheme.dt, reform);
}

namespace {

// Half-wave lane: the pair is carried as spectral amplitudes and the
// dispersive phase exp(+- i t <k>) is applied exactly; the remaining
// interaction-picture system is advanced with classical Runge-Kutta.
struct HwVec {
  ScalarField psi_p, psi_m;  // spectral
  ScalarField g1, g2;        // physical real, curl-free block
  std::array<double, 2> mean;
};

HwVec hw_add_scaled(const HwVec& a, double c, const HwVec& b) {
  HwVec r = a;
  axpy(r.psi_p, c, b.psi_p);
  axpy(r.psi_m, c, b.psi_m);
  axpy(r.g1, c, b.g1);
  axpy(r.g2, c, b.g2);
  r.mean[0] += c * b.mean[0];
  r.mean[1] += c * b.mean[1];
  return r;
}

// multiply each mode by exp(i sign t <k>)
ScalarField rotate_halfwave(const ScalarField& spec, double t, int sign) {
  ScalarField out = spec;
  const TorusGrid& g = spec.grid();
  const int n = g.n();
  kernels::for_each_line(n, [&](int iy) {
    const double ky = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double kx = g.wavenumber(ix);
      const double omega = std::sqrt(1.0 + kx * kx + ky * ky);
      const double ph = sign * t * omega;
      out[static_cast<size_t>(iy) * n + ix] *= cplx(std::cos(ph), std::sin(ph));
    }
  });
  return out;
}

struct HwContext {
  const Potential* v;
  RhsOptions opt;
};

HwVec hw_rhs(const HwVec& y, double tau, const HwContext& ctx) {
  const TorusGrid& grid = y.psi_p.grid();
  const int n = grid.n();
  const ScalarField fp = rotate_halfwave(y.psi_p, tau, +1);
  const ScalarField fm = rotate_halfwave(y.psi_m, tau, -1);
  const ScalarField phi_hat = add(fp, fm);
  const ScalarField phit_hat =
      scale(apply_multiplier(subtract(fp, fm), Multiplier::bessel(1.0)), kImag);
  const ScalarField phi = from_spectral(phi_hat);
  const ScalarField phi_t = from_spectral(phit_hat);
  const ScalarField d1phi = from_spectral(apply_multiplier(phi_hat, Multiplier::partial(0)));
  const ScalarField d2phi = from_spectral(apply_multiplier(phi_hat, Multiplier::partial(1)));

  ScalarField a1(grid, Rep::physical), a2(grid, Rep::physical);
  ScalarField div_a(grid, Rep::physical);
  if (ctx.opt.gauge_coupling) {
    const GaugeField adf = adf_from_matter(phi, phi_t);
    a1 = add_constant(add(adf.x, y.g1), y.mean[0]);
    a2 = add_constant(add(adf.y, y.g2), y.mean[1]);
    div_a = divergence(GaugeField(y.g1, y.g2));
  }

  // G = (box phi) + phi evaluated pointwise, minus the exactly handled part
  ScalarField nprod(grid, Rep::physical);
  ScalarField cur1(grid, Rep::physical), cur2(grid, Rep::physical);
  const bool gauge_on = ctx.opt.gauge_coupling;
  const bool pot_on = ctx.opt.potential_on;
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) {
      const size_t i = off + ix;
      const cplx p = phi[i];
      cplx val = 0.0;
      if (gauge_on) {
        const double ax = a1[i].real();
        const double ay = a2[i].real();
        const cplx cov1 = d1phi[i] - kImag * ax * p;
        const cplx cov2 = d2phi[i] - kImag * ay * p;
        val += -2.0 * kImag * (ax * d1phi[i] + ay * d2phi[i]) -
               kImag * div_a[i].real() * p - (ax * ax + ay * ay) * p;
        cur1[i] = -2.0 * std::imag(std::conj(p) * cov2);
        cur2[i] = 2.0 * std::imag(std::conj(p) * cov1);
      }
      if (pot_on) val -= p * ctx.v->prime(std::norm(p));
      nprod[i] = val;
    }
  });
  ScalarField g_hat = to_spectral(nprod);
  if (ctx.opt.dealias) g_hat = dealias(g_hat);
  g_hat = add(g_hat, phi_hat);  // the "+ phi" mass correction, exact in band

  HwVec out{ScalarField(grid, Rep::spectral), ScalarField(grid, Rep::spectral),
            ScalarField(grid, Rep::physical), ScalarField(grid, Rep::physical),
            {0.0, 0.0}};
  kernels::for_each_line(n, [&](int iy) {
    const double ky = grid.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const size_t i = static_cast<size_t>(iy) * n + ix;
      const double kx = grid.wavenumber(ix);
      const double omega = std::sqrt(1.0 + kx * kx + ky * ky);
      const cplx common = 0.5 * kImag * g_hat[i] / omega;
      const double php = -tau * omega;  // exp(-i tau <k>) for the + wave
      out.psi_p[i] = -common * cplx(std::cos(php), std::sin(php));
      out.psi_m[i] = common * cplx(std::cos(php), -std::sin(php));
    }
  });
  if (gauge_on) {
    GaugeRate gr = process_gauge_law(cur1, cur2, true, ctx.opt.dealias);
    out.g1 = std::move(gr.g1);
    out.g2 = std::move(gr.g2);
    out.mean = gr.mean;
  }
  return out;
}

HwVec hw_step(const HwVec& y, double dt, const HwContext& ctx) {
  const HwVec k1 = hw_rhs(y, 0.0, ctx);
  const HwVec k2 = hw_rhs(hw_add_scaled(y, 0.5 * dt, k1), 0.5 * dt, ctx);
  const HwVec k3 = hw_rhs(hw_add_scaled(y, 0.5 * dt, k2), 0.5 * dt, ctx);
  const HwVec k4 = hw_rhs(hw_add_scaled(y, dt, k3), dt, ctx);
  HwVec out = hw_add_scaled(y, dt / 6.0, k1);
  out = hw_add_scaled(out, dt / 3.0, k2);
  out = hw_add_scaled(out, dt / 3.0, k3);
  out = hw_add_scaled(out, dt / 6.0, k4);
  // re-anchor the interaction picture at the new step start
  out.psi_p = rotate_halfwave(out.psi_p, dt, +1);
  out.psi_m = rotate_halfwave(out.psi_m, dt, -1);
  return out;
}

bool hwvec_finite(const HwVec& y) {
  return all_finite(y.psi_p) && all_finite(y.psi_m) && all_finite(y.g1) &&
         all_finite(y.g2) && std::isfinite(y.mean[0]) && std::isfinite(y.mean[1]);
}

}  // namespace

HalfWaveStepResult step_halfwave(const HalfWavePair& pair,
                                 const HalfWaveContext& ctx, double dt) {
  if (!(dt > 0.0)) throw UsageError("step_halfwave needs dt > 0");
  if (!ctx.v) throw UsageError("step_halfwave needs a potential in the context");
  HwVec y{as_spectral(pair.plus), as_spectral(pair.minus),
          as_physical(ctx.gauge.x), as_physical(ctx.gauge.y), ctx.a_mean};
  HwContext hc{ctx.v, ctx.opt};
  y = hw_step(y, dt, hc);
  if (!hwvec_finite(y)) throw BlowUpError("non-finite values after step", dt);
  return HalfWaveStepResult{
      HalfWavePair{from_spectral(y.psi_p), from_spectral(y.psi_m)},
      GaugeField(y.g1, y.g2), y.mean};
}

double max_stable_dt(const TorusGrid& grid, Formulation f, bool dealias) {
  if (f == Formulation::halfwave)
    return std::numeric_limits<double>::infinity();
  const double kcut = dealias ? grid.n() / 3.0 : grid.n() / 2.0;
  const double kmax = 2.0 * M_PI / grid.length() * kcut * std::sqrt(2.0);
  const double omega = std::sqrt(1.0 + kmax * kmax);
  return 2.5 / omega;  // RK4 imaginary-axis limit 2*sqrt(2), with margin
}

Trajectory evolve(const CSHState& initial, const SchemeConfig& scheme,
                  const Potential& v, const DiagnosticsOptions& diag) {
  if (!(scheme.dt > 0.0)) throw UsageError("scheme.dt must be positive");
  if (scheme.t_end < 0.0) throw UsageError("scheme.t_end must be >= 0");
  if (scheme.record_stride < 1) throw UsageError("scheme.stride must be >= 1");

  Trajectory traj;
  if (scheme.gauge_coupling) {
    const auto res = constraint_residual(initial);
    const double scale_ref =
        std::max(1.0, l2_norm(initial.phi()) * l2_norm(initial.phi_t()));
    if (res.l2 > 1e-10 * scale_ref) {
      traj.warning = "initial data violates the constraint (residual L2 = " +
                     std::to_string(res.l2) + ")";
    }
  }

  CSHState cur = scheme.dealias ? dealias_state(initial) : initial;
  const double t0 = cur.time();
  const long steps = std::llround(scheme.t_end / scheme.dt);

  const auto record_state = [&](const CSHState& s) {
    traj.times.push_back(s.time());
    traj.records.push_back(record(s, v, diag));
    traj.states.push_back(s);
  };

  if (scheme.formulation == Formulation::halfwave) {
    const HalfWavePair pair0 = half_wave_split(cur.phi(), cur.phi_t());
    GaugeField cf = cur.curl_free_part();
    HwVec y{to_spectral(pair0.plus), to_spectral(pair0.minus),
            std::move(cf.x), std::move(cf.y), cur.a_mean()};
    HwContext hc{&v, RhsOptions{scheme.dealias, scheme.gauge_coupling,
                                scheme.potential_on}};
    auto materialize = [&](const HwVec& hw, double t) {
      const auto merged = half_wave_merge(
          HalfWavePair{from_spectral(hw.psi_p), from_spectral(hw.psi_m)});
      return CSHState(t, merged[0], merged[1], GaugeField(hw.g1, hw.g2),
                      hw.mean, GaugeStorage::curl_free_part);
    };
    record_state(materialize(y, t0));
    double last_good_t = t0;
    for (long k = 1; k <= steps; ++k) {
      HwVec next = hw_step(y, scheme.dt, hc);
      const double t = t0 + k * scheme.dt;
      if (!hwvec_finite(next)) {
        traj.blew_up = true;
        traj.blowup_time = t;
        break;
      }
      y = std::move(next);
      last_good_t = t;
      if (k % scheme.record_stride == 0) record_state(materialize(y, t));
    }
    traj.final_state = materialize(y, last_good_t);
    return traj;
  }

  const bool reform = scheme.formulation == Formulation::reformulated;
  RhsContext ctx{&v, reform, RhsOptions{scheme.dealias, scheme.gauge_coupling,
                                        scheme.potential_on}};
  SysVec y = to_sysvec(cur, reform);
  record_state(from_sysvec(y, t0, reform));
  double last_good_t = t0;
  for (long k = 1; k <= steps; ++k) {
    SysVec next = rk4_step(y, scheme.dt, ctx);
    const double t = t0 + k * scheme.dt;
    if (!sysvec_finite(next)) {
      traj.blew_up = true;
      traj.blowup_time = t;
      break;
    }
    y = std::move(next);
    last_good_t = t;
    if (k % scheme.record_stride == 0) record_state(from_sysvec(y, t, reform));
  }
  traj.final_state = from_sysvec(y, last_good_t, reform);
  return traj;
}

}  // namespace csh
