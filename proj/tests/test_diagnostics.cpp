#include <doctest.h>

#include <cmath>

#include "csh/dynamics.hpp"
#include "csh/errors.hpp"
#include "csh/gauge.hpp"
#include "helpers.hpp"

using namespace csh;

namespace {
const double kTwoPi = 2.0 * M_PI;

Trajectory short_nonlinear_run(const TorusGrid& g, uint64_t seed, double t_end,
                               const Potential& v) {
  const CSHState s0 = test::random_compatible_state(g, seed, 0.7);
  SchemeConfig scheme;
  scheme.dt = 1e-3;
  scheme.t_end = t_end;
  scheme.record_stride = 20;
  return evolve(s0, scheme, v);
}
}  // namespace

TEST_CASE("record of the zero state is all zeros") {
  TorusGrid g(16, kTwoPi);
  const CSHState zero(0.0, ScalarField(g, Rep::physical), ScalarField(g, Rep::physical),
                      GaugeField(g), {0.0, 0.0}, GaugeStorage::curl_free_part);
  const DiagnosticsRecord r = record(zero, Potential({0.0, 1.0}, 1.0));
  CHECK(r.energy == 0.0);
  CHECK(r.constraint_l2 == 0.0);
  CHECK(r.i_value == 0.0);
  CHECK(r.phi_l2 == 0.0);
  CHECK(r.phi_h1 == 0.0);
  CHECK(r.acf_norm == 0.0);
  CHECK(r.adf_norm == 0.0);
}

TEST_CASE("record aggregates the individually computed observables") {
  TorusGrid g(32, kTwoPi);
  const CSHState s = test::random_compatible_state(g, 301);
  const Potential v({0.0, 1.0}, 1.0);
  const DiagnosticsRecord r = record(s, v);
  CHECK(test::rel_diff(r.energy, energy(s, v)) < 1e-13);
  CHECK(test::rel_diff(r.i_value, i_functional(s)) < 1e-13);
  CHECK(std::abs(r.constraint_l2 - constraint_residual(s).l2) < 1e-14);
  CHECK(test::rel_diff(r.phi_l2, l2_norm(s.phi())) < 1e-14);
  CHECK(test::rel_diff(r.phi_h1, sobolev_norm(as_spectral(s.phi()), 1.0)) < 1e-14);
}

TEST_CASE("energy is constant along the solvable mode") {
  TorusGrid g(16, kTwoPi);
  ScalarField phi(g, Rep::spectral);
  phi.at(1, 0) = 1.0;
  const ScalarField phi_p = from_spectral(phi);
  const CSHState s0(0.0, phi_p, scale(phi_p, cplx(0.0, -std::sqrt(2.0))),
                    GaugeField(g), {0.0, 0.0}, GaugeStorage::curl_free_part);
  SchemeConfig scheme;
  scheme.dt = 1e-3;
  scheme.t_end = 0.5;
  scheme.record_stride = 50;
  scheme.gauge_coupling = false;
  const Trajectory traj = evolve(s0, scheme, Potential({1.0}, 1.0));
  const double e0 = traj.records.front().energy;
  for (const auto& r : traj.records)
    CHECK(std::abs(r.energy - e0) < 1e-9 * std::max(1.0, e0));
}

TEST_CASE("gronwall envelope holds trivially on the zero trajectory") {
  TorusGrid g(16, kTwoPi);
  const CSHState zero(0.0, ScalarField(g, Rep::physical), ScalarField(g, Rep::physical),
                      GaugeField(g), {0.0, 0.0}, GaugeStorage::curl_free_part);
  SchemeConfig scheme;
  scheme.dt = 1e-2;
  scheme.t_end = 0.1;
  const Trajectory traj = evolve(zero, scheme, Potential({0.0, 1.0}, 1.0));
  const BoundCheck c = gronwall_check(traj.records, 1.0);
  CHECK(c.holds);
}

TEST_CASE("gronwall and energy bounds hold on a sign-condition run") {
  TorusGrid g(32, kTwoPi);
  const Potential v({-1.0, 1.0}, 1.0);  // V(r) = -r + r^2, alpha = 1
  REQUIRE(check_sign_condition(v, 1.0, 100.0, 10000));
  const Trajectory traj = short_nonlinear_run(g, 303, 0.3, v);
  REQUIRE_FALSE(traj.blew_up);
  const BoundCheck gw = gronwall_check(traj.records, 1.0);
  CHECK(gw.holds);
  CHECK(gw.min_slack >= 0.0);  // zero exactly at the initial record
  const BoundCheck eb = energy_bound_check(traj.records, 1.0);
  CHECK(eb.holds);
}

TEST_CASE("energy bound with V = 0 is the identity up to the alpha term") {
  TorusGrid g(32, kTwoPi);
  const Trajectory traj = short_nonlinear_run(g, 307, 0.05, Potential());
  const BoundCheck eb = energy_bound_check(traj.records, 1e-3);
  CHECK(eb.holds);
  // with V = 0, sum ||D phi||^2 = E exactly, so the slack is the tiny
  // alpha^2 ||phi||^2 margin plus |E(0)| - E(t) drift
  CHECK(eb.min_slack < 1e-2);
  CHECK(eb.min_slack >= -1e-12);
}

TEST_CASE("alpha must be positive for the bound checks") {
  std::vector<DiagnosticsRecord> series(1);
  CHECK_THROWS_AS(gronwall_check(series, 0.0), UsageError);
  CHECK_THROWS_AS(energy_bound_check(series, -1.0), UsageError);
}

TEST_CASE("comparing a trajectory with itself gives zeros") {
  TorusGrid g(16, kTwoPi);
  const Trajectory traj = short_nonlinear_run(g, 311, 0.05, Potential({0.0, 1.0}, 1.0));
  const TrajectoryDifference d = compare_trajectories(traj, traj);
  CHECK(d.max_sup == 0.0);
}

TEST_CASE("gauge-transformed trajectories differ in phase but not in modulus") {
  TorusGrid g(32, kTwoPi);
  const CSHState s0 = test::random_compatible_state(g, 313, 0.8);
  SchemeConfig scheme;
  scheme.dt = 1e-3;
  scheme.t_end = 0.02;
  scheme.record_stride = 10;
  const Potential v({0.0, 1.0}, 1.0);
  const Trajectory a = evolve(s0, scheme, v);

  ScalarField chi(g, Rep::physical);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix)
      chi.at(ix, iy) = 0.8 * std::cos(ix * g.dx());
  const Trajectory b = evolve(apply_gauge(s0, GaugeFunction{chi}), scheme, v);

  const TrajectoryDifference d = compare_trajectories(a, b);
  CHECK(d.phi_sup.back() > 0.05);      // the phase shows up in phi itself
  CHECK(d.phi_abs_sup.back() < 1e-7);  // but not in |phi|
}

TEST_CASE("mismatched grids are rejected") {
  TorusGrid g1(16, kTwoPi);
  TorusGrid g2(32, kTwoPi);
  SchemeConfig scheme;
  scheme.dt = 1e-2;
  scheme.t_end = 0.02;
  scheme.record_stride = 1;
  const Potential v;
  const CSHState a(0.0, ScalarField(g1, Rep::physical), ScalarField(g1, Rep::physical),
                   GaugeField(g1), {0.0, 0.0}, GaugeStorage::curl_free_part);
  const CSHState b(0.0, ScalarField(g2, Rep::physical), ScalarField(g2, Rep::physical),
                   GaugeField(g2), {0.0, 0.0}, GaugeStorage::curl_free_part);
  const Trajectory ta = evolve(a, scheme, v);
  const Trajectory tb = evolve(b, scheme, v);
  CHECK_THROWS_AS(compare_trajectories(ta, tb), UsageError);
}
