#include <doctest.h>

#include <cmath>

#include "csh/errors.hpp"
#include "csh/field.hpp"
#include "helpers.hpp"

using namespace csh;
using test::random_band_field;

namespace {

// Brute-force double-sum discrete Fourier transform; the independent oracle
// for the fast path.
ScalarField dft_oracle(const ScalarField& f) {
  const TorusGrid& g = f.grid();
  const int n = g.n();
  ScalarField out(g, Rep::spectral);
  for (int my = 0; my < n; ++my) {
    for (int mx = 0; mx < n; ++mx) {
      cplx acc{0.0, 0.0};
      for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
          const double phase = -2.0 * M_PI * (static_cast<double>(mx) * ix +
                                              static_cast<double>(my) * iy) / n;
          acc += f.at(ix, iy) * cplx(std::cos(phase), std::sin(phase));
        }
      }
      out.at(mx, my) = acc / static_cast<double>(n * n);
    }
  }
  return out;
}

ScalarField single_harmonic(const TorusGrid& g, int mx, int my, cplx amp = 1.0) {
  ScalarField f(g, Rep::spectral);
  f.at(((mx % g.n()) + g.n()) % g.n(), ((my % g.n()) + g.n()) % g.n()) = amp;
  return from_spectral(f);
}

}  // namespace

TEST_CASE("constant field transforms to a pure zero mode") {
  TorusGrid g(8, 2.0 * M_PI);
  ScalarField f(g, Rep::physical);
  for (size_t i = 0; i < f.size(); ++i) f[i] = cplx(2.5, -1.0);
  const ScalarField spec = to_spectral(f);
  CHECK(std::abs(spec[0] - cplx(2.5, -1.0)) < 1e-14);
  for (size_t i = 1; i < spec.size(); ++i) CHECK(std::abs(spec[i]) < 1e-14);
}

TEST_CASE("single harmonic has a unit coefficient at its mode") {
  TorusGrid g(16, 2.0 * M_PI);
  const int n = g.n();
  ScalarField f(g, Rep::physical);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double x = ix * g.dx();
      f.at(ix, iy) = std::exp(cplx(0.0, x));  // e^{i 2 pi x / L}, L = 2 pi
    }
  const ScalarField spec = to_spectral(f);
  CHECK(std::abs(spec.at(1, 0) - 1.0) < 1e-13);
  double off = 0.0;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      if (!(ix == 1 && iy == 0)) off = std::max(off, std::abs(spec.at(ix, iy)));
  CHECK(off < 1e-13);
}

TEST_CASE("fast transform matches the double-sum oracle on a random 4x4 field") {
  TorusGrid g(4, 3.0);
  Rng rng(42);
  ScalarField f(g, Rep::physical);
  for (size_t i = 0; i < f.size(); ++i) f[i] = rng.cgaussian();
  const ScalarField fast = to_spectral(f);
  const ScalarField slow = dft_oracle(f);
  for (size_t i = 0; i < fast.size(); ++i)
    CHECK(std::abs(fast[i] - slow[i]) < 1e-12);
}

TEST_CASE("round trip is the identity across grid sizes") {
  for (int n : {4, 8, 12, 16, 32, 64, 128, 256}) {
    TorusGrid g(n, 5.0);
    Rng rng(7 + n);
    ScalarField f(g, Rep::physical);
    for (size_t i = 0; i < f.size(); ++i) f[i] = rng.cgaussian();
    const ScalarField back = from_spectral(to_spectral(f));
    double worst = 0.0;
    for (size_t i = 0; i < f.size(); ++i)
      worst = std::max(worst, std::abs(back[i] - f[i]) / std::max(1.0, std::abs(f[i])));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("wrong representation flag is a usage error") {
  TorusGrid g(8, 1.0);
  ScalarField f(g, Rep::physical);
  CHECK_THROWS_AS(from_spectral(f), UsageError);
  CHECK_THROWS_AS(to_spectral(to_spectral(f)), UsageError);
}

TEST_CASE("real field has a Hermitian-symmetric spectrum") {
  TorusGrid g(16, 2.0);
  Rng rng(3);
  const ScalarField f = test::random_real_band_field(g, 5, rng);
  const ScalarField spec = to_spectral(f);
  const int n = g.n();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const cplx a = spec.at(ix, iy);
      const cplx b = std::conj(spec.at((n - ix) % n, (n - iy) % n));
      CHECK(std::abs(a - b) < 1e-13);
    }
}

TEST_CASE("derivative multiplier on a single harmonic") {
  TorusGrid g(16, 2.0 * M_PI);
  const ScalarField f = single_harmonic(g, 1, 0);
  const ScalarField df = apply_multiplier(f, Multiplier::partial(0));
  // d_1 e^{i x} = i e^{i x}
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(df[i] - cplx(0.0, 1.0) * f[i]) < 1e-13);
}

TEST_CASE("inverse-Laplacian derivative on a single harmonic") {
  TorusGrid g(16, 2.0 * M_PI);
  const ScalarField f = single_harmonic(g, 1, 0);
  const ScalarField df = apply_multiplier(f, Multiplier::inv_lap_partial(0));
  // Lap^-1 d_1 e^{i x} = -i e^{i x}
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(df[i] - cplx(0.0, -1.0) * f[i]) < 1e-13);
}

TEST_CASE("bessel multiplier scales a unit mode by sqrt(2)") {
  TorusGrid g(16, 2.0 * M_PI);
  const ScalarField f = single_harmonic(g, 1, 0);
  const ScalarField bf = apply_multiplier(f, Multiplier::bessel(1.0));
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(bf[i] - std::sqrt(2.0) * f[i]) < 1e-13);
}

TEST_CASE("negative-power multipliers treat k = 0 as zero, no numeric fault") {
  TorusGrid g(8, 2.0 * M_PI);
  ScalarField f(g, Rep::physical);
  for (size_t i = 0; i < f.size(); ++i) f[i] = 1.0;  // pure mean
  for (const auto& m : {Multiplier::abs_grad(-1.0), Multiplier::inv_neg_lap(),
                        Multiplier::inv_lap_partial(0)}) {
    const ScalarField out = apply_multiplier(f, m);
    CHECK(all_finite(out));
    CHECK(sup_norm(out) < 1e-14);
  }
}

TEST_CASE("mixed partials commute") {
  TorusGrid g(32, 4.0);
  Rng rng(11);
  const ScalarField f = to_spectral(random_band_field(g, 9, rng));
  const ScalarField a =
      apply_multiplier(apply_multiplier(f, Multiplier::partial(0)), Multiplier::partial(1));
  const ScalarField b =
      apply_multiplier(apply_multiplier(f, Multiplier::partial(1)), Multiplier::partial(0));
  // same multiplier product, opposite application order: agreement to the
  // last rounding of k1*(k2*c) vs k2*(k1*c)
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i] - b[i]) <= 1e-12 * std::max(1.0, std::abs(a[i])));
}

TEST_CASE("composite inverse-Laplacian derivative sum is the identity on mean-free fields") {
  TorusGrid g(32, 2.0 * M_PI);
  Rng rng(13);
  ScalarField f = to_spectral(random_band_field(g, 9, rng));
  f[0] = 0.0;  // strip the mean
  const ScalarField d1 = apply_multiplier(apply_multiplier(f, Multiplier::partial(0)),
                                          Multiplier::inv_lap_partial(0));
  const ScalarField d2 = apply_multiplier(apply_multiplier(f, Multiplier::partial(1)),
                                          Multiplier::inv_lap_partial(1));
  const ScalarField sum = add(d1, d2);
  for (size_t i = 0; i < f.size(); ++i)
    CHECK(std::abs(sum[i] - f[i]) <= 1e-14 * std::max(1.0, std::abs(f[i])));
}

TEST_CASE("helmholtz splits a gradient field into a pure curl-free part") {
  TorusGrid g(32, 2.0 * M_PI);
  // A = grad sin x = (cos x, 0)
  const int n = g.n();
  GaugeField a(g);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) a.x.at(ix, iy) = std::cos(ix * g.dx());
  const HelmholtzParts parts = helmholtz_decompose(a);
  CHECK(sup_norm(parts.df.x) < 1e-13);
  CHECK(sup_norm(parts.df.y) < 1e-13);
  CHECK(sup_norm_difference(parts.cf.x, a.x) < 1e-13);
  CHECK(std::abs(parts.mean[0]) < 1e-14);
  CHECK(std::abs(parts.mean[1]) < 1e-14);
}

TEST_CASE("helmholtz splits a perp-gradient field into a pure div-free part") {
  TorusGrid g(32, 2.0 * M_PI);
  // A = (-d_2 f, d_1 f) with f = sin x_2: A = (-cos x_2, 0)
  const int n = g.n();
  GaugeField a(g);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) a.x.at(ix, iy) = -std::cos(iy * g.dx());
  const HelmholtzParts parts = helmholtz_decompose(a);
  CHECK(sup_norm(parts.cf.x) < 1e-13);
  CHECK(sup_norm(parts.cf.y) < 1e-13);
  CHECK(sup_norm_difference(parts.df.x, a.x) < 1e-13);
}

TEST_CASE("helmholtz sends a constant field entirely to the mean slot") {
  TorusGrid g(8, 1.0);
  GaugeField a(g);
  for (size_t i = 0; i < a.x.size(); ++i) {
    a.x[i] = 0.75;
    a.y[i] = -0.25;
  }
  const HelmholtzParts parts = helmholtz_decompose(a);
  CHECK(parts.mean[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(parts.mean[1] == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(sup_norm(parts.df.x) < 1e-14);
  CHECK(sup_norm(parts.cf.x) < 1e-14);
}

TEST_CASE("helmholtz properties: reconstruction, orthogonality, idempotence, spectral range") {
  TorusGrid g(32, 3.0);
  Rng rng(17);
  GaugeField a(test::random_real_band_field(g, 10, rng),
               test::random_real_band_field(g, 10, rng));
  a.x = add_constant(a.x, 0.3);
  const HelmholtzParts parts = helmholtz_decompose(a);

  // exact reconstruction
  GaugeField rebuilt = add(parts.df, parts.cf);
  rebuilt.x = add_constant(rebuilt.x, parts.mean[0]);
  rebuilt.y = add_constant(rebuilt.y, parts.mean[1]);
  CHECK(sup_norm_difference(rebuilt.x, a.x) < 1e-13);
  CHECK(sup_norm_difference(rebuilt.y, a.y) < 1e-13);

  // div A_df = 0 and curl A_cf = 0 mode-wise
  CHECK(l2_norm(divergence(parts.df)) < 1e-12);
  CHECK(l2_norm(curl(parts.cf)) < 1e-12);

  // both parts mean-free
  CHECK(std::abs(mean(parts.df.x)) < 1e-14);
  CHECK(std::abs(mean(parts.cf.x)) < 1e-14);

  // L2 orthogonality
  const cplx ip = inner_product(parts.df.x, parts.cf.x) +
                  inner_product(parts.df.y, parts.cf.y);
  CHECK(std::abs(ip) < 1e-12 * l2_norm(a.x) * l2_norm(a.x));

  // idempotence: decomposing the df part returns it unchanged
  const HelmholtzParts again = helmholtz_decompose(parts.df);
  CHECK(sup_norm_difference(again.df.x, parts.df.x) < 1e-13);
  CHECK(sup_norm(again.cf.x) < 1e-13);
  CHECK(std::abs(again.mean[0]) < 1e-14);
}

TEST_CASE("dealias zeroes exactly the modes above n/3") {
  TorusGrid g(12, 2.0 * M_PI);
  ScalarField f(g, Rep::spectral);
  f.at(5, 0) = 1.0;  // 5 > 12/3, dropped
  f.at(4, 0) = 2.0;  // 4 <= 12/3, kept
  f.at(0, 5) = 3.0;
  const ScalarField d = dealias(f);
  CHECK(std::abs(d.at(5, 0)) == 0.0);
  CHECK(std::abs(d.at(0, 5)) == 0.0);
  CHECK(std::abs(d.at(4, 0) - 2.0) < 1e-15);
}

TEST_CASE("dealias is the identity on band-limited spectra") {
  TorusGrid g(24, 1.0);
  Rng rng(5);
  ScalarField f(g, Rep::spectral);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix)
      if (std::hypot(g.mode(ix), g.mode(iy)) <= 8) f.at(ix, iy) = rng.cgaussian();
  const ScalarField d = dealias(f);
  for (size_t i = 0; i < f.size(); ++i) CHECK(d[i] == f[i]);
}

TEST_CASE("sobolev norm of a single harmonic") {
  const double L = 2.0 * M_PI;
  TorusGrid g(16, L);
  const ScalarField f = to_spectral(single_harmonic(g, 1, 0));
  // <k> = sqrt(2) at k = (1,0), ||f||_L2 = L
  CHECK(sobolev_norm(f, 1.0) == doctest::Approx(std::sqrt(2.0) * L).epsilon(1e-13));
}

TEST_CASE("homogeneous sobolev norm ignores the mean") {
  TorusGrid g(8, 1.5);
  ScalarField f(g, Rep::spectral);
  f[0] = 4.2;  // constant field
  CHECK(sobolev_norm(f, 0.7, true) == 0.0);
}

TEST_CASE("s = 0 sobolev norm equals the quadrature L2 norm (Plancherel)") {
  TorusGrid g(32, 2.5);
  Rng rng(23);
  const ScalarField f = random_band_field(g, 10, rng);
  CHECK(test::rel_diff(sobolev_norm(to_spectral(f), 0.0), l2_norm(f)) < 1e-13);
}
