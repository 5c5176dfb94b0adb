// Throughput comparison of the serial reference lane against the OpenMP lane
// on the kernels that dominate a run: the 2-d transform, the multiplier
// sweep, the pointwise nonlinearity, the quadrature reduction, and one full
// right-hand-side evaluation. Also verifies that both lanes produce
// bit-identical results on the same inputs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "csh/dynamics.hpp"
#include "csh/kernels.hpp"
#include "csh/random.hpp"
#include "csh/state.hpp"

using namespace csh;

namespace {

ScalarField random_field(const TorusGrid& g, int band, Rng& rng) {
  ScalarField f(g, Rep::spectral);
  for (int iy = 0; iy < g.n(); ++iy)
    for (int ix = 0; ix < g.n(); ++ix)
      if (std::hypot(g.mode(ix), g.mode(iy)) <= band) f.at(ix, iy) = rng.cgaussian();
  return from_spectral(f);
}

template <class F>
double time_ms(int reps, F&& fn) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

bool bits_equal(const ScalarField& a, const ScalarField& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

int main() {
  std::printf("openmp available: %s, max threads: %d\n",
              kernels::openmp_available() ? "yes" : "no", kernels::max_threads());
  std::printf("%-24s %6s %12s %12s %9s %s\n", "kernel", "n", "serial[ms]",
              "openmp[ms]", "speedup", "bits");

  for (int n : {64, 128, 256}) {
    TorusGrid grid(n, 2.0 * M_PI);
    Rng rng(12345);
    const ScalarField f = random_field(grid, n / 4, rng);
    const ScalarField g = random_field(grid, n / 4, rng);
    const CSHState state = make_compatible_data(
        f, ScalarField(grid, Rep::physical), GaugeField(grid), {0.0, 0.0});
    const Potential v({0.0, 1.0}, 1.0);
    const int reps = n <= 128 ? 20 : 5;

    struct Case {
      const char* name;
      std::function<ScalarField()> run;
    };
    const std::vector<Case> cases = {
        {"fft round trip", [&] { return from_spectral(to_spectral(f)); }},
        {"multiplier <grad>", [&] { return apply_multiplier(f, Multiplier::bessel(1.0)); }},
        {"pointwise |f|^2 g", [&] { return multiply(abs_squared(f), g); }},
        {"dealias", [&] { return dealias(f); }},
        {"rhs reformulated", [&] { return rhs_reformulated(state, v).dphi_t; }},
    };

    for (const auto& c : cases) {
      kernels::set_backend(kernels::Backend::serial);
      const ScalarField ref = c.run();
      const double ts = time_ms(reps, [&] { (void)c.run(); });
      kernels::set_backend(kernels::Backend::openmp);
      const ScalarField par = c.run();
      const double tp = time_ms(reps, [&] { (void)c.run(); });
      std::printf("%-24s %6d %12.4f %12.4f %8.2fx %s\n", c.name, n, ts, tp,
                  ts / tp, bits_equal(ref, par) ? "equal" : "DIFFER");
    }

    // quadrature reduction
    kernels::set_backend(kernels::Backend::serial);
    const double ref_norm = l2_norm(f);
    const double ts = time_ms(reps, [&] { (void)l2_norm(f); });
    kernels::set_backend(kernels::Backend::openmp);
    const double par_norm = l2_norm(f);
    const double tp = time_ms(reps, [&] { (void)l2_norm(f); });
    std::printf("%-24s %6d %12.4f %12.4f %8.2fx %s\n", "reduction l2_norm", n, ts,
                tp, ts / tp, ref_norm == par_norm ? "equal" : "DIFFER");
  }
  kernels::set_backend(kernels::Backend::openmp);
  return 0;
}
