#include "csh/field.hpp"

#include <algorithm>
#include <cmath>

#include "csh/errors.hpp"
#include "csh/kernels.hpp"

namespace csh {

ScalarField::ScalarField(TorusGrid grid, Rep rep, std::vector<cplx> values)
    : grid_(std::move(grid)), rep_(rep), v_(std::move(values)) {
  if (v_.size() != static_cast<size_t>(grid_.size()))
    throw UsageError("field size does not match grid");
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid() != b.grid()) throw UsageError("fields live on different grids");
}

// -- multiplier symbols ---------------------------------------------------

Multiplier Multiplier::partial(int axis) {
  if (axis != 0 && axis != 1) throw UsageError("axis must be 0 or 1");
  return Multiplier(Kind::partial, axis, 0.0, true);
}
Multiplier Multiplier::abs_grad(double alpha) {
  return Multiplier(Kind::abs_grad, 0, alpha, false);
}
Multiplier Multiplier::bessel(double alpha) {
  return Multiplier(Kind::bessel, 0, alpha, false);
}
Multiplier Multiplier::inv_lap_partial(int axis) {
  if (axis != 0 && axis != 1) throw UsageError("axis must be 0 or 1");
  return Multiplier(Kind::inv_lap_partial, axis, 0.0, true);
}
Multiplier Multiplier::inv_neg_lap() {
  return Multiplier(Kind::inv_neg_lap, 0, 0.0, false);
}
Multiplier Multiplier::laplacian() {
  return Multiplier(Kind::laplacian, 0, 0.0, false);
}

cplx Multiplier::symbol(double kx, double ky) const {
  const double k2 = kx * kx + ky * ky;
  switch (kind_) {
    case Kind::partial:
      return cplx(0.0, axis_ == 0 ? kx : ky);
    case Kind::abs_grad:
      // |k|^a with the k = 0 value pinned to 0 for a != 0 (never a fault)
      if (k2 == 0.0) return alpha_ == 0.0 ? 1.0 : 0.0;
      return std::pow(k2, 0.5 * alpha_);
    case Kind::bessel:
      return std::pow(1.0 + k2, 0.5 * alpha_);
    case Kind::inv_lap_partial:
      if (k2 == 0.0) return 0.0;
      return cplx(0.0, -(axis_ == 0 ? kx : ky) / k2);
    case Kind::inv_neg_lap:
      return k2 == 0.0 ? 0.0 : 1.0 / k2;
    case Kind::laplacian:
      return -k2;
  }
  return 0.0;
}

// -- transforms ------------------------------------------------------------

ScalarField to_spectral(const ScalarField& f) {
  if (f.rep() != Rep::physical)
    throw UsageError("to_spectral expects a physical-space field");
  ScalarField out = f;
  out.grid().fft_forward(out.data());
  out.set_rep(Rep::spectral);
  return out;
}

ScalarField from_spectral(const ScalarField& f) {
  if (f.rep() != Rep::spectral)
    throw UsageError("from_spectral expects a spectral-space field");
  ScalarField out = f;
  out.grid().fft_backward(out.data());
  out.set_rep(Rep::physical);
  return out;
}

ScalarField as_spectral(const ScalarField& f) {
  return f.rep() == Rep::spectral ? f : to_spectral(f);
}

ScalarField as_physical(const ScalarField& f) {
  return f.rep() == Rep::physical ? f : from_spectral(f);
}

// -- multiplier application -------------------------------------------------

ScalarField apply_multiplier(const ScalarField& f, const Multiplier& m) {
  const Rep rep_in = f.rep();
  ScalarField spec = as_spectral(f);
  const TorusGrid& g = spec.grid();
  const int n = g.n();
  kernels::for_each_line(n, [&](int iy) {
    const double ky = g.wavenumber(iy);
    const bool ny_y = g.is_nyquist(iy);
    cplx* row = spec.data() + static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) {
      if (m.odd() && (ny_y || g.is_nyquist(ix))) {
        row[ix] = 0.0;
      } else {
        row[ix] *= m.symbol(g.wavenumber(ix), ky);
      }
    }
  });
  return rep_in == Rep::physical ? from_spectral(spec) : spec;
}

ScalarField derivative_real(const ScalarField& f, int axis) {
  const ScalarField d = apply_multiplier(as_spectral(f), Multiplier::partial(axis));
  return real_part(from_spectral(d));
}

// -- Helmholtz ---------------------------------------------------------------

HelmholtzParts helmholtz_decompose(const GaugeField& a) {
  const TorusGrid& g = a.grid();
  const int n = g.n();
  ScalarField ax = as_spectral(a.x);
  ScalarField ay = as_spectral(a.y);
  GaugeField df(g, Rep::spectral);
  GaugeField cf(g, Rep::spectral);
  const std::array<double, 2> mn = {ax[0].real(), ay[0].real()};

  // Longitudinal projection k (k.a)/|k|^2 per mode; the k = 0 mode goes to
  // the mean slot, the rest of a to df by complement. The projector matrix is
  // real and even, so Hermitian symmetry (reality) survives the Nyquist line.
  kernels::for_each_line(n, [&](int iy) {
    const double ky = g.wavenumber(iy);
    for (int ix = 0; ix < n; ++ix) {
      const size_t i = static_cast<size_t>(iy) * n + ix;
      const double kx = g.wavenumber(ix);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) {
        cf.x[i] = cf.y[i] = df.x[i] = df.y[i] = 0.0;
        continue;
      }
      const cplx kdot = (kx * ax[i] + ky * ay[i]) / k2;
      cf.x[i] = kx * kdot;
      cf.y[i] = ky * kdot;
      df.x[i] = ax[i] - cf.x[i];
      df.y[i] = ay[i] - cf.y[i];
    }
  });
  GaugeField df_phys(real_part(from_spectral(df.x)), real_part(from_spectral(df.y)));
  GaugeField cf_phys(real_part(from_spectral(cf.x)), real_part(from_spectral(cf.y)));
  return HelmholtzParts{std::move(df_phys), std::move(cf_phys), mn};
}

// -- dealiasing ---------------------------------------------------------------

bool within_dealias_band(const TorusGrid& g, int i1, int i2) {
  const double cutoff = g.n() / 3.0;
  const int m1 = std::abs(g.mode(i1));
  const int m2 = std::abs(g.mode(i2));
  return std::max(m1, m2) <= cutoff;
}

namespace {
ScalarField dealias_impl(const ScalarField& f, bool force_real) {
  const Rep rep_in = f.rep();
  ScalarField spec = as_spectral(f);
  const TorusGrid& g = spec.grid();
  const int n = g.n();
  const double cutoff = n / 3.0;
  kernels::for_each_line(n, [&](int iy) {
    const int m2 = std::abs(g.mode(iy));
    cplx* row = spec.data() + static_cast<size_t>(iy) * n;
    if (m2 > cutoff) {
      std::fill(row, row + n, cplx(0.0));
      return;
    }
    for (int ix = 0; ix < n; ++ix)
      if (std::abs(g.mode(ix)) > cutoff) row[ix] = 0.0;
  });
  if (rep_in == Rep::spectral && !force_real) return spec;
  ScalarField phys = from_spectral(spec);
  if (force_real) phys = real_part(phys);
  if (rep_in == Rep::spectral) return to_spectral(phys);
  return phys;
}
}  // namespace

ScalarField dealias(const ScalarField& f) { return dealias_impl(f, false); }
ScalarField dealias_real(const ScalarField& f) { return dealias_impl(f, true); }

GaugeField dealias_real(const GaugeField& a) {
  return GaugeField(dealias_real(a.x), dealias_real(a.y));
}

// -- norms ---------------------------------------------------------------------

double sobolev_norm(const ScalarField& f, double s, bool homogeneous) {
  ScalarField spec = as_spectral(f);
  const TorusGrid& g = spec.grid();
  const int n = g.n();
  const double sum = kernels::sum_over_lines(n, [&](int iy) {
    const double ky = g.wavenumber(iy);
    const cplx* row = spec.data() + static_cast<size_t>(iy) * n;
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      const double kx = g.wavenumber(ix);
      const double k2 = kx * kx + ky * ky;
      double w;
      if (homogeneous) {
        if (k2 == 0.0) continue;  // convention: no k = 0 contribution
        w = std::pow(k2, s);
      } else {
        w = std::pow(1.0 + k2, s);
      }
      acc += w * std::norm(row[ix]);
    }
    return acc;
  });
  return g.length() * std::sqrt(sum);
}

double l2_norm(const ScalarField& f) {
  const ScalarField& a = f;
  if (a.rep() == Rep::spectral) return sobolev_norm(a, 0.0, false);
  const TorusGrid& g = a.grid();
  const int n = g.n();
  const double sum = kernels::sum_over_lines(n, [&](int iy) {
    const cplx* row = a.data() + static_cast<size_t>(iy) * n;
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) acc += std::norm(row[ix]);
    return acc;
  });
  return std::sqrt(sum * g.cell_area());
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p)) return sup_norm(f);
  if (p < 1.0) throw UsageError("lp_norm needs p >= 1");
  const ScalarField a = as_physical(f);
  const TorusGrid& g = a.grid();
  const int n = g.n();
  const double sum = kernels::sum_over_lines(n, [&](int iy) {
    const cplx* row = a.data() + static_cast<size_t>(iy) * n;
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) acc += std::pow(std::abs(row[ix]), p);
    return acc;
  });
  return std::pow(sum * g.cell_area(), 1.0 / p);
}

double sup_norm(const ScalarField& f) {
  const ScalarField a = as_physical(f);
  const int n = a.grid().n();
  return kernels::max_over_lines(n, [&](int iy) {
    const cplx* row = a.data() + static_cast<size_t>(iy) * n;
    double m = 0.0;
    for (int ix = 0; ix < n; ++ix) m = std::max(m, std::abs(row[ix]));
    return m;
  });
}

cplx integral(const ScalarField& f) {
  const ScalarField a = as_physical(f);
  const TorusGrid& g = a.grid();
  const int n = g.n();
  const cplx sum = kernels::csum_over_lines(n, [&](int iy) {
    const cplx* row = a.data() + static_cast<size_t>(iy) * n;
    cplx acc{0.0, 0.0};
    for (int ix = 0; ix < n; ++ix) acc += row[ix];
    return acc;
  });
  return sum * g.cell_area();
}

cplx mean(const ScalarField& f) {
  return integral(f) / (f.grid().length() * f.grid().length());
}

cplx inner_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  const ScalarField pa = as_physical(a);
  const ScalarField pb = as_physical(b);
  const TorusGrid& g = pa.grid();
  const int n = g.n();
  const cplx sum = kernels::csum_over_lines(n, [&](int iy) {
    const cplx* ra = pa.data() + static_cast<size_t>(iy) * n;
    const cplx* rb = pb.data() + static_cast<size_t>(iy) * n;
    cplx acc{0.0, 0.0};
    for (int ix = 0; ix < n; ++ix) acc += std::conj(ra[ix]) * rb[ix];
    return acc;
  });
  return sum * g.cell_area();
}

// -- pointwise algebra ----------------------------------------------------------

namespace {
template <class F>
ScalarField map2(const ScalarField& a, const ScalarField& b, F&& op) {
  require_same_grid(a, b);
  if (a.rep() != b.rep()) throw UsageError("representation mismatch in pointwise op");
  ScalarField out(a.grid(), a.rep());
  const int n = a.grid().n();
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix)
      out[off + ix] = op(a[off + ix], b[off + ix]);
  });
  return out;
}

template <class F>
ScalarField map1(const ScalarField& a, F&& op) {
  ScalarField out(a.grid(), a.rep());
  const int n = a.grid().n();
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) out[off + ix] = op(a[off + ix]);
  });
  return out;
}
}  // namespace

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  return map2(a, b, [](cplx x, cplx y) { return x * y; });
}
ScalarField conj_multiply(const ScalarField& a, const ScalarField& b) {
  return map2(a, b, [](cplx x, cplx y) { return std::conj(x) * y; });
}
ScalarField add(const ScalarField& a, const ScalarField& b) {
  return map2(a, b, [](cplx x, cplx y) { return x + y; });
}
ScalarField subtract(const ScalarField& a, const ScalarField& b) {
  return map2(a, b, [](cplx x, cplx y) { return x - y; });
}
ScalarField scale(const ScalarField& a, cplx s) {
  return map1(a, [s](cplx x) { return s * x; });
}
void axpy(ScalarField& y, cplx alpha, const ScalarField& x) {
  require_same_grid(y, x);
  const int n = y.grid().n();
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) y[off + ix] += alpha * x[off + ix];
  });
}
ScalarField real_part(const ScalarField& a) {
  return map1(a, [](cplx x) { return cplx(x.real(), 0.0); });
}
ScalarField imag_part(const ScalarField& a) {
  return map1(a, [](cplx x) { return cplx(x.imag(), 0.0); });
}
ScalarField conj_field(const ScalarField& a) {
  return map1(a, [](cplx x) { return std::conj(x); });
}
ScalarField abs_squared(const ScalarField& a) {
  return map1(a, [](cplx x) { return cplx(std::norm(x), 0.0); });
}
ScalarField add_constant(const ScalarField& a, cplx c) {
  return map1(a, [c](cplx x) { return x + c; });
}

bool all_finite(const ScalarField& a) {
  const int n = a.grid().n();
  const double bad = kernels::sum_over_lines(n, [&](int iy) {
    const cplx* row = a.data() + static_cast<size_t>(iy) * n;
    double cnt = 0.0;
    for (int ix = 0; ix < n; ++ix)
      if (!std::isfinite(row[ix].real()) || !std::isfinite(row[ix].imag())) cnt += 1.0;
    return cnt;
  });
  return bad == 0.0;
}

double sup_norm_difference(const ScalarField& a, const ScalarField& b) {
  return sup_norm(subtract(as_physical(a), as_physical(b)));
}

double l2_norm_difference(const ScalarField& a, const ScalarField& b) {
  return l2_norm(subtract(as_physical(a), as_physical(b)));
}

// -- gauge-field helpers -----------------------------------------------------------

GaugeField add(const GaugeField& a, const GaugeField& b) {
  return GaugeField(add(a.x, b.x), add(a.y, b.y));
}
GaugeField subtract(const GaugeField& a, const GaugeField& b) {
  return GaugeField(subtract(a.x, b.x), subtract(a.y, b.y));
}
GaugeField scale(const GaugeField& a, double s) {
  return GaugeField(scale(a.x, s), scale(a.y, s));
}

ScalarField curl(const GaugeField& a) {
  ScalarField d1ay = apply_multiplier(as_spectral(a.y), Multiplier::partial(0));
  ScalarField d2ax = apply_multiplier(as_spectral(a.x), Multiplier::partial(1));
  return real_part(from_spectral(subtract(d1ay, d2ax)));
}

ScalarField divergence(const GaugeField& a) {
  ScalarField d1ax = apply_multiplier(as_spectral(a.x), Multiplier::partial(0));
  ScalarField d2ay = apply_multiplier(as_spectral(a.y), Multiplier::partial(1));
  return real_part(from_spectral(add(d1ax, d2ay)));
}

std::array<double, 2> field_mean(const GaugeField& a) {
  return {mean(a.x).real(), mean(a.y).real()};
}

}  // namespace csh
