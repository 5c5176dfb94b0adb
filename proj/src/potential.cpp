#include "csh/potential.hpp"

#include <cmath>

#include "csh/errors.hpp"
#include "csh/kernels.hpp"

namespace csh {

Potential::Potential(std::vector<double> coeffs, double alpha)
    : c_(std::move(coeffs)), alpha_(alpha) {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  if (alpha_ < 0.0) throw UsageError("potential alpha must be >= 0");
}

bool Potential::is_zero() const { return c_.empty(); }

double Potential::value(double r) const {
  // Horner on V(r)/r, then one more multiply
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + *it;
  return acc * r;
}

double Potential::prime(double r) const {
  double acc = 0.0;
  for (size_t k = c_.size(); k >= 1; --k) acc = acc * r + static_cast<double>(k) * c_[k - 1];
  return acc;
}

namespace {
ScalarField eval_poly_field(const Potential& v, const ScalarField& r_field, bool prime) {
  const ScalarField r = as_physical(r_field);
  const int n = r.grid().n();
  ScalarField out(r.grid(), Rep::physical);
  // validate nonnegativity up front; negative r is a caller bug
  const double bad = kernels::sum_over_lines(n, [&](int iy) {
    const cplx* row = r.data() + static_cast<size_t>(iy) * n;
    double cnt = 0.0;
    for (int ix = 0; ix < n; ++ix)
      if (row[ix].real() < 0.0 || row[ix].imag() != 0.0) cnt += 1.0;
    return cnt;
  });
  if (bad != 0.0)
    throw UsageError("potential evaluation expects a nonnegative real field");
  kernels::for_each_line(n, [&](int iy) {
    const size_t off = static_cast<size_t>(iy) * n;
    for (int ix = 0; ix < n; ++ix) {
      const double rv = r[off + ix].real();
      out[off + ix] = prime ? v.prime(rv) : v.value(rv);
    }
  });
  return out;
}
}  // namespace

ScalarField eval_potential(const Potential& v, const ScalarField& r_field) {
  return eval_poly_field(v, r_field, false);
}

ScalarField eval_potential_prime(const Potential& v, const ScalarField& r_field) {
  return eval_poly_field(v, r_field, true);
}

bool check_sign_condition(const Potential& v, double alpha, double r_max,
                          int samples) {
  if (alpha < 0.0 || r_max <= 0.0 || samples < 2)
    throw UsageError("check_sign_condition: need alpha >= 0, r_max > 0, samples >= 2");
  // W(r) = V(r) + alpha^2 r must be >= 0 on [0, r_max] ...
  for (int i = 0; i < samples; ++i) {
    const double r = r_max * i / (samples - 1);
    if (v.value(r) + alpha * alpha * r < 0.0) return false;
  }
  // ... and must not run off to -infinity: inspect the leading coefficient of W.
  std::vector<double> w = v.coeffs();
  if (w.empty()) w.push_back(0.0);
  w[0] += alpha * alpha;
  while (!w.empty() && w.back() == 0.0) w.pop_back();
  if (w.empty()) return true;  // W identically zero
  return w.back() > 0.0;
}

}  // namespace csh
