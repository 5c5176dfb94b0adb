#pragma once

#include <vector>

#include "csh/field.hpp"

namespace csh {

// Polynomial Higgs potential V(r) = sum_{k>=1} c_k r^k acting on r = |phi|^2.
// No constant term, so V(0) = 0. alpha is the sign-condition parameter of the
// global-bound machinery: the flow admits the Gronwall envelope whenever
// V(r) >= -alpha^2 r for all r >= 0.
class Potential {
 public:
  Potential() = default;  // V identically 0
  Potential(std::vector<double> coeffs, double alpha);

  const std::vector<double>& coeffs() const { return c_; }
  double alpha() const { return alpha_; }
  bool is_zero() const;

  double value(double r) const;   // V(r)
  double prime(double r) const;   // V'(r)

 private:
  std::vector<double> c_;  // c_[k-1] multiplies r^k
  double alpha_ = 1.0;
};

// Pointwise evaluation on a nonnegative real field (r = |phi|^2 samples).
ScalarField eval_potential(const Potential& v, const ScalarField& r_field);
ScalarField eval_potential_prime(const Potential& v, const ScalarField& r_field);

// Dense sampling of W(r) = V(r) + alpha^2 r on [0, r_max] plus a leading-
// coefficient check so the verdict also covers the tail beyond r_max.
bool check_sign_condition(const Potential& v, double alpha, double r_max,
                          int samples);

}  // namespace csh
