#pragma once

#include "csh/state.hpp"

namespace csh {

// Residual gauge freedom in temporal gauge: a time-independent real function
// chi. (A time-dependent chi would regenerate A_0.) Only grad chi enters the
// transformation, so the mean of chi is irrelevant.
struct GaugeFunction {
  ScalarField chi;  // real-valued, physical
};

// phi -> e^{i chi} phi, phi_t -> e^{i chi} phi_t, A -> A + grad chi.
// grad chi is curl-free and mean-free, so the divergence-free part and the
// k = 0 mode of A are untouched; only the curl-free block shifts.
CSHState apply_gauge(const CSHState& state, const GaugeFunction& chi);

// Coulomb-type fixing: chi = (-Lap)^-1 div A, which cancels the mean-free
// curl-free part of A. On the torus the k = 0 mode of A cannot be gauged
// away by any periodic chi and is left alone.
GaugeFunction coulomb_chi(const GaugeField& a);

}  // namespace csh
