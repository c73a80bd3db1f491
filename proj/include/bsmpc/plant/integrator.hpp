#pragma once

#include "bsmpc/common.hpp"

namespace bsmpc::plant {

/// One classical fourth-order Runge-Kutta step of size `dt` with the input
/// held constant (zero-order hold).
template <typename Rhs>
StateVector rk4_step(const Rhs& rhs, const StateVector& x, const InputVector& u, double dt) {
  const StateVector k1 = rhs(x, u);
  const StateVector k2 = rhs(StateVector(x + 0.5 * dt * k1), u);
  const StateVector k3 = rhs(StateVector(x + 0.5 * dt * k2), u);
  const StateVector k4 = rhs(StateVector(x + dt * k3), u);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// `substeps` RK4 steps covering `span` seconds.
template <typename Rhs>
StateVector rk4_integrate(const Rhs& rhs, StateVector x, const InputVector& u, double span,
                          int substeps) {
  const double dt = span / substeps;
  for (int i = 0; i < substeps; ++i) x = rk4_step(rhs, x, u, dt);
  return x;
}

}  // namespace bsmpc::plant
