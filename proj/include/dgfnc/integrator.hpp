#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dgfnc/errors.hpp"

namespace dgfnc {

using StateVector = std::vector<double>;

namespace detail {
inline StateVector axpy(const StateVector& x, double a, const StateVector& k) {
  StateVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
  return out;
}
}  // namespace detail

/// Classical fourth-order Runge-Kutta step for dx/dt = f(t, x).
template <class Deriv>
StateVector rk4_step(Deriv&& f, double t, const StateVector& x, double dt) {
  const StateVector k1 = f(t, x);
  const StateVector k2 = f(t + 0.5 * dt, detail::axpy(x, 0.5 * dt, k1));
  const StateVector k3 = f(t + 0.5 * dt, detail::axpy(x, 0.5 * dt, k2));
  const StateVector k4 = f(t + dt, detail::axpy(x, dt, k3));
  StateVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

inline bool all_finite(const StateVector& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace dgfnc
