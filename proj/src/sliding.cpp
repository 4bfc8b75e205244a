#include "dgfnc/sliding.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dgfnc/errors.hpp"

namespace dgfnc {

void SlidingConfig::validate() const {
  if (k.empty()) throw ContractViolation("sliding.k must have at least one gain");
  if (!(d1 > 0.0)) throw ContractViolation("sliding.D1 must be positive");
  if (h == 0.0 || !std::isfinite(h)) throw ContractViolation("sliding.h must be nonzero");
  if (!(boundary >= 0.0)) throw ContractViolation("sliding.boundary must be >= 0");
}

ErrorTracker::ErrorTracker(std::size_t n, double period) : period_(period), state_(n), prev_(n, 0.0) {
  if (n == 0) throw ContractViolation("error order must be positive");
  if (!(period > 0.0)) throw ContractViolation("error sampling period must be positive");
}

void ErrorTracker::integrate() {
  // Left rectangle: the sample of step k-1 covers [t_{k-1}, t_k).
  if (primed_) state_.integral += state_.derivs[0] * period_;
  primed_ = true;
}

const ErrorState& ErrorTracker::update(std::span<const double> derivs) {
  if (derivs.size() != state_.derivs.size()) throw ContractViolation("error derivative count mismatch");
  integrate();
  std::copy(derivs.begin(), derivs.end(), state_.derivs.begin());
  return state_;
}

const ErrorState& ErrorTracker::update_estimated(double e) {
  const bool first = !primed_;
  integrate();
  prev_ = state_.derivs;
  state_.derivs[0] = e;
  for (std::size_t i = 1; i < state_.derivs.size(); ++i) {
    state_.derivs[i] = first ? 0.0 : (state_.derivs[i - 1] - prev_[i - 1]) / period_;
  }
  return state_;
}

double sliding_value(const ErrorState& err, const SlidingConfig& cfg) {
  const std::size_t n = cfg.n();
  if (err.derivs.size() != n) {
    throw ContractViolation(fmt::format("error state has order {}, surface expects {}", err.derivs.size(), n));
  }
  double s = err.derivs[n - 1];
  for (std::size_t i = 1; i < n; ++i) s += cfg.k[i - 1] * err.derivs[n - 1 - i];
  s += cfg.k[n - 1] * err.integral;
  return s;
}

double hitting_control(double s, const SlidingConfig& cfg) {
  if (cfg.boundary > 0.0 && std::abs(s) <= cfg.boundary) return 0.0;
  if (s > 0.0) return cfg.d1;
  if (s < 0.0) return -cfg.d1;
  return 0.0;
}

double equivalent_control(const ErrorState& err, double xc_top_deriv, double fn_value,
                          const SlidingConfig& cfg) {
  if (cfg.h == 0.0) throw ContractViolation("equivalent control needs a nonzero input gain h");
  const std::size_t n = cfg.n();
  if (err.derivs.size() != n) throw ContractViolation("error state order mismatch");
  double bracket = -fn_value + xc_top_deriv;
  for (std::size_t i = 1; i <= n; ++i) bracket += cfg.k[i - 1] * err.derivs[n - i];
  return bracket / cfg.h;
}

LyapunovSample lyapunov_check(double s, double s_prev, double dt, double tol_scale) {
  if (!(dt > 0.0)) throw ContractViolation("Lyapunov check needs dt > 0");
  LyapunovSample out;
  out.v = 0.5 * s * s;
  out.v_dot = (out.v - 0.5 * s_prev * s_prev) / dt;
  out.ok = out.v_dot <= tol_scale * std::max(1.0, out.v);
  return out;
}

}  // namespace dgfnc
