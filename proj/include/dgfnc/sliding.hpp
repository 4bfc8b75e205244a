#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dgfnc {

struct SlidingConfig {
  std::vector<double> k;  // k_1 .. k_n; k_n weights the error integral
  double d1 = 1.0;        // hitting gain
  double h = 1.0;         // nominal input gain
  double boundary = 0.0;  // |s| <= boundary suppresses the hitting term

  std::size_t n() const noexcept { return k.size(); }
  void validate() const;
};

/// Error e, its derivatives up to order n-1, and the running integral.
struct ErrorState {
  std::vector<double> derivs;
  double integral = 0.0;

  explicit ErrorState(std::size_t n = 0) : derivs(n, 0.0) {}
};

/// Sampled-error bookkeeping for one joint: rectangle-rule integral and,
/// in estimated mode, backward-difference derivatives.
class ErrorTracker {
 public:
  ErrorTracker(std::size_t n, double period);

  /// Exact derivatives supplied by the caller.
  const ErrorState& update(std::span<const double> derivs);
  /// Only e is measured; higher orders are backward differences.
  const ErrorState& update_estimated(double e);

  const ErrorState& state() const noexcept { return state_; }

 private:
  void integrate();

  double period_;
  bool primed_ = false;
  ErrorState state_;
  std::vector<double> prev_;  // previous derivative estimates (estimated mode)
};

double sliding_value(const ErrorState& err, const SlidingConfig& cfg);

double hitting_control(double s, const SlidingConfig& cfg);

/// u_E = (-f_n + x_c^(n) + k_1 e^(n-1) + ... + k_n e) / h
double equivalent_control(const ErrorState& err, double xc_top_deriv, double fn_value,
                          const SlidingConfig& cfg);

struct LyapunovSample {
  double v = 0.0;
  double v_dot = 0.0;
  bool ok = true;
};

/// V = s^2 / 2, backward-difference V rate, and whether the rate stays
/// below tol_scale * max(1, V).
LyapunovSample lyapunov_check(double s, double s_prev, double dt, double tol_scale = 1e-9);

}  // namespace dgfnc
