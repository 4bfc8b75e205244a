#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dgfnc/integrator.hpp"

namespace dgfnc {

/// Sum of bounded time signals: steps, sinusoids and seeded band-limited
/// noise (a normalized sum of random-phase sinusoids below a cutoff).
class Disturbance {
 public:
  Disturbance() = default;

  Disturbance& add_step(double amplitude, double t_on);
  Disturbance& add_sinusoid(double amplitude, double frequency_hz, double phase = 0.0);
  Disturbance& add_noise(double amplitude, double cutoff_hz, std::uint64_t seed,
                         std::size_t components = 16);

  double operator()(double t) const;
  /// sup_t |d(t)| implied by the component amplitudes.
  double bound() const noexcept { return bound_; }
  bool empty() const noexcept { return steps_.empty() && waves_.empty(); }

 private:
  struct Step {
    double amplitude, t_on;
  };
  struct Wave {
    double amplitude, omega, phase;
  };
  std::vector<Step> steps_;
  std::vector<Wave> waves_;
  double bound_ = 0.0;
};

using ScalarMap = std::function<double(std::span<const double> x, double u)>;

/// n-th order plant x^(n) = f(X, u) + delta_f(X, u) + d(t), X = [x, x', ...].
/// f is the modelled part; f_n = f - h u is what the equivalent control sees.
struct NonlinearPlant {
  std::size_t n = 1;
  ScalarMap f;
  double h = 1.0;
  ScalarMap delta_f;  // empty means zero
  Disturbance disturbance;
  StateVector state;

  double nominal_drift(std::span<const double> x, double u) const { return f(x, u) - h * u; }
};

/// f(X, u) = -sum_i a_i X_i - c sin(X_0) + b u
ScalarMap make_linear_sine_map(std::vector<double> linear, double sine, double input_gain);

StateVector plant_derivative(const NonlinearPlant& plant, double t, std::span<const double> x, double u);
inline StateVector plant_derivative(const NonlinearPlant& plant, double t, double u) {
  return plant_derivative(plant, t, plant.state, u);
}

/// tau = M(q) q'' + V(q, q') + G(q)
struct RobotJointModel {
  std::size_t dof = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd& q)> mass;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& q, const Eigen::VectorXd& qd)> coriolis;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& q)> gravity;
  Eigen::VectorXd q;
  Eigen::VectorXd qd;
};

Eigen::VectorXd robot_forward_dynamics(const RobotJointModel& model, const Eigen::VectorXd& q,
                                       const Eigen::VectorXd& qd, const Eigen::VectorXd& tau);
inline Eigen::VectorXd robot_forward_dynamics(const RobotJointModel& model, const Eigen::VectorXd& tau) {
  return robot_forward_dynamics(model, model.q, model.qd, tau);
}

struct SurrogateJoint {
  double mass = 1.0;
  double damping = 0.2;
  double gravity = 1.0;
};

/// Decoupled joints m_j q'' + b_j q' + g_j sin q = tau_j.
RobotJointModel make_surrogate_model(const std::vector<SurrogateJoint>& joints);

/// Joint-major plant view used by the closed loop: joint j owns state
/// entries [j*order, (j+1)*order) holding x, x', ..., x^(order-1).
class Plant {
 public:
  virtual ~Plant() = default;

  virtual std::size_t joints() const = 0;
  virtual std::size_t order() const = 0;
  virtual StateVector derivative(double t, std::span<const double> x, std::span<const double> u) const = 0;
  /// Top derivative per joint from the modelled dynamics only (no delta_f, no d).
  virtual std::vector<double> nominal_top(std::span<const double> x, std::span<const double> u) const = 0;
  /// Bound on the injected perturbation seen by joint j.
  virtual double perturbation_bound(std::size_t j) const = 0;

  const StateVector& state() const noexcept { return state_; }
  void set_state(StateVector x);

  /// One RK4 step of length dt with u held constant.
  void integrate_step(double t, std::span<const double> u, double dt, std::size_t step_index = 0);

 protected:
  StateVector state_;
};

class NonlinearPlantAdapter final : public Plant {
 public:
  explicit NonlinearPlantAdapter(NonlinearPlant plant);

  std::size_t joints() const override { return 1; }
  std::size_t order() const override { return plant_.n; }
  StateVector derivative(double t, std::span<const double> x, std::span<const double> u) const override;
  std::vector<double> nominal_top(std::span<const double> x, std::span<const double> u) const override;
  double perturbation_bound(std::size_t) const override { return plant_.disturbance.bound(); }

  const NonlinearPlant& model() const noexcept { return plant_; }

 private:
  NonlinearPlant plant_;
};

/// Robot model with an additive torque disturbance per joint.
class RobotPlant final : public Plant {
 public:
  RobotPlant(RobotJointModel model, std::vector<Disturbance> disturbances);

  std::size_t joints() const override { return model_.dof; }
  std::size_t order() const override { return 2; }
  StateVector derivative(double t, std::span<const double> x, std::span<const double> u) const override;
  std::vector<double> nominal_top(std::span<const double> x, std::span<const double> u) const override;
  double perturbation_bound(std::size_t j) const override;

  const RobotJointModel& model() const noexcept { return model_; }

 private:
  Eigen::VectorXd accelerations(std::span<const double> x, std::span<const double> tau) const;

  RobotJointModel model_;
  std::vector<Disturbance> disturbances_;
};

}  // namespace dgfnc
