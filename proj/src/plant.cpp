#include "dgfnc/plant.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "dgfnc/errors.hpp"

namespace dgfnc {

Disturbance& Disturbance::add_step(double amplitude, double t_on) {
  steps_.push_back({amplitude, t_on});
  bound_ += std::abs(amplitude);
  return *this;
}

Disturbance& Disturbance::add_sinusoid(double amplitude, double frequency_hz, double phase) {
  waves_.push_back({amplitude, 2.0 * std::numbers::pi * frequency_hz, phase});
  bound_ += std::abs(amplitude);
  return *this;
}

Disturbance& Disturbance::add_noise(double amplitude, double cutoff_hz, std::uint64_t seed,
                                    std::size_t components) {
  if (components == 0 || !(cutoff_hz > 0.0)) throw ContractViolation("noise needs components and a cutoff");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(0.0, cutoff_hz);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double a = amplitude / static_cast<double>(components);
  for (std::size_t i = 0; i < components; ++i) {
    waves_.push_back({a, 2.0 * std::numbers::pi * freq(rng), phase(rng)});
  }
  bound_ += std::abs(amplitude);
  return *this;
}

double Disturbance::operator()(double t) const {
  double d = 0.0;
  for (const auto& s : steps_) {
    if (t >= s.t_on) d += s.amplitude;
  }
  for (const auto& w : waves_) d += w.amplitude * std::sin(w.omega * t + w.phase);
  return d;
}

ScalarMap make_linear_sine_map(std::vector<double> linear, double sine, double input_gain) {
  return [linear = std::move(linear), sine, input_gain](std::span<const double> x, double u) {
    double out = input_gain * u;
    for (std::size_t i = 0; i < linear.size() && i < x.size(); ++i) out -= linear[i] * x[i];
    if (sine != 0.0) out -= sine * std::sin(x[0]);
    return out;
  };
}

StateVector plant_derivative(const NonlinearPlant& plant, double t, std::span<const double> x, double u) {
  if (x.size() != plant.n) throw ContractViolation("plant state has wrong dimension");
  StateVector dx(plant.n);
  for (std::size_t i = 0; i + 1 < plant.n; ++i) dx[i] = x[i + 1];
  double top = plant.f ? plant.f(x, u) : 0.0;
  if (plant.delta_f) top += plant.delta_f(x, u);
  top += plant.disturbance(t);
  dx[plant.n - 1] = top;
  return dx;
}

Eigen::VectorXd robot_forward_dynamics(const RobotJointModel& model, const Eigen::VectorXd& q,
                                       const Eigen::VectorXd& qd, const Eigen::VectorXd& tau) {
  const auto dof = static_cast<Eigen::Index>(model.dof);
  if (q.size() != dof || qd.size() != dof || tau.size() != dof) {
    throw ContractViolation("robot state or torque has wrong dimension");
  }
  const Eigen::MatrixXd m = model.mass(q);
  Eigen::VectorXd rhs = tau;
  if (model.coriolis) rhs -= model.coriolis(q, qd);
  if (model.gravity) rhs -= model.gravity(q);

  const auto describe = [&] {
    std::ostringstream os;
    os << q.transpose();
    return os.str();
  };
  if (m.rows() != dof || m.cols() != dof) throw ContractViolation("mass matrix has wrong shape");
  if (!m.isApprox(m.transpose(), 1e-12)) {
    throw SingularityError("mass matrix is not symmetric at theta = [" + describe() + "]");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw SingularityError("mass matrix is not positive definite at theta = [" + describe() + "]");
  }
  return llt.solve(rhs);
}

RobotJointModel make_surrogate_model(const std::vector<SurrogateJoint>& joints) {
  for (const auto& j : joints) {
    if (!(j.mass > 0.0)) throw ContractViolation("surrogate joint mass must be positive");
  }
  RobotJointModel model;
  model.dof = joints.size();
  Eigen::VectorXd mass(joints.size()), damping(joints.size()), gravity(joints.size());
  for (std::size_t j = 0; j < joints.size(); ++j) {
    mass[j] = joints[j].mass;
    damping[j] = joints[j].damping;
    gravity[j] = joints[j].gravity;
  }
  model.mass = [mass](const Eigen::VectorXd&) -> Eigen::MatrixXd { return mass.asDiagonal(); };
  model.coriolis = [damping](const Eigen::VectorXd&, const Eigen::VectorXd& qd) -> Eigen::VectorXd {
    return damping.cwiseProduct(qd);
  };
  model.gravity = [gravity](const Eigen::VectorXd& q) -> Eigen::VectorXd {
    return gravity.cwiseProduct(q.array().sin().matrix());
  };
  model.q = Eigen::VectorXd::Zero(model.dof);
  model.qd = Eigen::VectorXd::Zero(model.dof);
  return model;
}

void Plant::set_state(StateVector x) {
  if (x.size() != joints() * order()) {
    throw ContractViolation(fmt::format("plant state needs {} entries, got {}", joints() * order(), x.size()));
  }
  state_ = std::move(x);
}

void Plant::integrate_step(double t, std::span<const double> u, double dt, std::size_t step_index) {
  if (!(dt > 0.0)) throw ContractViolation("integration step must be positive");
  auto next = rk4_step([&](double tt, const StateVector& x) { return derivative(tt, x, u); }, t, state_, dt);
  if (!all_finite(next)) throw DivergenceError(step_index, "non-finite plant state");
  state_ = std::move(next);
}

NonlinearPlantAdapter::NonlinearPlantAdapter(NonlinearPlant plant) : plant_(std::move(plant)) {
  if (plant_.n == 0) throw ContractViolation("plant order must be positive");
  if (plant_.state.empty()) plant_.state.assign(plant_.n, 0.0);
  set_state(plant_.state);
}

StateVector NonlinearPlantAdapter::derivative(double t, std::span<const double> x,
                                              std::span<const double> u) const {
  return plant_derivative(plant_, t, x, u[0]);
}

std::vector<double> NonlinearPlantAdapter::nominal_top(std::span<const double> x,
                                                       std::span<const double> u) const {
  return {plant_.f ? plant_.f(x, u[0]) : 0.0};
}

RobotPlant::RobotPlant(RobotJointModel model, std::vector<Disturbance> disturbances)
    : model_(std::move(model)), disturbances_(std::move(disturbances)) {
  if (model_.dof == 0 || !model_.mass) throw ContractViolation("robot model needs dof and a mass matrix");
  disturbances_.resize(model_.dof);
  StateVector x(2 * model_.dof, 0.0);
  for (std::size_t j = 0; j < model_.dof; ++j) {
    if (model_.q.size() == static_cast<Eigen::Index>(model_.dof)) x[2 * j] = model_.q[j];
    if (model_.qd.size() == static_cast<Eigen::Index>(model_.dof)) x[2 * j + 1] = model_.qd[j];
  }
  set_state(std::move(x));
}

Eigen::VectorXd RobotPlant::accelerations(std::span<const double> x, std::span<const double> tau) const {
  const auto dof = static_cast<Eigen::Index>(model_.dof);
  Eigen::VectorXd q(dof), qd(dof), t(dof);
  for (Eigen::Index j = 0; j < dof; ++j) {
    q[j] = x[2 * j];
    qd[j] = x[2 * j + 1];
    t[j] = tau[j];
  }
  return robot_forward_dynamics(model_, q, qd, t);
}

StateVector RobotPlant::derivative(double t, std::span<const double> x, std::span<const double> u) const {
  std::vector<double> tau(u.begin(), u.end());
  for (std::size_t j = 0; j < model_.dof; ++j) tau[j] += disturbances_[j](t);
  const Eigen::VectorXd qdd = accelerations(x, tau);
  StateVector dx(x.size());
  for (std::size_t j = 0; j < model_.dof; ++j) {
    dx[2 * j] = x[2 * j + 1];
    dx[2 * j + 1] = qdd[static_cast<Eigen::Index>(j)];
  }
  return dx;
}

std::vector<double> RobotPlant::nominal_top(std::span<const double> x, std::span<const double> u) const {
  const Eigen::VectorXd qdd = accelerations(x, u);
  return {qdd.data(), qdd.data() + qdd.size()};
}

double RobotPlant::perturbation_bound(std::size_t j) const { return disturbances_.at(j).bound(); }

}  // namespace dgfnc
