#include "dgfnc/trajectory.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "dgfnc/errors.hpp"

namespace dgfnc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// d^k/dt^k of sin(w t + phase)
double sin_derivative(double omega, double t, double phase, std::size_t k) {
  return std::pow(omega, static_cast<double>(k)) *
         std::sin(omega * t + phase + static_cast<double>(k) * std::numbers::pi / 2.0);
}

}  // namespace

void ToolTrajectory::validate() const {
  if (!(radius > 0.0)) throw ContractViolation("trajectory radius must be positive");
  if (angular_rate == 0.0 || !std::isfinite(angular_rate)) {
    throw ContractViolation("trajectory angular_rate must be nonzero");
  }
  if (!(duration > 0.0)) throw ContractViolation("trajectory duration must be positive");
}

double ToolTrajectory::period() const { return kTwoPi / std::abs(angular_rate); }

Vec3 sample_tool(const ToolTrajectory& traj, double t) {
  traj.validate();
  if (!(t >= 0.0 && t <= traj.duration)) {
    throw ContractViolation(fmt::format("t = {} outside [0, {}]", t, traj.duration));
  }
  const double phi = traj.angular_rate * t;
  Vec3 p{traj.center[0] + traj.radius * std::cos(phi), traj.center[1] + traj.radius * std::sin(phi),
         traj.center[2]};
  if (traj.path == ToolPath::helix) p[2] += traj.pitch * phi / kTwoPi;
  return p;
}

std::vector<Vec3> reference_derivatives(const ToolTrajectory& traj, double t, std::size_t order) {
  std::vector<Vec3> out;
  out.reserve(order + 1);
  out.push_back(sample_tool(traj, t));
  const double w = traj.angular_rate;
  for (std::size_t k = 1; k <= order; ++k) {
    const double scale = traj.radius * std::pow(w, static_cast<double>(k));
    const double shift = static_cast<double>(k) * std::numbers::pi / 2.0;
    Vec3 d{scale * std::cos(w * t + shift), scale * std::sin(w * t + shift), 0.0};
    if (traj.path == ToolPath::helix && k == 1) d[2] = traj.pitch * w / kTwoPi;
    out.push_back(d);
  }
  return out;
}

std::vector<std::vector<double>> InverseKinematics::joint_derivatives(const std::vector<Vec3>& tool) const {
  if (tool.empty()) throw ContractViolation("need at least the tool position");
  if (tool.size() > 3) throw ContractViolation("numeric IK derivatives support order <= 2");
  const std::size_t order = tool.size() - 1;
  std::vector<std::vector<double>> out(dof(), std::vector<double>(tool.size(), 0.0));
  const auto q0 = joint_position(tool[0]);
  for (std::size_t j = 0; j < dof(); ++j) out[j][0] = q0[j];
  if (order == 0) return out;

  // Reconstruct p(t +- h) from the local Taylor expansion and difference q.
  const double h = 1e-4;
  const auto shifted = [&](double sign) {
    Vec3 p = tool[0];
    for (std::size_t i = 0; i < 3; ++i) {
      p[i] += sign * h * tool[1][i];
      if (order >= 2) p[i] += 0.5 * h * h * tool[2][i];
    }
    return joint_position(p);
  };
  const auto qp = shifted(1.0);
  const auto qm = shifted(-1.0);
  for (std::size_t j = 0; j < dof(); ++j) {
    out[j][1] = (qp[j] - qm[j]) / (2.0 * h);
    if (order >= 2) out[j][2] = (qp[j] - 2.0 * q0[j] + qm[j]) / (h * h);
  }
  return out;
}

AffineSurrogateIk::AffineSurrogateIk(Eigen::MatrixXd a, Eigen::VectorXd c) : a_(std::move(a)), c_(std::move(c)) {
  if (a_.cols() != 3 || a_.rows() != c_.size() || a_.rows() == 0) {
    throw ContractViolation("affine IK needs a dof x 3 matrix and a dof offset");
  }
}

AffineSurrogateIk::AffineSurrogateIk(Eigen::MatrixXd a, Eigen::VectorXd c, Vec3 lo, Vec3 hi)
    : AffineSurrogateIk(std::move(a), std::move(c)) {
  lo_ = lo;
  hi_ = hi;
}

void AffineSurrogateIk::check_workspace(const Vec3& pose) const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(pose[i] >= lo_[i] && pose[i] <= hi_[i])) {
      throw WorkspaceError(fmt::format("pose ({}, {}, {}) leaves the workspace on axis {}", pose[0], pose[1],
                                       pose[2], i));
    }
  }
}

std::vector<double> AffineSurrogateIk::joint_position(const Vec3& pose) const {
  check_workspace(pose);
  const Eigen::Vector3d p(pose[0], pose[1], pose[2]);
  const Eigen::VectorXd q = a_ * p + c_;
  return {q.data(), q.data() + q.size()};
}

std::vector<std::vector<double>> AffineSurrogateIk::joint_derivatives(const std::vector<Vec3>& tool) const {
  if (tool.empty()) throw ContractViolation("need at least the tool position");
  std::vector<std::vector<double>> out(dof(), std::vector<double>(tool.size(), 0.0));
  const auto q0 = joint_position(tool[0]);
  for (std::size_t j = 0; j < dof(); ++j) out[j][0] = q0[j];
  for (std::size_t k = 1; k < tool.size(); ++k) {
    const Eigen::VectorXd qk = a_ * Eigen::Vector3d(tool[k][0], tool[k][1], tool[k][2]);
    for (std::size_t j = 0; j < dof(); ++j) out[j][k] = qk[static_cast<Eigen::Index>(j)];
  }
  return out;
}

std::vector<double> tool_to_joint(const Vec3& pose, const InverseKinematics& ik) {
  return ik.joint_position(pose);
}

std::size_t reference_dof(const ReferenceSource& source) {
  struct Visitor {
    std::size_t operator()(const ToolReference& r) const { return r.ik ? r.ik->dof() : 0; }
    std::size_t operator()(const JointSinusoid& r) const { return r.amplitude.size(); }
    std::size_t operator()(const JointStep& r) const { return r.initial.size(); }
  };
  return std::visit(Visitor{}, source);
}

JointReference sample_reference(const ReferenceSource& source, double t, std::size_t order) {
  JointReference ref;
  const std::size_t dof = reference_dof(source);
  ref.derivs.assign(dof, std::vector<double>(order + 1, 0.0));

  if (const auto* tool = std::get_if<ToolReference>(&source)) {
    if (!tool->ik) throw ContractViolation("tool reference needs an IK hook");
    ref.derivs = tool->ik->joint_derivatives(reference_derivatives(tool->trajectory, t, order));
  } else if (const auto* sine = std::get_if<JointSinusoid>(&source)) {
    const double w = kTwoPi * sine->frequency_hz;
    for (std::size_t j = 0; j < dof; ++j) {
      const double phase = j < sine->phase.size() ? sine->phase[j] : 0.0;
      const double offset = j < sine->offset.size() ? sine->offset[j] : 0.0;
      ref.derivs[j][0] = offset + sine->amplitude[j] * std::sin(w * t + phase);
      for (std::size_t k = 1; k <= order; ++k) {
        ref.derivs[j][k] = sine->amplitude[j] * sin_derivative(w, t, phase, k);
      }
    }
  } else {
    const auto& step = std::get<JointStep>(source);
    for (std::size_t j = 0; j < dof; ++j) {
      const double amp = j < step.amplitude.size() ? step.amplitude[j] : 0.0;
      ref.derivs[j][0] = step.initial[j] + (t >= step.t_step ? amp : 0.0);
    }
  }

  ref.q_c.reserve(dof);
  for (const auto& d : ref.derivs) ref.q_c.push_back(d[0]);
  return ref;
}

}  // namespace dgfnc
