#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace dgfnc {

using Vec3 = std::array<double, 3>;

enum class ToolPath { circle, helix };

/// Tool-space reference. circle: center + r (cos wt, sin wt, 0);
/// helix adds z = center_z + pitch * w t / (2 pi).
struct ToolTrajectory {
  ToolPath path = ToolPath::circle;
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 0.05;
  double angular_rate = 1.0;  // rad/s
  double pitch = 0.0;         // m per revolution, helix only
  double duration = 10.0;

  void validate() const;
  double period() const;
};

Vec3 sample_tool(const ToolTrajectory& traj, double t);

/// [p, p', ..., p^(order)] in closed form.
std::vector<Vec3> reference_derivatives(const ToolTrajectory& traj, double t, std::size_t order);

/// Pose -> joint map. Implementations must also map tool derivatives to
/// joint derivatives; the base version does so numerically up to order 2.
class InverseKinematics {
 public:
  virtual ~InverseKinematics() = default;
  virtual std::size_t dof() const = 0;
  virtual std::vector<double> joint_position(const Vec3& pose) const = 0;
  /// Returns out[j][k] = d^k q_j / dt^k for k = 0..tool.size()-1.
  virtual std::vector<std::vector<double>> joint_derivatives(const std::vector<Vec3>& tool) const;
};

/// q = A p + c inside an axis-aligned workspace box.
class AffineSurrogateIk final : public InverseKinematics {
 public:
  AffineSurrogateIk(Eigen::MatrixXd a, Eigen::VectorXd c);
  AffineSurrogateIk(Eigen::MatrixXd a, Eigen::VectorXd c, Vec3 lo, Vec3 hi);

  std::size_t dof() const override { return static_cast<std::size_t>(a_.rows()); }
  std::vector<double> joint_position(const Vec3& pose) const override;
  std::vector<std::vector<double>> joint_derivatives(const std::vector<Vec3>& tool) const override;

 private:
  void check_workspace(const Vec3& pose) const;

  Eigen::MatrixXd a_;
  Eigen::VectorXd c_;
  Vec3 lo_{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  Vec3 hi_{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
};

std::vector<double> tool_to_joint(const Vec3& pose, const InverseKinematics& ik);

/// Joint positions and analytic derivatives: derivs[j][k] = q_j^(k), k = 0..order.
struct JointReference {
  std::vector<double> q_c;
  std::vector<std::vector<double>> derivs;
};

/// offset + A sin(w t + phase) per joint.
struct JointSinusoid {
  std::vector<double> amplitude;
  std::vector<double> offset;
  std::vector<double> phase;
  double frequency_hz = 0.5;
};

/// initial before t_step, initial + amplitude after.
struct JointStep {
  std::vector<double> initial;
  std::vector<double> amplitude;
  double t_step = 0.0;
};

struct ToolReference {
  ToolTrajectory trajectory;
  std::shared_ptr<const InverseKinematics> ik;
};

using ReferenceSource = std::variant<ToolReference, JointSinusoid, JointStep>;

std::size_t reference_dof(const ReferenceSource& source);
JointReference sample_reference(const ReferenceSource& source, double t, std::size_t order);

}  // namespace dgfnc
