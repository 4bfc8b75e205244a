#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgfnc/adapt.hpp"
#include "dgfnc/growth.hpp"
#include "dgfnc/plant.hpp"
#include "dgfnc/sliding.hpp"
#include "dgfnc/trajectory.hpp"

namespace dgfnc {

enum class SupervisoryMode { hitting_only, full_smc, off };
enum class DtMode { synthetic, measured };
enum class DerivativeMode { exact, estimated };

struct PlantConfig {
  enum class Type { surrogate_joints, nonlinear };
  Type type = Type::surrogate_joints;

  std::vector<SurrogateJoint> joints{3};

  // nonlinear: x^(n) = -sum a_i X_i - c sin(x) + b u  (+ delta_f + d)
  std::size_t order = 2;
  std::vector<double> linear;
  double sine = 0.0;
  double input_gain = 1.0;
  std::vector<double> delta_linear;
  double delta_sine = 0.0;

  std::vector<Disturbance> disturbances;  // one per joint
  std::vector<double> initial_state;      // joint-major; empty means zeros

  std::size_t dof() const { return type == Type::nonlinear ? 1 : joints.size(); }
  std::size_t state_order() const { return type == Type::nonlinear ? order : 2; }
};

struct ScenarioConfig {
  PlantConfig plant;
  ReferenceSource trajectory = JointSinusoid{{0.5, 0.5, 0.5}, {}, {}, 0.5};
  GrowthConfig growth;
  AdaptConfig adapt;
  std::vector<SlidingConfig> sliding;  // one per joint

  double control_period = 1e-3;
  double plant_dt = 1e-4;
  double duration = 10.0;
  DtMode dt_mode = DtMode::synthetic;
  double synthetic_dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::optional<std::string>> warm_start;  // per joint network file

  SupervisoryMode supervisory = SupervisoryMode::hitting_only;
  bool fnn_enabled = true;
  DerivativeMode derivatives = DerivativeMode::exact;
  double lyapunov_tol = 1e-9;      // tol_V = lyapunov_tol * max(1, V)
  double undershoot_window = 0.5;  // seconds covered by the undershoot summary

  std::size_t steps() const;
  std::size_t substeps() const;
  void validate() const;
};

/// Parses the JSON scenario document. Unknown keys are errors; relative
/// warm-start paths resolve against base_dir.
ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

std::unique_ptr<Plant> build_plant(const ScenarioConfig& cfg);

std::string_view to_string(SupervisoryMode mode);

}  // namespace dgfnc
