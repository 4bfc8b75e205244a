#include <doctest.h>

#include <filesystem>
#include <string>

#include "dgfnc/errors.hpp"
#include "dgfnc/scenario.hpp"

using namespace dgfnc;

namespace {

const std::filesystem::path kConfigs{DGFNC_CONFIG_DIR};

std::string field_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.field();
  }
  return "<no error>";
}

const char* kMinimal = R"({
  "plant": {"type": "nonlinear", "order": 2, "linear": [1.0, 0.5]},
  "trajectory": {"kind": "joint_sinusoid", "amplitude": 0.5, "frequency_hz": 0.5},
  "sliding": {"k": [10, 25], "D1": 1.0},
  "duration": 1
})";

}  // namespace

TEST_CASE("shipped configurations load") {
  for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    ScenarioConfig cfg;
    CHECK_NOTHROW(cfg = load_scenario(entry.path()));
    CHECK_NOTHROW(cfg.validate());
    CHECK(build_plant(cfg)->joints() == cfg.plant.dof());
  }
}

TEST_CASE("defaults and derived quantities") {
  const auto cfg = parse_scenario(kMinimal);
  CHECK(cfg.control_period == 1e-3);
  CHECK(cfg.plant_dt == 1e-4);
  CHECK(cfg.steps() == 1000);
  CHECK(cfg.substeps() == 10);
  CHECK(cfg.supervisory == SupervisoryMode::hitting_only);
  CHECK(cfg.growth.r_max == 25);
  CHECK(cfg.growth.c_th == 0.02);
  CHECK(cfg.adapt.update_dt == cfg.control_period);
  REQUIRE(cfg.sliding.size() == 1);
  CHECK(cfg.sliding[0].k == std::vector<double>{10, 25});
}

TEST_CASE("surrogate base scenario") {
  const auto cfg = load_scenario(kConfigs / "surrogate_sinusoid.json");
  CHECK(cfg.plant.dof() == 3);
  CHECK(cfg.plant.joints[1].damping == 0.2);
  CHECK(cfg.sliding.size() == 3);
  CHECK(std::get<JointSinusoid>(cfg.trajectory).amplitude == std::vector<double>{0.5, 0.4, 0.3});
}

TEST_CASE("tool trajectory scenarios") {
  const auto cfg = load_scenario(kConfigs / "helix_affine.json");
  const auto& tr = std::get<ToolReference>(cfg.trajectory);
  CHECK(tr.trajectory.path == ToolPath::helix);
  CHECK(tr.trajectory.pitch == 0.02);
  REQUIRE(tr.ik);
  CHECK(tr.ik->dof() == 3);
}

TEST_CASE("warm start paths resolve against the config directory") {
  const auto cfg = load_scenario(kConfigs / "warm_start.json");
  REQUIRE(cfg.warm_start.size() == 3);
  REQUIRE(cfg.warm_start[0]);
  const std::filesystem::path p(*cfg.warm_start[0]);
  CHECK(p.is_absolute());
  CHECK(p.filename() == "net_joint0.json");
}

TEST_CASE("parse errors name the offending field") {
  CHECK(field_of(R"({
    "plant": {"type": "nonlinear", "order": 2},
    "trajectory": {"kind": "joint_sinusoid", "amplitude": 0.5},
    "sliding": {"k": [10, 1], "D1": 1.0},
    "bogus": 1})") == "bogus");
  CHECK(field_of(R"({"plant": {"type": "nonlinear", "mass": 1}, "trajectory": {"kind": "joint_step"}})") ==
        "plant.mass");
  CHECK(field_of(R"({"plant": {"type": "rocket"}})") == "plant.type");
  CHECK(field_of("[1, 2]") == "document");
  CHECK(field_of("{ nope") == "document");
  CHECK(field_of(R"({
    "plant": {"type": "nonlinear", "order": 2},
    "trajectory": {"kind": "joint_sinusoid", "amplitude": 0.5},
    "sliding": {"k": [10], "D1": 1.0}})") == "sliding.k");
  CHECK(field_of(R"({
    "plant": {"type": "nonlinear", "order": 2},
    "trajectory": {"kind": "joint_sinusoid", "amplitude": 0.5},
    "sliding": {"k": [10, 1], "D1": 1.0},
    "supervisory_mode": "loud"})") == "supervisory_mode");
  CHECK(field_of(R"({
    "plant": {"type": "nonlinear", "order": 2},
    "trajectory": {"kind": "joint_sinusoid", "amplitude": 0.5},
    "sliding": {"k": [10, 1], "D1": 1.0},
    "growth": {"R_max": -3}})") == "growth.R_max");
  CHECK(field_of(R"({
    "plant": {"type": "surrogate_joints", "joints": [{"mass": -1}]},
    "trajectory": {"kind": "joint_sinusoid", "amplitude": 0.5},
    "sliding": {"k": [10, 1], "D1": 1.0}})") == "plant.joints[0].mass");
}

TEST_CASE("validation of timing and dimensions") {
  auto cfg = parse_scenario(kMinimal);
  cfg.plant_dt = 3e-4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = parse_scenario(kMinimal);
  cfg.duration = 1e-4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = parse_scenario(kMinimal);
  cfg.trajectory = JointSinusoid{{0.1, 0.2}, {}, {}, 0.5};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = parse_scenario(kMinimal);
  cfg.sliding.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("mode names") {
  CHECK(to_string(SupervisoryMode::hitting_only) == "hitting_only");
  CHECK(to_string(SupervisoryMode::full_smc) == "full_smc");
  CHECK(to_string(SupervisoryMode::off) == "off");
}
