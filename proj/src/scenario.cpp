#include "dgfnc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "dgfnc/errors.hpp"

namespace dgfnc {

namespace {

using nlohmann::json;

// Object view that remembers which keys were read and rejects the rest.
class Fields {
 public:
  Fields(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ParseError(where_.empty() ? "document" : where_, "expected an object");
  }

  std::string path(std::string_view key) const {
    return where_.empty() ? std::string(key) : fmt::format("{}.{}", where_, key);
  }

  bool has(std::string_view key) {
    seen_.insert(std::string(key));
    return obj_.contains(key) && !obj_.at(std::string(key)).is_null();
  }

  const json& at(std::string_view key) {
    seen_.insert(std::string(key));
    if (!obj_.contains(key)) throw ParseError(path(key), "missing");
    return obj_.at(std::string(key));
  }

  double number(std::string_view key, double fallback) { return has(key) ? number(key) : fallback; }
  double number(std::string_view key) {
    const auto& v = at(key);
    if (!v.is_number()) throw ParseError(path(key), "expected a number");
    return v.get<double>();
  }

  std::size_t count(std::string_view key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_number_unsigned()) throw ParseError(path(key), "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  bool flag(std::string_view key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) throw ParseError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string text(std::string_view key, std::string fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_string()) throw ParseError(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(std::string_view key, std::vector<double> fallback = {}) {
    if (!has(key)) return fallback;
    return to_numbers(at(key), path(key));
  }

  static std::vector<double> to_numbers(const json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ParseError(fmt::format("{}[{}]", where, i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.count(key)) throw ParseError(path(key), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

Vec3 to_vec3(const json& v, const std::string& where) {
  const auto xs = Fields::to_numbers(v, where);
  if (xs.size() != 3) throw ParseError(where, "expected 3 numbers");
  return {xs[0], xs[1], xs[2]};
}

Disturbance parse_disturbance(const json& list, const std::string& where, std::uint64_t seed) {
  Disturbance d;
  if (!list.is_array()) throw ParseError(where, "expected an array of disturbance components");
  for (std::size_t i = 0; i < list.size(); ++i) {
    Fields f(list[i], fmt::format("{}[{}]", where, i));
    const std::string type = f.text("type", "");
    const double amp = f.number("amplitude");
    if (type == "step") {
      d.add_step(amp, f.number("t_on", 0.0));
    } else if (type == "sinusoid") {
      d.add_sinusoid(amp, f.number("frequency_hz"), f.number("phase", 0.0));
    } else if (type == "noise") {
      d.add_noise(amp, f.number("cutoff_hz"), seed + 7919u * (i + 1), f.count("components", 16));
    } else {
      throw ParseError(f.path("type"), "expected step, sinusoid or noise");
    }
    f.finish();
  }
  return d;
}

PlantConfig parse_plant(const json& j, std::uint64_t seed) {
  Fields f(j, "plant");
  PlantConfig p;
  const std::string type = f.text("type", "surrogate_joints");
  if (type == "surrogate_joints") {
    p.type = PlantConfig::Type::surrogate_joints;
    if (f.has("joints")) {
      const auto& arr = f.at("joints");
      if (!arr.is_array() || arr.empty()) throw ParseError("plant.joints", "expected a non-empty array");
      p.joints.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Fields jf(arr[i], fmt::format("plant.joints[{}]", i));
        SurrogateJoint sj;
        sj.mass = jf.number("mass", sj.mass);
        sj.damping = jf.number("damping", sj.damping);
        sj.gravity = jf.number("gravity", sj.gravity);
        if (!(sj.mass > 0.0)) throw ParseError(jf.path("mass"), "must be positive");
        jf.finish();
        p.joints.push_back(sj);
      }
    } else {
      p.joints.assign(f.count("dof", 3), SurrogateJoint{});
    }
  } else if (type == "nonlinear") {
    p.type = PlantConfig::Type::nonlinear;
    p.order = f.count("order", 2);
    if (p.order == 0) throw ParseError("plant.order", "must be positive");
    p.linear = f.numbers("linear");
    p.sine = f.number("sine", 0.0);
    p.input_gain = f.number("input_gain", 1.0);
    p.delta_linear = f.numbers("delta_linear");
    p.delta_sine = f.number("delta_sine", 0.0);
  } else {
    throw ParseError("plant.type", "expected surrogate_joints or nonlinear");
  }

  p.disturbances.assign(p.dof(), Disturbance{});
  if (f.has("disturbance")) {
    const auto& arr = f.at("disturbance");
    if (!arr.is_array() || arr.size() != p.dof()) {
      throw ParseError("plant.disturbance", fmt::format("expected one component list per joint ({})", p.dof()));
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      p.disturbances[i] = parse_disturbance(arr[i], fmt::format("plant.disturbance[{}]", i), seed + 104729u * i);
    }
  }
  p.initial_state = f.numbers("initial_state");
  if (!p.initial_state.empty() && p.initial_state.size() != p.dof() * p.state_order()) {
    throw ParseError("plant.initial_state", fmt::format("expected {} entries", p.dof() * p.state_order()));
  }
  f.finish();
  return p;
}

std::vector<double> per_joint(Fields& f, std::string_view key, std::size_t dof, double fallback) {
  if (!f.has(key)) return std::vector<double>(dof, fallback);
  const auto& v = f.at(key);
  if (v.is_number()) return std::vector<double>(dof, v.get<double>());
  auto xs = Fields::to_numbers(v, f.path(key));
  if (xs.size() != dof) throw ParseError(f.path(key), fmt::format("expected {} entries", dof));
  return xs;
}

ReferenceSource parse_trajectory(const json& j, std::size_t dof, double duration) {
  Fields f(j, "trajectory");
  const std::string kind = f.text("kind", "");
  ReferenceSource out;
  if (kind == "joint_sinusoid") {
    JointSinusoid s;
    s.amplitude = per_joint(f, "amplitude", dof, 0.5);
    s.offset = per_joint(f, "offset", dof, 0.0);
    s.phase = per_joint(f, "phase", dof, 0.0);
    s.frequency_hz = f.number("frequency_hz", 0.5);
    out = s;
  } else if (kind == "joint_step") {
    JointStep s;
    s.initial = per_joint(f, "initial", dof, 0.0);
    s.amplitude = per_joint(f, "amplitude", dof, 0.0);
    s.t_step = f.number("t_step", 0.0);
    out = s;
  } else if (kind == "circle" || kind == "helix") {
    ToolTrajectory t;
    t.path = kind == "circle" ? ToolPath::circle : ToolPath::helix;
    if (f.has("center")) t.center = to_vec3(f.at("center"), "trajectory.center");
    t.radius = f.number("radius", t.radius);
    t.angular_rate = f.number("angular_rate", t.angular_rate);
    t.pitch = f.number("pitch", 0.0);
    t.duration = f.number("duration", duration);
    t.validate();

    Fields ik(f.at("ik"), "trajectory.ik");
    if (ik.text("name", "affine_surrogate") != "affine_surrogate") {
      throw ParseError("trajectory.ik.name", "only affine_surrogate is built in");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dof), 3);
    if (ik.has("matrix")) {
      const auto& rows = ik.at("matrix");
      if (!rows.is_array() || rows.size() != dof) throw ParseError("trajectory.ik.matrix", "expected dof rows");
      for (std::size_t r = 0; r < dof; ++r) {
        const Vec3 row = to_vec3(rows[r], fmt::format("trajectory.ik.matrix[{}]", r));
        for (std::size_t c = 0; c < 3; ++c) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
      }
    }
    const auto offset = ik.numbers("offset", std::vector<double>(dof, 0.0));
    if (offset.size() != dof) throw ParseError("trajectory.ik.offset", "expected dof entries");
    Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(offset.data(), static_cast<Eigen::Index>(dof));
    std::shared_ptr<const InverseKinematics> hook;
    if (ik.has("workspace_min") || ik.has("workspace_max")) {
      const Vec3 lo = to_vec3(ik.at("workspace_min"), "trajectory.ik.workspace_min");
      const Vec3 hi = to_vec3(ik.at("workspace_max"), "trajectory.ik.workspace_max");
      hook = std::make_shared<AffineSurrogateIk>(a, c, lo, hi);
    } else {
      hook = std::make_shared<AffineSurrogateIk>(a, c);
    }
    ik.finish();
    out = ToolReference{t, hook};
  } else {
    throw ParseError("trajectory.kind", "expected circle, helix, joint_sinusoid or joint_step");
  }
  f.finish();
  return out;
}

GrowthConfig parse_growth(const json& j) {
  Fields f(j, "growth");
  GrowthConfig g;
  g.r_max = f.count("R_max", g.r_max);
  g.t_max = f.number("t_max", g.t_max);
  g.e_th = f.number("E_th", g.e_th);
  g.gamma_th = f.number("Gamma_th", g.gamma_th);
  g.c_th = f.number("C_th", g.c_th);
  g.sigma_c = f.number("sigma_c", g.sigma_c);
  g.clamp_error_term = f.flag("clamp_error_term", false);
  f.finish();
  return g;
}

AdaptConfig parse_adapt(const json& j, double period) {
  Fields f(j, "adapt");
  AdaptConfig a;
  a.eta_xi = f.number("eta_xi", a.eta_xi);
  a.eta_m = f.number("eta_m", a.eta_m);
  a.update_dt = f.number("update_dt", period);
  a.max_step = f.number("max_step", 0.0);
  f.finish();
  return a;
}

SlidingConfig parse_sliding_one(const json& j, const std::string& where, std::size_t order) {
  Fields f(j, where);
  SlidingConfig s;
  s.k = f.numbers("k");
  if (s.k.size() != order) throw ParseError(f.path("k"), fmt::format("expected {} gains", order));
  s.d1 = f.number("D1");
  s.h = f.number("h", 1.0);
  s.boundary = f.number("boundary", 0.0);
  f.finish();
  return s;
}

template <class Enum>
Enum parse_enum(Fields& f, std::string_view key, std::initializer_list<std::pair<std::string_view, Enum>> options,
                Enum fallback) {
  if (!f.has(key)) return fallback;
  const std::string v = f.text(key, "");
  for (const auto& [name, value] : options) {
    if (v == name) return value;
  }
  throw ParseError(f.path(key), "unrecognized value '" + v + "'");
}

}  // namespace

std::size_t ScenarioConfig::steps() const {
  return static_cast<std::size_t>(std::llround(duration / control_period));
}

std::size_t ScenarioConfig::substeps() const {
  return static_cast<std::size_t>(std::llround(control_period / plant_dt));
}

void ScenarioConfig::validate() const {
  if (!(control_period > 0.0)) throw ConfigError("control_period must be positive");
  if (!(plant_dt > 0.0)) throw ConfigError("plant_dt must be positive");
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  const double ratio = control_period / plant_dt;
  if (substeps() == 0 || std::abs(ratio - static_cast<double>(substeps())) > 1e-9 * ratio) {
    throw ConfigError("plant_dt must divide control_period");
  }
  if (steps() == 0) throw ConfigError("duration is shorter than one control period");
  if (!(synthetic_dt >= 0.0)) throw ConfigError("dt_mode value must be >= 0");

  const std::size_t dof = plant.dof();
  if (reference_dof(trajectory) != dof) {
    throw ConfigError(fmt::format("trajectory drives {} joints but the plant has {}", reference_dof(trajectory), dof));
  }
  if (sliding.size() != dof) throw ConfigError("need one sliding configuration per joint");
  for (const auto& s : sliding) {
    s.validate();
    if (s.n() != plant.state_order()) throw ConfigError("sliding gains must match the plant order");
  }
  growth.validate();
  adapt.validate();
  if (!warm_start.empty() && warm_start.size() != dof) throw ConfigError("warm_start needs one entry per joint");
}

ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("document", e.what());
  }
  Fields f(doc, "");
  ScenarioConfig cfg;
  cfg.seed = f.has("seed") ? f.count("seed", 0) : 0;
  cfg.control_period = f.number("control_period", cfg.control_period);
  cfg.plant_dt = f.number("plant_dt", cfg.plant_dt);
  cfg.duration = f.number("duration", cfg.duration);

  cfg.plant = parse_plant(f.at("plant"), cfg.seed);
  const std::size_t dof = cfg.plant.dof();
  cfg.trajectory = parse_trajectory(f.at("trajectory"), dof, cfg.duration);
  cfg.growth = f.has("growth") ? parse_growth(f.at("growth")) : GrowthConfig{};
  cfg.adapt = f.has("adapt") ? parse_adapt(f.at("adapt"), cfg.control_period)
                             : AdaptConfig{.update_dt = cfg.control_period};

  const auto& sl = f.at("sliding");
  if (sl.is_array()) {
    if (sl.size() != dof) throw ParseError("sliding", fmt::format("expected {} entries", dof));
    for (std::size_t j = 0; j < dof; ++j) {
      cfg.sliding.push_back(parse_sliding_one(sl[j], fmt::format("sliding[{}]", j), cfg.plant.state_order()));
    }
  } else {
    cfg.sliding.assign(dof, parse_sliding_one(sl, "sliding", cfg.plant.state_order()));
  }

  if (f.has("dt_mode")) {
    Fields dm(f.at("dt_mode"), "dt_mode");
    const std::string mode = dm.text("mode", "synthetic");
    if (mode == "synthetic") {
      cfg.dt_mode = DtMode::synthetic;
      cfg.synthetic_dt = dm.number("value", 0.0);
    } else if (mode == "measured") {
      cfg.dt_mode = DtMode::measured;
    } else {
      throw ParseError("dt_mode.mode", "expected synthetic or measured");
    }
    dm.finish();
  }

  if (f.has("warm_start")) {
    const auto& ws = f.at("warm_start");
    if (!ws.is_array() || ws.size() != dof) throw ParseError("warm_start", "expected one entry (path or null) per joint");
    for (std::size_t j = 0; j < dof; ++j) {
      if (ws[j].is_null()) {
        cfg.warm_start.emplace_back(std::nullopt);
      } else if (ws[j].is_string()) {
        std::filesystem::path p = ws[j].get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        cfg.warm_start.emplace_back(p.string());
      } else {
        throw ParseError(fmt::format("warm_start[{}]", j), "expected a path or null");
      }
    }
  }

  cfg.supervisory = parse_enum<SupervisoryMode>(
      f, "supervisory_mode",
      {{"hitting_only", SupervisoryMode::hitting_only}, {"full_smc", SupervisoryMode::full_smc}, {"off", SupervisoryMode::off}},
      SupervisoryMode::hitting_only);
  cfg.derivatives = parse_enum<DerivativeMode>(
      f, "derivative_mode", {{"exact", DerivativeMode::exact}, {"estimated", DerivativeMode::estimated}},
      DerivativeMode::exact);
  cfg.fnn_enabled = f.flag("fnn_enabled", true);
  cfg.lyapunov_tol = f.number("lyapunov_tol", cfg.lyapunov_tol);
  cfg.undershoot_window = f.number("undershoot_window", cfg.undershoot_window);
  f.finish();

  try {
    cfg.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::unique_ptr<Plant> build_plant(const ScenarioConfig& cfg) {
  const auto& p = cfg.plant;
  std::unique_ptr<Plant> plant;
  if (p.type == PlantConfig::Type::nonlinear) {
    NonlinearPlant np;
    np.n = p.order;
    np.h = cfg.sliding.empty() ? 1.0 : cfg.sliding[0].h;
    np.f = make_linear_sine_map(p.linear, p.sine, p.input_gain);
    if (!p.delta_linear.empty() || p.delta_sine != 0.0) np.delta_f = make_linear_sine_map(p.delta_linear, p.delta_sine, 0.0);
    np.disturbance = p.disturbances.empty() ? Disturbance{} : p.disturbances[0];
    np.state = p.initial_state.empty() ? StateVector(p.order, 0.0) : p.initial_state;
    plant = std::make_unique<NonlinearPlantAdapter>(std::move(np));
  } else {
    plant = std::make_unique<RobotPlant>(make_surrogate_model(p.joints), p.disturbances);
    if (!p.initial_state.empty()) plant->set_state(p.initial_state);
  }
  return plant;
}

std::string_view to_string(SupervisoryMode mode) {
  switch (mode) {
    case SupervisoryMode::hitting_only: return "hitting_only";
    case SupervisoryMode::full_smc: return "full_smc";
    case SupervisoryMode::off: return "off";
  }
  return "unknown";
}

}  // namespace dgfnc
