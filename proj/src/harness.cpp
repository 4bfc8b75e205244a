#include "dgfnc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "dgfnc/adapt.hpp"
#include "dgfnc/sliding.hpp"

namespace dgfnc {

namespace {

constexpr const char* kJointColumns[] = {"q_c",   "q",         "e",   "s",   "u_fnn",   "u_sup",
                                         "u_total", "R",       "C_add", "V", "V_dot_est", "u_E",
                                         "u_H",   "lyap_ok",  "xi_norm", "max_dxi"};

std::string real(double v) { return fmt::format("{:.17g}", v); }

struct JointSeries {
  std::vector<double> t, e, r, ok;
};

JointSummary summarize_series(const JointSeries& js, double window) {
  JointSummary out;
  double sq = 0.0;
  for (std::size_t i = 0; i < js.e.size(); ++i) {
    const double a = std::abs(js.e[i]);
    sq += js.e[i] * js.e[i];
    out.max_abs_e = std::max(out.max_abs_e, a);
    if (js.t[i] < window) out.undershoot_peak = std::max(out.undershoot_peak, a);
    if (js.ok[i] == 0.0) ++out.lyapunov_violations;
  }
  if (!js.e.empty()) {
    out.rmse = std::sqrt(sq / static_cast<double>(js.e.size()));
    out.final_r = static_cast<std::size_t>(js.r.back());
  }
  return out;
}

double norm(const FnnNetwork& net) {
  double acc = 0.0;
  for (const auto& node : net.nodes()) acc += node.xi * node.xi;
  return std::sqrt(acc);
}

}  // namespace

std::vector<JointSummary> SimTrace::summary() const {
  std::vector<JointSummary> out;
  for (std::size_t j = 0; j < dof; ++j) {
    JointSeries js;
    for (const auto& row : rows) {
      js.t.push_back(row.t);
      js.e.push_back(row.joints[j].e);
      js.r.push_back(static_cast<double>(row.joints[j].r));
      js.ok.push_back(row.joints[j].lyapunov_ok ? 1.0 : 0.0);
    }
    out.push_back(summarize_series(js, undershoot_window));
  }
  return out;
}

double SimTrace::rmse(std::size_t joint, double t0, double t1) const {
  double sq = 0.0;
  std::size_t count = 0;
  for (const auto& row : rows) {
    if (row.t >= t0 && row.t < t1) {
      sq += row.joints.at(joint).e * row.joints.at(joint).e;
      ++count;
    }
  }
  return count ? std::sqrt(sq / static_cast<double>(count)) : 0.0;
}

double SimTrace::max_abs_error(std::size_t joint, double t0, double t1) const {
  double m = 0.0;
  for (const auto& row : rows) {
    if (row.t >= t0 && row.t < t1) m = std::max(m, std::abs(row.joints.at(joint).e));
  }
  return m;
}

std::vector<FnnNetwork> warm_start(const ScenarioConfig& cfg) {
  const std::size_t dof = cfg.plant.dof();
  const std::size_t n = cfg.plant.state_order();
  std::vector<FnnNetwork> nets(dof, FnnNetwork(n));
  for (std::size_t j = 0; j < cfg.warm_start.size() && j < dof; ++j) {
    if (!cfg.warm_start[j]) continue;
    FnnNetwork loaded = load_network(*cfg.warm_start[j]);
    if (loaded.n() != n) {
      throw ConfigError(fmt::format("warm-start network for joint {} has n = {}, controller needs {}", j,
                                    loaded.n(), n));
    }
    nets[j] = std::move(loaded);
  }
  return nets;
}

SimTrace run_scenario(const ScenarioConfig& cfg) { return run_scenario(cfg, warm_start(cfg)); }

SimTrace run_scenario(const ScenarioConfig& cfg, std::vector<FnnNetwork> initial) {
  cfg.validate();
  auto plant = build_plant(cfg);
  const std::size_t dof = plant->joints();
  const std::size_t n = plant->order();
  if (initial.size() != dof) throw ConfigError("need one starting network per joint");
  for (const auto& net : initial) {
    if (net.n() != n) throw ConfigError("starting network dimension does not match the plant order");
  }

  const double period = cfg.control_period;
  const std::size_t steps = cfg.steps();
  const std::size_t substeps = cfg.substeps();
  const double sub_dt = period / static_cast<double>(substeps);

  SimTrace trace;
  trace.dof = dof;
  trace.control_period = period;
  trace.undershoot_window = cfg.undershoot_window;
  trace.rows.reserve(steps);
  trace.networks = std::move(initial);
  auto& nets = trace.networks;

  std::vector<ErrorTracker> trackers;
  for (std::size_t j = 0; j < dof; ++j) trackers.emplace_back(n, period);
  std::vector<double> s_prev(dof, 0.0);
  std::vector<double> u_prev(dof, 0.0);
  std::vector<FnnOutput> fnn_out(dof);
  std::vector<std::vector<double>> z(dof);
  std::vector<double> s_now(dof, 0.0);
  double last_loop_time = 0.0;

  using Clock = std::chrono::steady_clock;

  for (std::size_t k = 0; k < steps; ++k) {
    const auto loop_start = Clock::now();
    const double t = static_cast<double>(k) * period;
    const JointReference ref = sample_reference(cfg.trajectory, t, n);
    const StateVector& x = plant->state();
    std::vector<double> nominal;
    if (cfg.supervisory == SupervisoryMode::full_smc) nominal = plant->nominal_top(x, u_prev);
    const double observed_dt = cfg.dt_mode == DtMode::synthetic ? cfg.synthetic_dt : last_loop_time;

    TraceRow row;
    row.t = t;
    row.joints.resize(dof);
    std::vector<double> u(dof, 0.0);

    for (std::size_t j = 0; j < dof; ++j) {
      auto& js = row.joints[j];
      const auto& sl = cfg.sliding[j];
      std::vector<double> derivs(n);
      for (std::size_t i = 0; i < n; ++i) derivs[i] = ref.derivs[j][i] - x[j * n + i];
      const ErrorState& err = cfg.derivatives == DerivativeMode::exact ? trackers[j].update(derivs)
                                                                       : trackers[j].update_estimated(derivs[0]);
      const double s = sliding_value(err, sl);
      z[j] = err.derivs;

      fnn_out[j] = FnnOutput{};
      if (cfg.fnn_enabled) {
        fnn_out[j] = evaluate(nets[j], z[j]);
        GrowthObservation obs{nets[j].size(), observed_dt, std::abs(err.derivs[0]), fnn_out[j].gamma_max()};
        GrowthScore score;
        if (maybe_grow(nets[j], z[j], obs, cfg.growth, &score)) {
          fnn_out[j] = evaluate(nets[j], z[j]);
          trace.growth_events.push_back({k, t, j, score, nets[j].size()});
        }
        js.c_add = score.c_add;
      }

      js.u_h = cfg.supervisory == SupervisoryMode::off ? 0.0 : hitting_control(s, sl);
      if (cfg.supervisory == SupervisoryMode::full_smc) {
        const double fn = nominal[j] - sl.h * u_prev[j];
        js.u_e = equivalent_control(err, ref.derivs[j][n], fn, sl);
      }
      js.u_sup = js.u_e + js.u_h;
      js.u_fnn = fnn_out[j].u;
      js.u_total = js.u_fnn + js.u_sup;
      u[j] = js.u_total;

      const auto lyap = lyapunov_check(s, k == 0 ? s : s_prev[j], period, cfg.lyapunov_tol);
      js.v = lyap.v;
      js.v_dot = lyap.v_dot;
      js.lyapunov_ok = lyap.ok;
      js.q_c = ref.q_c[j];
      js.q = x[j * n];
      js.e = err.derivs[0];
      js.s = s;
      js.r = nets[j].size();
      s_now[j] = s;
    }

    try {
      for (double v : u) {
        if (!std::isfinite(v)) throw DivergenceError(k, "non-finite control signal");
      }
      for (std::size_t m = 0; m < substeps; ++m) {
        plant->integrate_step(t + static_cast<double>(m) * sub_dt, u, sub_dt, k);
      }
    } catch (const DivergenceError& e) {
      trace.rows.push_back(std::move(row));
      throw SimulationDiverged(k, e.what(), std::move(trace));
    }

    if (cfg.fnn_enabled) {
      for (std::size_t j = 0; j < dof; ++j) {
        const auto stats = adapt_step(nets[j], z[j], s_now[j], fnn_out[j].gamma, cfg.adapt);
        row.joints[j].max_dxi = stats.max_abs_dxi;
        row.joints[j].xi_norm = norm(nets[j]);
      }
    }

    s_prev = s_now;
    u_prev = u;
    trace.rows.push_back(std::move(row));
    last_loop_time = std::chrono::duration<double>(Clock::now() - loop_start).count();
  }
  return trace;
}

std::vector<std::string> trace_columns(std::size_t dof) {
  std::vector<std::string> cols{"t"};
  for (std::size_t j = 0; j < dof; ++j) {
    for (const char* c : kJointColumns) cols.push_back(fmt::format("{}_{}", c, j));
  }
  return cols;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  const auto cols = trace_columns(trace.dof);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  std::string line;
  for (const auto& row : trace.rows) {
    line = real(row.t);
    for (const auto& js : row.joints) {
      line += fmt::format(",{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", real(js.q_c), real(js.q), real(js.e),
                          real(js.s), real(js.u_fnn), real(js.u_sup), real(js.u_total), js.r, real(js.c_add),
                          real(js.v), real(js.v_dot), real(js.u_e), real(js.u_h), js.lyapunov_ok ? 1 : 0,
                          real(js.xi_norm), real(js.max_dxi));
    }
    out << line << '\n';
  }
}

void write_growth_csv(const SimTrace& trace, std::ostream& out) {
  out << "step,t,joint,C_add,C_R,C_t,C_e,C_gamma,R_after\n";
  for (const auto& ev : trace.growth_events) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", ev.step, real(ev.t), ev.joint, real(ev.score.c_add),
                       real(ev.score.c_r), real(ev.score.c_t), real(ev.score.c_e), real(ev.score.c_gamma),
                       ev.r_after);
  }
}

void write_summary(const std::vector<JointSummary>& summary, std::size_t rows, std::size_t events,
                   std::ostream& out) {
  out << "joints = " << summary.size() << '\n';
  out << "rows = " << rows << '\n';
  out << "growth_events = " << events << '\n';
  for (std::size_t j = 0; j < summary.size(); ++j) {
    const auto& s = summary[j];
    out << fmt::format("joint_{}.rmse = {}\n", j, real(s.rmse));
    out << fmt::format("joint_{}.final_R = {}\n", j, s.final_r);
    out << fmt::format("joint_{}.max_abs_e = {}\n", j, real(s.max_abs_e));
    out << fmt::format("joint_{}.undershoot_peak = {}\n", j, real(s.undershoot_peak));
    out << fmt::format("joint_{}.lyapunov_violations = {}\n", j, s.lyapunov_violations);
  }
}

void emit_trace(const SimTrace& trace, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot open " + p.string() + " for writing");
    return f;
  };
  {
    auto f = open(dir / "trace.csv");
    write_trace_csv(trace, f);
    if (!f) throw IoError("write failed: trace.csv");
  }
  {
    auto f = open(dir / "growth_events.csv");
    write_growth_csv(trace, f);
    if (!f) throw IoError("write failed: growth_events.csv");
  }
  {
    auto f = open(dir / "summary.txt");
    write_summary(trace.summary(), trace.rows.size(), trace.growth_events.size(), f);
    if (!f) throw IoError("write failed: summary.txt");
  }
}

void save_networks(const SimTrace& trace, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t j = 0; j < trace.networks.size(); ++j) {
    save_network(trace.networks[j], (dir / fmt::format("net_joint{}.json", j)).string());
  }
}

const std::vector<double>& TraceTable::column(const std::string& name) const {
  const auto it = columns.find(name);
  if (it == columns.end()) throw ParseError(name, "column not present in trace");
  return it->second;
}

std::size_t TraceTable::dof() const {
  std::size_t j = 0;
  while (columns.count(fmt::format("e_{}", j))) ++j;
  return j;
}

TraceTable read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  TraceTable table;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("header", "trace is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  std::vector<std::vector<double>*> cols;
  for (const auto& h : table.header) cols.push_back(&table.columns[h]);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= cols.size()) throw ParseError(fmt::format("line {}", lineno), "too many cells");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size()) {
        throw ParseError(fmt::format("line {} column {}", lineno, table.header[c]), "not a number");
      }
      cols[c++]->push_back(v);
    }
    if (c != cols.size()) throw ParseError(fmt::format("line {}", lineno), "too few cells");
    ++table.rows;
  }
  return table;
}

std::vector<JointSummary> summarize(const TraceTable& table, double undershoot_window) {
  std::vector<JointSummary> out;
  for (std::size_t j = 0; j < table.dof(); ++j) {
    JointSeries js{table.column("t"), table.column(fmt::format("e_{}", j)), table.column(fmt::format("R_{}", j)),
                   table.column(fmt::format("lyap_ok_{}", j))};
    out.push_back(summarize_series(js, undershoot_window));
  }
  return out;
}

}  // namespace dgfnc
