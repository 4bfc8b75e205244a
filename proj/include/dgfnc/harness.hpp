#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dgfnc/errors.hpp"
#include "dgfnc/fnn.hpp"
#include "dgfnc/growth.hpp"
#include "dgfnc/scenario.hpp"

namespace dgfnc {

struct JointSample {
  double q_c = 0.0;
  double q = 0.0;
  double e = 0.0;
  double s = 0.0;
  double u_fnn = 0.0;
  double u_sup = 0.0;
  double u_total = 0.0;
  std::size_t r = 0;
  double c_add = 0.0;
  double v = 0.0;
  double v_dot = 0.0;
  double u_e = 0.0;
  double u_h = 0.0;
  bool lyapunov_ok = true;
  double xi_norm = 0.0;
  double max_dxi = 0.0;
};

struct TraceRow {
  double t = 0.0;
  std::vector<JointSample> joints;
};

struct GrowthEvent {
  std::size_t step = 0;
  double t = 0.0;
  std::size_t joint = 0;
  GrowthScore score;
  std::size_t r_after = 0;
};

struct JointSummary {
  double rmse = 0.0;
  double max_abs_e = 0.0;
  double undershoot_peak = 0.0;  // max |e| inside the undershoot window
  std::size_t final_r = 0;
  std::size_t lyapunov_violations = 0;
};

struct SimTrace {
  std::size_t dof = 0;
  double control_period = 0.0;
  double undershoot_window = 0.5;
  std::vector<TraceRow> rows;
  std::vector<GrowthEvent> growth_events;
  std::vector<FnnNetwork> networks;  // controller state after the last step

  std::vector<JointSummary> summary() const;
  /// RMSE of e for joint j over rows with t0 <= t < t1.
  double rmse(std::size_t joint, double t0, double t1) const;
  double max_abs_error(std::size_t joint, double t0, double t1) const;
};

/// Thrown by run_scenario when the plant state stops being finite; holds
/// everything recorded up to that point.
class SimulationDiverged : public DivergenceError {
 public:
  SimulationDiverged(std::size_t step, const std::string& what, SimTrace partial)
      : DivergenceError(step, what), partial_(std::move(partial)) {}
  const SimTrace& partial_trace() const noexcept { return partial_; }

 private:
  SimTrace partial_;
};

/// Per-joint starting networks: loaded files where configured, empty otherwise.
std::vector<FnnNetwork> warm_start(const ScenarioConfig& cfg);

SimTrace run_scenario(const ScenarioConfig& cfg);
SimTrace run_scenario(const ScenarioConfig& cfg, std::vector<FnnNetwork> initial);

std::vector<std::string> trace_columns(std::size_t dof);
void write_trace_csv(const SimTrace& trace, std::ostream& out);
void write_growth_csv(const SimTrace& trace, std::ostream& out);
void write_summary(const std::vector<JointSummary>& summary, std::size_t rows, std::size_t events,
                   std::ostream& out);

/// Writes trace.csv, growth_events.csv and summary.txt into dir.
void emit_trace(const SimTrace& trace, const std::filesystem::path& dir);

/// Saves net_joint<j>.json for each joint.
void save_networks(const SimTrace& trace, const std::filesystem::path& dir);

/// Column-oriented view of a trace CSV read back from disk.
struct TraceTable {
  std::vector<std::string> header;
  std::map<std::string, std::vector<double>> columns;
  std::size_t rows = 0;

  const std::vector<double>& column(const std::string& name) const;
  std::size_t dof() const;
};

TraceTable read_trace_csv(const std::filesystem::path& path);
std::vector<JointSummary> summarize(const TraceTable& table, double undershoot_window);

}  // namespace dgfnc
