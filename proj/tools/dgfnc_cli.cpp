// Command-line front end: run / batch / inspect / save-net / load-net.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dgfnc/harness.hpp"

namespace fs = std::filesystem;
using namespace dgfnc;

namespace {

int run_one(const fs::path& config, const fs::path& out, bool save_nets) {
  const ScenarioConfig cfg = load_scenario(config);
  SimTrace trace;
  try {
    trace = run_scenario(cfg);
  } catch (const SimulationDiverged& e) {
    emit_trace(e.partial_trace(), out);
    std::cerr << config.string() << ": " << e.what() << " (partial trace written to " << out.string() << ")\n";
    return 3;
  }
  emit_trace(trace, out);
  if (save_nets) save_networks(trace, out);
  const auto summary = trace.summary();
  for (std::size_t j = 0; j < summary.size(); ++j) {
    fmt::print("joint {}: rmse={:.6g} max|e|={:.6g} final R={} lyapunov violations={}\n", j, summary[j].rmse,
               summary[j].max_abs_e, summary[j].final_r, summary[j].lyapunov_violations);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic growing fuzzy-neural controller simulator"};
  app.require_subcommand(1);

  fs::path config, out = "out", configs_dir, trace_path, net_path;
  bool save_nets = false;
  double window = 0.5;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory");
  run->add_flag("--save-nets", save_nets, "Also write per-joint network snapshots");

  auto* batch = app.add_subcommand("batch", "Run every *.json scenario in a directory");
  batch->add_option("--configs", configs_dir, "Directory of scenario files")->required()->check(CLI::ExistingDirectory);
  batch->add_option("--out", out, "Output root; one subdirectory per scenario");
  batch->add_option("--jobs", jobs, "Parallel runs");

  auto* inspect = app.add_subcommand("inspect", "Summarize a trace CSV");
  inspect->add_option("--trace", trace_path, "trace.csv")->required()->check(CLI::ExistingFile);
  inspect->add_option("--window", window, "Undershoot window [s]");

  auto* save_net = app.add_subcommand("save-net", "Run a scenario and save the trained networks");
  save_net->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  save_net->add_option("--out", out, "Directory for net_joint<j>.json");

  auto* load_net = app.add_subcommand("load-net", "Validate a network file and print it");
  load_net->add_option("--net", net_path, "Network JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_one(config, out, save_nets);

    if (*batch) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(configs_dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<int> status(files.size(), 0);
      std::atomic<std::size_t> next{0};
      const auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
          try {
            status[i] = run_one(files[i], out / files[i].stem(), false);
          } catch (const std::exception& e) {
            std::cerr << files[i].string() << ": " << e.what() << '\n';
            status[i] = 1;
          }
        }
      };
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < std::min<std::size_t>(jobs, files.size()); ++w) pool.emplace_back(worker);
      pool.clear();
      int rc = 0;
      for (std::size_t i = 0; i < files.size(); ++i) {
        fmt::print("{}: {}\n", files[i].filename().string(), status[i] == 0 ? "ok" : "failed");
        rc = std::max(rc, status[i]);
      }
      return rc;
    }

    if (*inspect) {
      const TraceTable table = read_trace_csv(trace_path);
      const auto summary = summarize(table, window);
      std::size_t events = 0;
      const fs::path growth = trace_path.parent_path() / "growth_events.csv";
      if (fs::exists(growth)) {
        std::ifstream g(growth);
        std::string line;
        while (std::getline(g, line)) events += line.empty() ? 0 : 1;
        events = events ? events - 1 : 0;
      }
      write_summary(summary, table.rows, events, std::cout);
      return 0;
    }

    if (*save_net) {
      const SimTrace trace = run_scenario(load_scenario(config));
      save_networks(trace, out);
      for (std::size_t j = 0; j < trace.networks.size(); ++j) {
        fmt::print("joint {}: {} nodes -> {}\n", j, trace.networks[j].size(),
                   (out / fmt::format("net_joint{}.json", j)).string());
      }
      return 0;
    }

    if (*load_net) {
      const FnnNetwork net = load_network(net_path.string());
      fmt::print("n = {}, R = {}\n", net.n(), net.size());
      for (std::size_t k = 0; k < net.size(); ++k) {
        const auto& node = net.node(k);
        fmt::print("  node {}: m = [{:.6g}], sigma = [{:.6g}], xi = {:.6g}\n", k, fmt::join(node.m, ", "),
                   fmt::join(node.sigma, ", "), node.xi);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
