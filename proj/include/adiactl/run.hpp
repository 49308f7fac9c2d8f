// Scenario execution: single runs, parameter sweeps and their summaries.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adiactl/diagnostics.hpp"
#include "adiactl/scenario.hpp"

namespace adiactl {

struct RunReport {
  std::string name;
  std::string scheme;
  std::size_t samples = 0;
  double min_fidelity = 0;
  double mean_fidelity = 0;  // arithmetic mean over recorded samples
  double final_fidelity = 0;
  double min_gap = 0;  // of the total Hamiltonian, over recorded samples
  double regularized_fraction = 0;
  double clamped_fraction = 0;
  double max_norm_drift = 0;
  long long renormalizations = 0;
  double wall_time_s = 0;
};

/// In-memory result of one scenario. rows[i] describes trajectory sample i.
struct RunResult {
  Scenario scenario;
  Modeld model;
  Schemed scheme;
  Trajectoryd trajectory;
  std::vector<DiagnosticsRowd> rows;
  std::vector<bool> regularized;  // sample flag or any stage of the following step
  std::vector<bool> clamped;
  RunReport report;
};

/// Runs the scenario without touching the filesystem. A sweep spec, if any, is ignored.
RunResult simulate(const Scenario& s);

/// Runs the scenario and writes trajectory.csv, summary.json, scenario.json and the
/// optional chart and state dump into `out_dir`.
RunReport run(const Scenario& s, const std::filesystem::path& out_dir);

struct SweepPoint {
  double value;
  RunReport report;
};

/// One run per sweep value in `<out_dir>/<parameter>_<value>/`, executed on up to
/// `workers` threads (0: hardware concurrency), plus `<out_dir>/comparison.csv`.
/// Returned points are sorted by value.
std::vector<SweepPoint> sweep(const Scenario& s, const std::filesystem::path& out_dir, unsigned workers = 0);

/// Directory name of one sweep point.
std::string sweep_point_name(SweepParameter p, double value);

}  // namespace adiactl
