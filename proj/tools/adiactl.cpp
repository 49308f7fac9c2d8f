// Command-line front end. Exit codes: 0 success, 1 I/O or usage error,
// 2 scenario validation error, 3 numerical failure.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "adiactl/emit.hpp"
#include "adiactl/presets.hpp"
#include "adiactl/run.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitScenario = 2;
constexpr int kExitNumerical = 3;

adiactl::Scenario load(const std::string& scenario_path, const std::string& preset_name) {
  if (!preset_name.empty()) return adiactl::preset(preset_name);
  std::ifstream in(scenario_path, std::ios::binary);
  if (!in) throw adiactl::Error("cannot read scenario '" + scenario_path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto base = std::filesystem::path(scenario_path).parent_path();
  return adiactl::parse_scenario(ss.str(), base.empty() ? "." : base.string());
}

std::string out_dir_for(const adiactl::Scenario& s, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!s.output.directory.empty()) return s.output.directory;
  throw adiactl::ScenarioError("output.directory", "no output directory (pass --out)");
}

void print_report(const adiactl::RunReport& r) {
  std::printf("%s: scheme %s, %zu samples, F min %.6f mean %.6f final %.6f, min gap %.6f, "
              "regularized %.3f, clamped %.3f, norm drift %.2e, %.3f s\n",
              r.name.c_str(), r.scheme.c_str(), r.samples, r.min_fidelity, r.mean_fidelity, r.final_fidelity,
              r.min_gap, r.regularized_fraction, r.clamped_fraction, r.max_norm_drift, r.wall_time_s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov-controlled adiabatic evolution of time-dependent quantum systems"};
  app.require_subcommand(1);

  std::string scenario_path, preset_name, out;
  unsigned workers = 0;

  auto* run = app.add_subcommand("run", "Run one scenario");
  auto* run_src = run->add_option("--scenario", scenario_path, "Scenario JSON file");
  run->add_option("--preset", preset_name, "Built-in preset instead of a file")->excludes(run_src);
  run->add_option("--out", out, "Output directory");

  auto* sw = app.add_subcommand("sweep", "Run a scenario once per sweep value");
  auto* sw_src = sw->add_option("--scenario", scenario_path, "Scenario JSON file with a sweep section");
  sw->add_option("--preset", preset_name, "Built-in preset instead of a file")->excludes(sw_src);
  sw->add_option("--out", out, "Output directory");
  sw->add_option("--workers", workers, "Worker threads (0: one per core)");

  auto* presets = app.add_subcommand("presets", "Inspect built-in presets");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "List preset names");
  auto* show = presets->add_subcommand("show", "Print a preset as scenario JSON");
  std::string show_name;
  show->add_option("name", show_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitIo;
  }

  try {
    if (list->parsed()) {
      for (const auto& p : adiactl::preset_list()) std::printf("%-14s %s\n", p.name.c_str(), p.description.c_str());
      return 0;
    }
    if (show->parsed()) {
      std::cout << adiactl::scenario_to_json(adiactl::preset(show_name));
      return 0;
    }
    if ((run->parsed() || sw->parsed()) && scenario_path.empty() && preset_name.empty())
      throw adiactl::ScenarioError("<args>", "pass --scenario <path> or --preset <name>");
    const adiactl::Scenario s = load(scenario_path, preset_name);
    const std::string dir = out_dir_for(s, out);
    if (run->parsed()) {
      print_report(adiactl::run(s, dir));
    } else {
      if (!s.sweep) throw adiactl::ScenarioError("sweep", "scenario has no sweep section");
      const auto points = adiactl::sweep(s, dir, workers);
      for (const auto& p : points) print_report(p.report);
      std::printf("comparison table: %s\n", (std::filesystem::path(dir) / "comparison.csv").string().c_str());
    }
    return 0;
  } catch (const adiactl::ValueError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return kExitScenario;
  } catch (const adiactl::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}
