#include "adiactl/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "adiactl/emit.hpp"

namespace adiactl {

namespace {

RunReport summarize(const RunResult& r) {
  RunReport rep;
  rep.name = r.scenario.name;
  rep.scheme = r.trajectory.scheme_name;
  rep.samples = r.rows.size();
  rep.min_fidelity = r.rows.front().fidelity;
  rep.min_gap = r.rows.front().gap;
  double sum = 0;
  std::size_t reg = 0, clamp = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    rep.min_fidelity = std::min(rep.min_fidelity, r.rows[i].fidelity);
    rep.min_gap = std::min(rep.min_gap, r.rows[i].gap);
    sum += r.rows[i].fidelity;
    reg += r.regularized[i];
    clamp += r.clamped[i];
  }
  const double n = double(r.rows.size());
  rep.mean_fidelity = sum / n;
  rep.final_fidelity = r.rows.back().fidelity;
  rep.regularized_fraction = double(reg) / n;
  rep.clamped_fraction = double(clamp) / n;
  rep.max_norm_drift = r.trajectory.max_norm_drift;
  rep.renormalizations = r.trajectory.renormalizations;
  return rep;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

}  // namespace

RunResult simulate(const Scenario& s) {
  const auto start = std::chrono::steady_clock::now();
  RunResult r;
  r.scenario = s;
  r.model = s.model.build();
  r.scheme = s.scheme.build();
  const StateVectord psi0 = initial_state(s, r.model);
  try {
    r.trajectory = propagate(r.model, r.scheme, psi0, s.integrator, s.initial.level.value_or(0));
    r.rows = diagnose(r.trajectory, r.model, r.scheme);
  } catch (const NumericalError& e) {
    throw NumericalError("scenario '" + s.name + "': " + e.what());
  }
  const auto& traj = r.trajectory;
  r.regularized.resize(traj.size());
  r.clamped.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    r.regularized[i] = traj.controls[i].regularized || traj.step_regularized[i];
    r.clamped[i] = traj.controls[i].clamped || traj.step_clamped[i];
  }
  r.report = summarize(r);
  r.report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

RunReport run(const Scenario& s, const std::filesystem::path& out_dir) {
  RunResult r = simulate(s);
  ensure_directory(out_dir);
  write_text(out_dir / "trajectory.csv", trajectory_csv(r));
  write_text(out_dir / "summary.json", summary_json(r.report));
  write_text(out_dir / "scenario.json", scenario_to_json(s));
  if (s.output.chart == ChartKind::fidelity) write_text(out_dir / "fidelity.svg", fidelity_svg(r));
  if (s.output.chart == ChartKind::spectrum) write_text(out_dir / "spectrum.svg", spectrum_svg(r));
  if (s.output.state_dump) write_text(out_dir / "states.csv", state_dump_csv(r.trajectory));
  return r.report;
}

std::string sweep_point_name(SweepParameter p, double value) {
  return to_string(p) + "_" + nlohmann::json(value).dump();
}

std::vector<SweepPoint> sweep(const Scenario& s, const std::filesystem::path& out_dir, unsigned workers) {
  if (!s.sweep) throw ScenarioError("sweep", "scenario has no sweep specification");
  const SweepSpec& spec = *s.sweep;
  std::vector<double> values = spec.values;
  std::sort(values.begin(), values.end());

  std::vector<Scenario> points;
  for (double v : values) {
    Scenario p = apply_sweep_value(s, spec.parameter, v);
    p.name = s.name + "/" + sweep_point_name(spec.parameter, v);
    points.push_back(std::move(p));
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, unsigned(points.size()));

  std::vector<SweepPoint> out(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        out[i] = {values[i], run(points[i], out_dir / sweep_point_name(spec.parameter, values[i]))};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ensure_directory(out_dir);
  write_text(out_dir / "comparison.csv", comparison_csv(out));
  return out;
}

}  // namespace adiactl
