#include "adiactl/presets.hpp"

#include <array>

namespace adiactl {

namespace {

constexpr std::array<double, 5> kRatioR{12, 9, 6, 3, 0};
constexpr std::array<double, 5> kRatioSmallR{0, 2, 4, 6, 8};
constexpr std::array<char, 5> kPanels{'a', 'b', 'c', 'd', 'e'};

Scenario baseline() {
  Scenario s;
  s.name = "fig1_baseline";
  return s;
}

// Scheme A, single control H_c = H0 / mu_b0, X = sigma_x + R sigma_z, literal sign.
Scenario fig1_panel(double ratio) {
  Scenario s;
  s.scheme.kind = SchemeSpec::Kind::a;
  s.scheme.x_op = OperatorSpec::from_pauli(1, 0, ratio, 0);
  s.scheme.controls = {OperatorSpec::from_drift(1.0 / s.model.rotating.mu_b0)};
  s.scheme.combined = true;
  s.scheme.sign = 1;
  s.integrator.dt = 5e-4;
  s.integrator.record_stride = 20;
  return s;
}

// Scheme B, single control H' = r sigma_x + sigma_y, target |E->.
Scenario fig2_panel(double ratio) {
  Scenario s;
  s.scheme.kind = SchemeSpec::Kind::b;
  s.scheme.controls = {OperatorSpec::from_pauli(ratio, 1, 0, 0)};
  s.scheme.regularization = Regularization::smooth;
  s.scheme.epsilon = 0.1;
  s.integrator.dt = 5e-5;
  s.integrator.record_stride = 200;
  return s;
}

}  // namespace

std::vector<PresetInfo> preset_list() {
  std::vector<PresetInfo> out{{"fig1_baseline", "rotating field, no control, start in |E-(0)>"}};
  for (std::size_t i = 0; i < kPanels.size(); ++i)
    out.push_back({std::string("fig1_") + kPanels[i],
                   "scheme A, X = sigma_x + " + std::to_string(int(kRatioR[i])) + " sigma_z, H_c = H0/mu_b0"});
  for (std::size_t i = 0; i < kPanels.size(); ++i)
    out.push_back({std::string("fig2_") + kPanels[i],
                   "scheme B, H' = " + std::to_string(int(kRatioSmallR[i])) + " sigma_x + sigma_y, target |E->"});
  out.push_back({"fig3", "fig1_a with the total-Hamiltonian spectrum chart"});
  out.push_back({"fig1_sweep", "fig1_a swept over R = 0, 3, 6, 9, 12"});
  out.push_back({"fig2_sweep", "fig2_a swept over r = 0, 2, 4, 6, 8"});
  return out;
}

Scenario preset(const std::string& name) {
  if (name == "fig1_baseline") return baseline();
  for (std::size_t i = 0; i < kPanels.size(); ++i) {
    if (name == std::string("fig1_") + kPanels[i]) {
      Scenario s = fig1_panel(kRatioR[i]);
      s.name = name;
      return s;
    }
    if (name == std::string("fig2_") + kPanels[i]) {
      Scenario s = fig2_panel(kRatioSmallR[i]);
      s.name = name;
      return s;
    }
  }
  if (name == "fig3") {
    Scenario s = fig1_panel(kRatioR[0]);
    s.name = name;
    s.output.chart = ChartKind::spectrum;
    return s;
  }
  if (name == "fig1_sweep") {
    Scenario s = fig1_panel(kRatioR[0]);
    s.name = name;
    s.sweep = SweepSpec{SweepParameter::R, {0, 3, 6, 9, 12}};
    return s;
  }
  if (name == "fig2_sweep") {
    Scenario s = fig2_panel(kRatioSmallR[0]);
    s.name = name;
    s.sweep = SweepSpec{SweepParameter::r, {0, 2, 4, 6, 8}};
    return s;
  }
  throw ScenarioError("preset", "unknown preset '" + name + "'");
}

}  // namespace adiactl
