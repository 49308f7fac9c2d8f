// Declarative run configuration: JSON in, validated Scenario out.
#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "adiactl/control.hpp"
#include "adiactl/models.hpp"
#include "adiactl/propagate.hpp"

namespace adiactl {

/// Scenario validation failure. The message starts with the JSON path of the offending value.
class ScenarioError : public ValueError {
 public:
  ScenarioError(const std::string& path, const std::string& what) : ValueError(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// An operator as written in a scenario: Pauli coefficients (cx, cy, cz, cid),
/// an explicit complex matrix, or a multiple of the drift Hamiltonian.
struct OperatorSpec {
  enum class Kind { pauli, matrix, drift };
  Kind kind = Kind::pauli;
  std::array<double, 4> pauli{};
  CMatrix<double> matrix;
  double drift_scale = 1;

  static OperatorSpec from_pauli(double cx, double cy, double cz, double cid) {
    OperatorSpec s;
    s.pauli = {cx, cy, cz, cid};
    return s;
  }
  static OperatorSpec from_drift(double scale) {
    OperatorSpec s;
    s.kind = Kind::drift;
    s.drift_scale = scale;
    return s;
  }

  HermitianOperatord to_operator() const;  // pauli or matrix kinds only
  ControlOperator<double> to_control() const;

  friend bool operator==(const OperatorSpec& a, const OperatorSpec& b);
};

struct ModelSpec {
  enum class Kind { rotating, interpolated, tabulated };
  Kind kind = Kind::rotating;
  RotatingFieldModel<double> rotating = fig1_model<double>();
  OperatorSpec h_i, h_f;
  Schedule<double> schedule;
  double total_time = 3;
  TabulatedModel<double> tabulated;

  Modeld build() const;
  friend bool operator==(const ModelSpec& a, const ModelSpec& b);
};

struct SchemeSpec {
  enum class Kind { none, a, b };
  Kind kind = Kind::none;
  OperatorSpec x_op;
  std::vector<OperatorSpec> controls;
  int pivot = 0;
  int sign = -1;
  double epsilon = 1e-6;
  double f_max = 1e3;
  Regularization regularization = Regularization::hold_last;
  bool combined = false;
  bool strict = false;
  int target_level = 0;

  Schemed build() const;
  friend bool operator==(const SchemeSpec& a, const SchemeSpec& b) = default;
};

struct InitialSpec {
  std::optional<int> level = 0;  // eigenstate of H0(t0); otherwise explicit amplitudes
  std::vector<std::complex<double>> amplitudes;

  friend bool operator==(const InitialSpec& a, const InitialSpec& b) = default;
};

enum class SweepParameter { R, r, omega, theta, dt };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::R;
  std::vector<double> values;

  friend bool operator==(const SweepSpec& a, const SweepSpec& b) = default;
};

enum class ChartKind { none, fidelity, spectrum };

struct OutputSpec {
  std::string directory;
  ChartKind chart = ChartKind::fidelity;
  bool state_dump = false;

  friend bool operator==(const OutputSpec& a, const OutputSpec& b) = default;
};

struct Scenario {
  std::string name = "scenario";
  ModelSpec model;
  SchemeSpec scheme;
  InitialSpec initial;
  IntegratorConfig<double> integrator;
  std::optional<SweepSpec> sweep;
  OutputSpec output;

  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Parses and validates a scenario document. Defaults: rotating model with
/// mu_b0 = 1, t in [0, 3], dt = 1e-3, record_stride = 10, no control. Unknown
/// keys are rejected. `base_dir` resolves relative tabulated-model file paths.
Scenario parse_scenario(const std::string& json_text, const std::string& base_dir = ".");

/// Fully-defaulted JSON echo; parse_scenario(scenario_to_json(s)) == s.
std::string scenario_to_json(const Scenario& s);

/// Copy of `s` with one sweep value applied and the sweep removed.
Scenario apply_sweep_value(const Scenario& s, SweepParameter p, double value);

std::string to_string(SweepParameter p);

/// The initial state described by s.initial at t0.
StateVectord initial_state(const Scenario& s, const Modeld& model);

}  // namespace adiactl
