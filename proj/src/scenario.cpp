#include "adiactl/scenario.hpp"

#include "adiactl/eigenpath.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace adiactl {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string key_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string index_path(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ScenarioError(path.empty() ? "<root>" : path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(j, path);
  for (const auto& [key, _] : j.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ScenarioError(key_path(path, key), "unknown key '" + key + "'");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioError(path, "expected a finite number");
  return v;
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
  return obj.contains(key) ? get_number(obj.at(key), key_path(path, key)) : fallback;
}

int int_or(const json& obj, const char* key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ScenarioError(key_path(path, key), "expected an integer");
  return v.get<int>();
}

bool bool_or(const json& obj, const char* key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ScenarioError(key_path(path, key), "expected true or false");
  return v.get<bool>();
}

std::string string_or(const json& obj, const char* key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ScenarioError(key_path(path, key), "expected a string");
  return v.get<std::string>();
}

CMatrix<double> parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ScenarioError(path, "expected a non-empty array of matrix rows");
  const auto n = Eigen::Index(j.size());
  CMatrix<double> m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[std::size_t(r)];
    const std::string rp = index_path(path, std::size_t(r));
    if (!row.is_array() || Eigen::Index(row.size()) != n) throw ScenarioError(rp, "matrix is not square");
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& e = row[std::size_t(c)];
      const std::string ep = index_path(rp, std::size_t(c));
      if (!e.is_array() || e.size() != 2) throw ScenarioError(ep, "matrix entries must be [re, im] pairs");
      m(r, c) = {get_number(e[0], ep), get_number(e[1], ep)};
    }
  }
  return m;
}

ordered_json matrix_json(const CMatrix<double>& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

// "h0" means H0 / mu_b0 for the rotating model and H0 otherwise.
OperatorSpec parse_operator(const json& j, const std::string& path, double h0_shorthand_scale, bool allow_drift) {
  if (j.is_string()) {
    if (j.get<std::string>() != "h0") throw ScenarioError(path, "unknown operator name '" + j.get<std::string>() + "'");
    if (!allow_drift) throw ScenarioError(path, "the drift Hamiltonian is not allowed here");
    return OperatorSpec::from_drift(h0_shorthand_scale);
  }
  if (j.is_object()) {
    check_keys(j, path, {"h0_scale"});
    if (!allow_drift) throw ScenarioError(path, "the drift Hamiltonian is not allowed here");
    if (!j.contains("h0_scale")) throw ScenarioError(key_path(path, "h0_scale"), "required");
    return OperatorSpec::from_drift(get_number(j.at("h0_scale"), key_path(path, "h0_scale")));
  }
  if (!j.is_array()) throw ScenarioError(path, "expected [cx, cy, cz, cid], a complex matrix, or \"h0\"");
  OperatorSpec spec;
  if (j.size() == 4 && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number(); })) {
    for (std::size_t i = 0; i < 4; ++i) spec.pauli[i] = get_number(j[i], index_path(path, i));
    return spec;
  }
  spec.kind = OperatorSpec::Kind::matrix;
  spec.matrix = parse_matrix(j, path);
  try {
    (void)HermitianOperatord(spec.matrix);
  } catch (const ValueError& e) {
    throw ScenarioError(path, e.what());
  }
  return spec;
}

ordered_json operator_json(const OperatorSpec& s) {
  switch (s.kind) {
    case OperatorSpec::Kind::pauli:
      return ordered_json::array({s.pauli[0], s.pauli[1], s.pauli[2], s.pauli[3]});
    case OperatorSpec::Kind::matrix:
      return matrix_json(s.matrix);
    case OperatorSpec::Kind::drift:
      return ordered_json{{"h0_scale", s.drift_scale}};
  }
  return {};
}

bool same_matrix(const CMatrix<double>& a, const CMatrix<double>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

const char* schedule_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::linear:
      return "linear";
    case ScheduleKind::smoothstep:
      return "smoothstep";
    case ScheduleKind::polyline:
      return "polyline";
  }
  return "linear";
}

const char* regularization_name(Regularization r) { return r == Regularization::smooth ? "smooth" : "hold_last"; }

const char* chart_name(ChartKind c) {
  switch (c) {
    case ChartKind::none:
      return "none";
    case ChartKind::fidelity:
      return "fidelity";
    case ChartKind::spectrum:
      return "spectrum";
  }
  return "none";
}

std::string read_file(const std::filesystem::path& p, const std::string& path) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ScenarioError(path, "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelSpec parse_model(const json& j, const std::string& path, const std::string& base_dir) {
  ModelSpec m;
  if (j.contains("preset")) {
    check_keys(j, path, {"preset", "mu_b0", "theta", "omega"});
    const std::string name = string_or(j, "preset", path, "");
    if (name != "fig1") throw ScenarioError(key_path(path, "preset"), "unknown model preset '" + name + "'");
    m.rotating = fig1_model<double>();
  } else {
    const std::string type = string_or(j, "type", path, "rotating");
    if (type == "rotating") {
      check_keys(j, path, {"type", "mu_b0", "theta", "omega"});
    } else if (type == "interpolated") {
      check_keys(j, path, {"type", "h_i", "h_f", "schedule", "total_time"});
      m.kind = ModelSpec::Kind::interpolated;
      for (const char* key : {"h_i", "h_f"})
        if (!j.contains(key)) throw ScenarioError(key_path(path, key), "required");
      m.h_i = parse_operator(j.at("h_i"), key_path(path, "h_i"), 1, false);
      m.h_f = parse_operator(j.at("h_f"), key_path(path, "h_f"), 1, false);
      m.total_time = number_or(j, "total_time", path, 3);
      if (j.contains("schedule")) {
        const std::string sp = key_path(path, "schedule");
        const auto& s = j.at("schedule");
        check_keys(s, sp, {"kind", "knots"});
        const std::string kind = string_or(s, "kind", sp, "linear");
        if (kind == "linear") m.schedule.kind = ScheduleKind::linear;
        else if (kind == "smoothstep") m.schedule.kind = ScheduleKind::smoothstep;
        else if (kind == "polyline") m.schedule.kind = ScheduleKind::polyline;
        else throw ScenarioError(key_path(sp, "kind"), "unknown schedule '" + kind + "'");
        if (s.contains("knots")) {
          const std::string kp = key_path(sp, "knots");
          if (m.schedule.kind != ScheduleKind::polyline) throw ScenarioError(kp, "knots apply to polyline only");
          if (!s.at("knots").is_array()) throw ScenarioError(kp, "expected an array of [t, lambda] pairs");
          std::size_t i = 0;
          for (const auto& k : s.at("knots")) {
            const std::string ip = index_path(kp, i++);
            if (!k.is_array() || k.size() != 2) throw ScenarioError(ip, "expected [t, lambda]");
            m.schedule.knots.emplace_back(get_number(k[0], ip), get_number(k[1], ip));
          }
        }
      }
      try {
        if (m.h_i.to_operator().dim() != m.h_f.to_operator().dim())
          throw ScenarioError(path, "h_i and h_f differ in dimension");
        (void)m.build();
      } catch (const ScenarioError&) {
        throw;
      } catch (const ValueError& e) {
        throw ScenarioError(path, e.what());
      }
      return m;
    } else if (type == "tabulated") {
      check_keys(j, path, {"type", "file", "times", "matrices"});
      m.kind = ModelSpec::Kind::tabulated;
      json data;
      if (j.contains("file")) {
        if (j.contains("times") || j.contains("matrices"))
          throw ScenarioError(path, "give either 'file' or inline 'times'/'matrices', not both");
        std::filesystem::path file = string_or(j, "file", path, "");
        if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
        try {
          m.tabulated = load_tabulated_model(read_file(file, key_path(path, "file")));
        } catch (const ScenarioError&) {
          throw;
        } catch (const ValueError& e) {
          throw ScenarioError(key_path(path, "file"), e.what());
        }
      } else {
        if (!j.contains("times") || !j.contains("matrices"))
          throw ScenarioError(path, "tabulated model needs 'file' or both 'times' and 'matrices'");
        try {
          m.tabulated = load_tabulated_model(json{{"times", j.at("times")}, {"matrices", j.at("matrices")}}.dump());
        } catch (const ValueError& e) {
          throw ScenarioError(path, e.what());
        }
      }
      return m;
    } else {
      throw ScenarioError(key_path(path, "type"), "unknown model type '" + type + "'");
    }
  }
  m.rotating.mu_b0 = number_or(j, "mu_b0", path, m.rotating.mu_b0);
  m.rotating.theta = number_or(j, "theta", path, m.rotating.theta);
  m.rotating.omega = number_or(j, "omega", path, m.rotating.omega);
  try {
    m.rotating.validate();
  } catch (const ValueError& e) {
    throw ScenarioError(path, e.what());
  }
  return m;
}

ordered_json model_json(const ModelSpec& m) {
  switch (m.kind) {
    case ModelSpec::Kind::rotating:
      return {{"type", "rotating"}, {"mu_b0", m.rotating.mu_b0}, {"theta", m.rotating.theta},
              {"omega", m.rotating.omega}};
    case ModelSpec::Kind::interpolated: {
      ordered_json sched{{"kind", schedule_name(m.schedule.kind)}};
      if (m.schedule.kind == ScheduleKind::polyline) {
        ordered_json knots = ordered_json::array();
        for (const auto& [t, l] : m.schedule.knots) knots.push_back({t, l});
        sched["knots"] = knots;
      }
      return {{"type", "interpolated"}, {"h_i", operator_json(m.h_i)}, {"h_f", operator_json(m.h_f)},
              {"schedule", sched}, {"total_time", m.total_time}};
    }
    case ModelSpec::Kind::tabulated: {
      ordered_json mats = ordered_json::array();
      for (const auto& mat : m.tabulated.matrices) mats.push_back(matrix_json(mat));
      return {{"type", "tabulated"}, {"times", m.tabulated.times}, {"matrices", mats}};
    }
  }
  return {};
}

Regularization parse_regularization(const json& j, const std::string& path) {
  const std::string name = string_or(j, "regularization", path, "hold_last");
  if (name == "hold_last") return Regularization::hold_last;
  if (name == "smooth") return Regularization::smooth;
  throw ScenarioError(key_path(path, "regularization"), "expected \"hold_last\" or \"smooth\"");
}

std::vector<OperatorSpec> parse_controls(const json& j, const std::string& path, double h0_scale) {
  const std::string cp = key_path(path, "controls");
  const auto& arr = j.at("controls");
  if (!arr.is_array() || arr.empty()) throw ScenarioError(cp, "expected a non-empty array of operators");
  std::vector<OperatorSpec> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(parse_operator(arr[i], index_path(cp, i), h0_scale, true));
  return out;
}

SchemeSpec parse_scheme(const json& j, const std::string& path, const ModelSpec& model) {
  SchemeSpec s;
  require_object(j, path);
  const std::string type = string_or(j, "type", path, "none");
  const double h0_scale = model.kind == ModelSpec::Kind::rotating ? 1.0 / model.rotating.mu_b0 : 1.0;
  if (type == "none") {
    check_keys(j, path, {"type"});
    return s;
  }
  if (type == "A") {
    check_keys(j, path,
               {"type", "X", "controls", "pivot", "sign", "epsilon", "f_max", "regularization", "combined", "strict"});
    s.kind = SchemeSpec::Kind::a;
    if (!j.contains("X")) throw ScenarioError(key_path(path, "X"), "required for scheme A");
    s.x_op = parse_operator(j.at("X"), key_path(path, "X"), h0_scale, false);
    if (j.contains("controls")) s.controls = parse_controls(j, path, h0_scale);
    else s.controls = {OperatorSpec::from_drift(h0_scale)};
    s.sign = int_or(j, "sign", path, -1);
    if (s.sign != 1 && s.sign != -1) throw ScenarioError(key_path(path, "sign"), "must be +1 or -1");
    s.combined = bool_or(j, "combined", path, false);
    s.strict = bool_or(j, "strict", path, false);
    if (s.combined && s.controls.size() != 1)
      throw ScenarioError(key_path(path, "controls"), "combined form takes exactly one control");
  } else if (type == "B") {
    check_keys(j, path, {"type", "controls", "pivot", "target_level", "epsilon", "f_max", "regularization"});
    s.kind = SchemeSpec::Kind::b;
    if (!j.contains("controls")) throw ScenarioError(key_path(path, "controls"), "required for scheme B");
    s.controls = parse_controls(j, path, h0_scale);
    s.target_level = int_or(j, "target_level", path, 0);
  } else {
    throw ScenarioError(key_path(path, "type"), "expected \"none\", \"A\" or \"B\"");
  }
  s.pivot = int_or(j, "pivot", path, 0);
  if (s.pivot < 0 || std::size_t(s.pivot) >= s.controls.size())
    throw ScenarioError(key_path(path, "pivot"), "pivot index out of range");
  s.epsilon = number_or(j, "epsilon", path, 1e-6);
  if (!(s.epsilon > 0)) throw ScenarioError(key_path(path, "epsilon"), "must be positive");
  s.f_max = number_or(j, "f_max", path, 1e3);
  if (!(s.f_max > 0)) throw ScenarioError(key_path(path, "f_max"), "must be positive");
  s.regularization = parse_regularization(j, path);
  return s;
}

ordered_json scheme_json(const SchemeSpec& s) {
  if (s.kind == SchemeSpec::Kind::none) return {{"type", "none"}};
  ordered_json controls = ordered_json::array();
  for (const auto& c : s.controls) controls.push_back(operator_json(c));
  ordered_json out{{"type", s.kind == SchemeSpec::Kind::a ? "A" : "B"}};
  if (s.kind == SchemeSpec::Kind::a) out["X"] = operator_json(s.x_op);
  out["controls"] = controls;
  out["pivot"] = s.pivot;
  if (s.kind == SchemeSpec::Kind::a) {
    out["sign"] = s.sign;
    out["combined"] = s.combined;
    out["strict"] = s.strict;
  } else {
    out["target_level"] = s.target_level;
  }
  out["epsilon"] = s.epsilon;
  out["f_max"] = s.f_max;
  out["regularization"] = regularization_name(s.regularization);
  return out;
}

double default_t1(const ModelSpec& m) {
  switch (m.kind) {
    case ModelSpec::Kind::rotating:
      return 3;
    case ModelSpec::Kind::interpolated:
      return m.total_time;
    case ModelSpec::Kind::tabulated:
      return m.tabulated.times.back();
  }
  return 3;
}

double default_t0(const ModelSpec& m) {
  return m.kind == ModelSpec::Kind::tabulated ? m.tabulated.times.front() : 0.0;
}

SweepParameter parse_sweep_parameter(const std::string& name, const std::string& path) {
  if (name == "R") return SweepParameter::R;
  if (name == "r") return SweepParameter::r;
  if (name == "omega") return SweepParameter::omega;
  if (name == "theta") return SweepParameter::theta;
  if (name == "dt") return SweepParameter::dt;
  throw ScenarioError(path, "unknown sweep parameter '" + name + "' (expected R, r, omega, theta or dt)");
}

// Throws ValueError when `p` cannot act on `s`.
void check_sweep_target(const Scenario& s, SweepParameter p) {
  switch (p) {
    case SweepParameter::R:
      if (s.scheme.kind != SchemeSpec::Kind::a || s.scheme.x_op.kind != OperatorSpec::Kind::pauli)
        throw ValueError("sweeping R needs scheme A with X given as [cx, cy, cz, cid]");
      break;
    case SweepParameter::r:
      if (s.scheme.kind == SchemeSpec::Kind::none || s.scheme.controls.empty() ||
          s.scheme.controls.front().kind != OperatorSpec::Kind::pauli)
        throw ValueError("sweeping r needs a first control given as [cx, cy, cz, cid]");
      break;
    case SweepParameter::omega:
    case SweepParameter::theta:
      if (s.model.kind != ModelSpec::Kind::rotating) throw ValueError("sweeping omega/theta needs the rotating model");
      break;
    case SweepParameter::dt:
      break;
  }
}

}  // namespace

HermitianOperatord OperatorSpec::to_operator() const {
  switch (kind) {
    case Kind::pauli:
      return pauli_combo<double>(pauli[0], pauli[1], pauli[2], pauli[3]);
    case Kind::matrix:
      return HermitianOperatord(matrix);
    case Kind::drift:
      break;
  }
  throw ValueError("OperatorSpec: the drift Hamiltonian has no fixed matrix");
}

ControlOperator<double> OperatorSpec::to_control() const {
  if (kind == Kind::drift) return ControlOperator<double>::scaled_drift(drift_scale);
  return ControlOperator<double>::fixed(to_operator());
}

bool operator==(const OperatorSpec& a, const OperatorSpec& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case OperatorSpec::Kind::pauli:
      return a.pauli == b.pauli;
    case OperatorSpec::Kind::matrix:
      return same_matrix(a.matrix, b.matrix);
    case OperatorSpec::Kind::drift:
      return a.drift_scale == b.drift_scale;
  }
  return false;
}

Modeld ModelSpec::build() const {
  switch (kind) {
    case Kind::rotating:
      rotating.validate();
      return rotating;
    case Kind::interpolated: {
      InterpolatedModel<double> m{h_i.to_operator(), h_f.to_operator(), schedule, total_time};
      m.validate();
      return m;
    }
    case Kind::tabulated:
      tabulated.validate();
      return tabulated;
  }
  throw ValueError("ModelSpec: unknown kind");
}

bool operator==(const ModelSpec& a, const ModelSpec& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ModelSpec::Kind::rotating:
      return a.rotating.mu_b0 == b.rotating.mu_b0 && a.rotating.theta == b.rotating.theta &&
             a.rotating.omega == b.rotating.omega;
    case ModelSpec::Kind::interpolated:
      return a.h_i == b.h_i && a.h_f == b.h_f && a.schedule.kind == b.schedule.kind &&
             a.schedule.knots == b.schedule.knots && a.total_time == b.total_time;
    case ModelSpec::Kind::tabulated:
      return a.tabulated.times == b.tabulated.times &&
             std::equal(a.tabulated.matrices.begin(), a.tabulated.matrices.end(), b.tabulated.matrices.begin(),
                        b.tabulated.matrices.end(), same_matrix);
  }
  return false;
}

Schemed SchemeSpec::build() const {
  std::vector<ControlOperator<double>> ops;
  for (const auto& c : controls) ops.push_back(c.to_control());
  switch (kind) {
    case Kind::none:
      return NoControl{};
    case Kind::a: {
      SchemeAConfigd cfg;
      cfg.x_op = x_op.to_operator();
      cfg.controls = std::move(ops);
      cfg.pivot = pivot;
      cfg.sign = sign;
      cfg.epsilon = epsilon;
      cfg.f_max = f_max;
      cfg.regularization = regularization;
      cfg.combined = combined;
      cfg.strict = strict;
      return cfg;
    }
    case Kind::b: {
      SchemeBConfigd cfg;
      cfg.controls = std::move(ops);
      cfg.pivot = pivot;
      cfg.target_level = target_level;
      cfg.epsilon = epsilon;
      cfg.f_max = f_max;
      cfg.regularization = regularization;
      return cfg;
    }
  }
  throw ValueError("SchemeSpec: unknown kind");
}

bool operator==(const Scenario& a, const Scenario& b) {
  const auto& ia = a.integrator;
  const auto& ib = b.integrator;
  return a.name == b.name && a.model == b.model && a.scheme == b.scheme && a.initial == b.initial &&
         ia.t0 == ib.t0 && ia.t1 == ib.t1 && ia.dt == ib.dt && ia.renormalize_every == ib.renormalize_every &&
         ia.record_stride == ib.record_stride && a.sweep == b.sweep && a.output == b.output;
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::R:
      return "R";
    case SweepParameter::r:
      return "r";
    case SweepParameter::omega:
      return "omega";
    case SweepParameter::theta:
      return "theta";
    case SweepParameter::dt:
      return "dt";
  }
  return "?";
}

Scenario parse_scenario(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("<root>", std::string("malformed JSON: ") + e.what());
  }
  check_keys(doc, "", {"name", "model", "scheme", "initial", "integrator", "sweep", "output"});

  Scenario s;
  s.name = string_or(doc, "name", "", "scenario");
  if (doc.contains("model")) s.model = parse_model(doc.at("model"), "model", base_dir);
  if (doc.contains("scheme")) s.scheme = parse_scheme(doc.at("scheme"), "scheme", s.model);

  const Eigen::Index dim = model_dim(s.model.build());
  auto check_dim = [&](const OperatorSpec& op, const std::string& path) {
    if (op.kind != OperatorSpec::Kind::drift && op.to_operator().dim() != dim)
      throw ScenarioError(path, "operator dimension " + std::to_string(op.to_operator().dim()) +
                                    " does not match the model dimension " + std::to_string(dim));
  };
  if (s.scheme.kind == SchemeSpec::Kind::a) check_dim(s.scheme.x_op, "scheme.X");
  for (std::size_t i = 0; i < s.scheme.controls.size(); ++i)
    check_dim(s.scheme.controls[i], index_path("scheme.controls", i));
  if (s.scheme.kind == SchemeSpec::Kind::b && (s.scheme.target_level < 0 || s.scheme.target_level >= dim))
    throw ScenarioError("scheme.target_level", "level out of range");

  if (doc.contains("initial")) {
    const auto& j = doc.at("initial");
    check_keys(j, "initial", {"level", "amplitudes"});
    if (j.contains("level") == j.contains("amplitudes"))
      throw ScenarioError("initial", "give exactly one of 'level' or 'amplitudes'");
    if (j.contains("level")) {
      s.initial.level = int_or(j, "level", "initial", 0);
      if (*s.initial.level < 0 || *s.initial.level >= dim) throw ScenarioError("initial.level", "level out of range");
    } else {
      s.initial.level.reset();
      const auto& arr = j.at("amplitudes");
      if (!arr.is_array() || Eigen::Index(arr.size()) != dim)
        throw ScenarioError("initial.amplitudes", "expected " + std::to_string(dim) + " [re, im] pairs");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ip = index_path("initial.amplitudes", i);
        if (!arr[i].is_array() || arr[i].size() != 2) throw ScenarioError(ip, "expected [re, im]");
        s.initial.amplitudes.emplace_back(get_number(arr[i][0], ip), get_number(arr[i][1], ip));
      }
      double norm2 = 0;
      for (const auto& a : s.initial.amplitudes) norm2 += std::norm(a);
      if (!(norm2 > 1e-28)) throw ScenarioError("initial.amplitudes", "state vector is zero");
    }
  }

  s.integrator.t0 = default_t0(s.model);
  s.integrator.t1 = default_t1(s.model);
  if (doc.contains("integrator")) {
    const auto& j = doc.at("integrator");
    check_keys(j, "integrator", {"t0", "t1", "dt", "renormalize_every"});
    s.integrator.t0 = number_or(j, "t0", "integrator", s.integrator.t0);
    s.integrator.t1 = number_or(j, "t1", "integrator", s.integrator.t1);
    s.integrator.dt = number_or(j, "dt", "integrator", s.integrator.dt);
    s.integrator.renormalize_every = int_or(j, "renormalize_every", "integrator", 0);
  }

  if (doc.contains("output")) {
    const auto& j = doc.at("output");
    check_keys(j, "output", {"directory", "stride", "chart", "state_dump"});
    s.output.directory = string_or(j, "directory", "output", "");
    s.integrator.record_stride = int_or(j, "stride", "output", s.integrator.record_stride);
    const std::string chart = string_or(j, "chart", "output", "fidelity");
    if (chart == "none") s.output.chart = ChartKind::none;
    else if (chart == "fidelity") s.output.chart = ChartKind::fidelity;
    else if (chart == "spectrum") s.output.chart = ChartKind::spectrum;
    else throw ScenarioError("output.chart", "expected \"none\", \"fidelity\" or \"spectrum\"");
    s.output.state_dump = bool_or(j, "state_dump", "output", false);
  }
  try {
    (void)s.integrator.steps();
  } catch (const ValueError& e) {
    throw ScenarioError("integrator", e.what());
  }
  if (s.model.kind != ModelSpec::Kind::rotating &&
      (s.integrator.t0 < default_t0(s.model) || s.integrator.t1 > default_t1(s.model)))
    throw ScenarioError("integrator", "time window lies outside the model's domain");

  if (doc.contains("sweep")) {
    const auto& j = doc.at("sweep");
    check_keys(j, "sweep", {"parameter", "values"});
    if (!j.contains("parameter")) throw ScenarioError("sweep.parameter", "required");
    SweepSpec sw;
    sw.parameter = parse_sweep_parameter(string_or(j, "parameter", "sweep", ""), "sweep.parameter");
    if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty())
      throw ScenarioError("sweep.values", "expected a non-empty array of numbers");
    for (std::size_t i = 0; i < j.at("values").size(); ++i)
      sw.values.push_back(get_number(j.at("values")[i], index_path("sweep.values", i)));
    for (std::size_t i = 0; i < sw.values.size(); ++i)
      for (std::size_t k = 0; k < i; ++k)
        if (sw.values[k] == sw.values[i]) throw ScenarioError(index_path("sweep.values", i), "duplicate value");
    try {
      check_sweep_target(s, sw.parameter);
      for (double v : sw.values) (void)apply_sweep_value(s, sw.parameter, v).integrator.steps();
    } catch (const ValueError& e) {
      throw ScenarioError("sweep", e.what());
    }
    s.sweep = std::move(sw);
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json initial;
  if (s.initial.level) {
    initial["level"] = *s.initial.level;
  } else {
    ordered_json amps = ordered_json::array();
    for (const auto& a : s.initial.amplitudes) amps.push_back({a.real(), a.imag()});
    initial["amplitudes"] = amps;
  }
  ordered_json doc{{"name", s.name},
           {"model", model_json(s.model)},
           {"scheme", scheme_json(s.scheme)},
           {"initial", initial},
           {"integrator",
            {{"t0", s.integrator.t0},
             {"t1", s.integrator.t1},
             {"dt", s.integrator.dt},
             {"renormalize_every", s.integrator.renormalize_every}}},
           {"output",
            {{"directory", s.output.directory},
             {"stride", s.integrator.record_stride},
             {"chart", chart_name(s.output.chart)},
             {"state_dump", s.output.state_dump}}}};
  if (s.sweep) doc["sweep"] = {{"parameter", to_string(s.sweep->parameter)}, {"values", s.sweep->values}};
  return doc.dump(2) + "\n";
}

Scenario apply_sweep_value(const Scenario& s, SweepParameter p, double value) {
  check_sweep_target(s, p);
  Scenario out = s;
  out.sweep.reset();
  switch (p) {
    case SweepParameter::R:
      out.scheme.x_op.pauli[2] = value;
      break;
    case SweepParameter::r:
      out.scheme.controls.front().pauli[0] = value;
      break;
    case SweepParameter::omega:
      out.model.rotating.omega = value;
      break;
    case SweepParameter::theta:
      out.model.rotating.theta = value;
      out.model.rotating.validate();
      break;
    case SweepParameter::dt:
      out.integrator.dt = value;
      break;
  }
  return out;
}

StateVectord initial_state(const Scenario& s, const Modeld& model) {
  if (s.initial.level) return StateVectord::normalized(frame_at(model, s.integrator.t0).state(*s.initial.level));
  CVector<double> v(Eigen::Index(s.initial.amplitudes.size()));
  for (std::size_t i = 0; i < s.initial.amplitudes.size(); ++i) v(Eigen::Index(i)) = s.initial.amplitudes[i];
  return StateVectord::normalized(v);
}

}  // namespace adiactl
