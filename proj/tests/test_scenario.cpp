#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "adiactl/presets.hpp"
#include "adiactl/scenario.hpp"

using namespace adiactl;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

void expect_round_trip(const Scenario& s) {
  const std::string echo = scenario_to_json(s);
  const Scenario back = parse_scenario(echo);
  EXPECT_TRUE(back == s) << echo;
  EXPECT_EQ(scenario_to_json(back), echo);
}

}  // namespace

TEST(ParseScenario, DefaultsApplied) {
  const Scenario s = parse_scenario("{}");
  EXPECT_EQ(s.model.kind, ModelSpec::Kind::rotating);
  EXPECT_EQ(s.model.rotating.mu_b0, 1.0);
  EXPECT_EQ(s.integrator.dt, 1e-3);
  EXPECT_EQ(s.integrator.t0, 0.0);
  EXPECT_EQ(s.integrator.t1, 3.0);
  EXPECT_EQ(s.integrator.record_stride, 10);
  EXPECT_EQ(s.scheme.kind, SchemeSpec::Kind::none);
  EXPECT_EQ(s.initial.level, 0);
  EXPECT_FALSE(s.sweep);
}

TEST(ParseScenario, Fig1PanelA) {
  const Scenario s =
      parse_scenario(R"({"model":{"preset":"fig1"},"scheme":{"type":"A","X":[1,0,12,0],"combined":true}})");
  EXPECT_EQ(s.model.rotating.omega, 4.0);
  EXPECT_EQ(s.model.rotating.theta, std::numbers::pi / 4);
  EXPECT_EQ(s.scheme.kind, SchemeSpec::Kind::a);
  EXPECT_TRUE(s.scheme.combined);
  EXPECT_TRUE(s.scheme.x_op == OperatorSpec::from_pauli(1, 0, 12, 0));
  ASSERT_EQ(s.scheme.controls.size(), 1u);
  EXPECT_TRUE(s.scheme.controls[0] == OperatorSpec::from_drift(1.0));
  const Scenario p = preset("fig1_a");
  EXPECT_TRUE(s.model == p.model);
  EXPECT_TRUE(s.scheme.x_op == p.scheme.x_op);
  EXPECT_TRUE(s.scheme.controls == p.scheme.controls);
}

TEST(ParseScenario, BaselineMatchesPreset) {
  const Scenario s = parse_scenario(R"({"name":"fig1_baseline","model":{"preset":"fig1"},"scheme":{"type":"none"}})");
  EXPECT_TRUE(s == preset("fig1_baseline"));
}

TEST(ParseScenario, DriftShorthandFollowsMuB0) {
  const Scenario s = parse_scenario(R"({"model":{"type":"rotating","mu_b0":2},"scheme":{"type":"A","X":[1,0,0,0]}})");
  EXPECT_EQ(s.scheme.controls[0].drift_scale, 0.5);
}

TEST(ParseScenario, UnknownKeysNameTheirPath) {
  EXPECT_NE(error_of(R"({"schme":{}})").find("schme"), std::string::npos);
  const std::string nested = error_of(R"({"scheme":{"type":"A","X":[1,0,0,0],"sigh":1}})");
  EXPECT_EQ(nested.rfind("scheme.sigh", 0), 0u) << nested;
  EXPECT_EQ(error_of(R"({"output":{"colour":"red"}})").rfind("output.colour", 0), 0u);
}

TEST(ParseScenario, NonHermitianOperator) {
  const std::string e = error_of(R"({"scheme":{"type":"B","controls":[[[[0,0],[1,0]],[[0,0],[0,0]]]]}})");
  EXPECT_EQ(e.rfind("scheme.controls[0]", 0), 0u) << e;
  EXPECT_NE(e.find("adjoint"), std::string::npos) << e;
}

TEST(ParseScenario, MalformedMatrix) {
  const std::string e = error_of(R"({"scheme":{"type":"B","controls":[[[[0,0],[1,0]],[[1,0]]]]}})");
  EXPECT_EQ(e.rfind("scheme.controls[0][1]", 0), 0u) << e;
  const std::string f = error_of(R"({"scheme":{"type":"B","controls":[[[[0,0],[1]],[[1,0],[0,0]]]]}})");
  EXPECT_EQ(f.rfind("scheme.controls[0][0][1]", 0), 0u) << f;
}

TEST(ParseScenario, EmptySweep) {
  const std::string e = error_of(R"({"scheme":{"type":"A","X":[1,0,0,0]},"sweep":{"parameter":"R","values":[]}})");
  EXPECT_EQ(e.rfind("sweep.values", 0), 0u) << e;
}

TEST(ParseScenario, OtherValidationErrors) {
  EXPECT_EQ(error_of("{").rfind("<root>", 0), 0u);
  EXPECT_EQ(error_of(R"({"integrator":{"dt":0.7}})").rfind("integrator", 0), 0u);
  EXPECT_EQ(error_of(R"({"scheme":{"type":"C"}})").rfind("scheme.type", 0), 0u);
  EXPECT_EQ(error_of(R"({"scheme":{"type":"B"}})").rfind("scheme.controls", 0), 0u);
  EXPECT_EQ(error_of(R"({"scheme":{"type":"A","X":[1,0,0,0],"sign":2}})").rfind("scheme.sign", 0), 0u);
  EXPECT_EQ(error_of(R"({"scheme":{"type":"A","X":[1,0,0,0],"pivot":1}})").rfind("scheme.pivot", 0), 0u);
  EXPECT_EQ(error_of(R"({"initial":{"level":2}})").rfind("initial.level", 0), 0u);
  EXPECT_EQ(error_of(R"({"initial":{"amplitudes":[[0,0],[0,0]]}})").rfind("initial.amplitudes", 0), 0u);
  EXPECT_EQ(error_of(R"({"model":{"type":"rotating","theta":5}})").rfind("model", 0), 0u);
  EXPECT_EQ(error_of(R"({"sweep":{"parameter":"R","values":[1]}})").rfind("sweep", 0), 0u);
  EXPECT_EQ(error_of(R"({"sweep":{"parameter":"q","values":[1]}})").rfind("sweep.parameter", 0), 0u);
  EXPECT_EQ(error_of(R"({"scheme":{"type":"A","X":[1,0,0,0]},"sweep":{"parameter":"R","values":[1,1]}})")
                .rfind("sweep.values[1]", 0),
            0u);
  EXPECT_EQ(error_of(R"({"scheme":{"type":"B","controls":[[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]]}})")
                .rfind("scheme.controls[0]", 0),
            0u);
}

TEST(ParseScenario, InterpolatedDefaultsWindowToSchedule) {
  const Scenario s = parse_scenario(
      R"({"model":{"type":"interpolated","h_i":[1,0,0,0],"h_f":[0,0,1,0],"total_time":5,
          "schedule":{"kind":"polyline","knots":[[0,0],[2,0.5],[5,1]]}}})");
  EXPECT_EQ(s.integrator.t1, 5.0);
  EXPECT_EQ(s.model.schedule.knots.size(), 3u);
  EXPECT_EQ(error_of(R"({"model":{"type":"interpolated","h_i":[1,0,0,0],"h_f":[0,0,1,0]},"integrator":{"t1":4}})")
                .rfind("integrator", 0),
            0u);
}

TEST(ParseScenario, TabulatedFromFileRelativeToBase) {
  const auto dir = std::filesystem::temp_directory_path() / "adiactl_tab_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "h.json");
    out << R"({"times":[0,1,2],"matrices":[[[[1,0],[0,0]],[[0,0],[-1,0]]],[[[0,0],[1,0]],[[1,0],[0,0]]],[[[1,0],[0,0]],[[0,0],[-1,0]]]]})";
  }
  const Scenario s = parse_scenario(R"({"model":{"type":"tabulated","file":"h.json"}})", dir.string());
  EXPECT_EQ(s.model.kind, ModelSpec::Kind::tabulated);
  EXPECT_EQ(s.integrator.t1, 2.0);
  expect_round_trip(s);
  EXPECT_EQ(error_of(R"({"model":{"type":"tabulated","file":"/nonexistent/h.json"}})").rfind("model.file", 0), 0u);
}

TEST(RoundTrip, AllPresets) {
  for (const auto& p : preset_list()) expect_round_trip(preset(p.name));
}

TEST(RoundTrip, HandWritten) {
  for (const char* text : {
           R"({"name":"x","model":{"type":"rotating","mu_b0":1.5,"theta":0.3,"omega":-2},
               "scheme":{"type":"A","X":[[[1,0],[0,1]],[[0,-1],[2,0]]],"controls":["h0",[0,0,1,0.25]],
                         "pivot":1,"sign":1,"epsilon":0.01,"f_max":50,"regularization":"smooth","strict":false},
               "initial":{"amplitudes":[[0.6,0],[0,0.8]]},
               "integrator":{"t0":0.5,"t1":1.5,"dt":0.01,"renormalize_every":7},
               "output":{"directory":"out/x","stride":3,"chart":"spectrum","state_dump":true}})",
           R"({"model":{"type":"interpolated","h_i":[[[1,0],[0,0]],[[0,0],[-1,0]]],"h_f":[1,0,0,0],
               "schedule":{"kind":"smoothstep"},"total_time":2},
               "scheme":{"type":"B","controls":[[1,1,0,0]],"target_level":1},
               "sweep":{"parameter":"dt","values":[0.01,0.001]}})",
           R"({"model":{"type":"tabulated","times":[0,0.5,1],"matrices":[[[[1,0],[0,0]],[[0,0],[-1,0]]],
               [[[0,0],[1,0]],[[1,0],[0,0]]],[[[1,0],[0,0]],[[0,0],[-1,0]]]]}})",
           R"({"scheme":{"type":"A","X":[1,0,3,0],"combined":true},"sweep":{"parameter":"R","values":[3,0,1e-7]}})"}) {
    expect_round_trip(parse_scenario(text));
  }
}

// Random valid scenarios built field by field.
TEST(RoundTrip, RandomScenarios) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    Scenario s;
    s.name = "random_" + std::to_string(trial);
    s.model.rotating = {std::abs(u(rng)) + 0.1, std::abs(u(rng)), u(rng)};
    const int kind = pick(rng);
    auto random_op = [&] { return OperatorSpec::from_pauli(u(rng), u(rng), u(rng), u(rng)); };
    if (kind == 1) {
      s.scheme.kind = SchemeSpec::Kind::a;
      s.scheme.x_op = random_op();
      s.scheme.controls = {OperatorSpec::from_drift(u(rng)), random_op()};
      s.scheme.sign = trial % 2 ? 1 : -1;
      s.scheme.pivot = trial % 2;
    } else if (kind == 2) {
      s.scheme.kind = SchemeSpec::Kind::b;
      s.scheme.controls = {random_op()};
      s.scheme.epsilon = std::abs(u(rng)) + 1e-9;
      s.scheme.regularization = trial % 2 ? Regularization::smooth : Regularization::hold_last;
    }
    s.integrator.dt = 3.0 / (10 + trial);
    s.integrator.record_stride = 1 + trial % 5;
    if (trial % 3 == 0) {
      s.initial.level.reset();
      s.initial.amplitudes = {{u(rng), u(rng)}, {u(rng), u(rng)}};
    }
    if (kind == 1 && trial % 4 == 1) s.sweep = SweepSpec{SweepParameter::R, {u(rng), u(rng) + 10}};
    s.output.chart = ChartKind(trial % 3);
    expect_round_trip(s);
  }
}

TEST(ApplySweepValue, EachParameter) {
  const Scenario a = preset("fig1_a");
  EXPECT_EQ(apply_sweep_value(a, SweepParameter::R, 3).scheme.x_op.pauli[2], 3.0);
  EXPECT_EQ(apply_sweep_value(a, SweepParameter::omega, 2).model.rotating.omega, 2.0);
  EXPECT_EQ(apply_sweep_value(a, SweepParameter::theta, 0.5).model.rotating.theta, 0.5);
  EXPECT_EQ(apply_sweep_value(a, SweepParameter::dt, 1e-3).integrator.dt, 1e-3);
  EXPECT_THROW(apply_sweep_value(a, SweepParameter::theta, 4), ValueError);
  const Scenario b = preset("fig2_a");
  EXPECT_EQ(apply_sweep_value(b, SweepParameter::r, 6).scheme.controls[0].pauli[0], 6.0);
  EXPECT_THROW(apply_sweep_value(b, SweepParameter::R, 1), ValueError);
  EXPECT_FALSE(apply_sweep_value(preset("fig1_sweep"), SweepParameter::R, 1).sweep);
}

TEST(Presets, NamesAndParameters) {
  const double big_r[] = {12, 9, 6, 3, 0};
  const double small_r[] = {0, 2, 4, 6, 8};
  const char panels[] = "abcde";
  for (int i = 0; i < 5; ++i) {
    const Scenario f1 = preset(std::string("fig1_") + panels[i]);
    EXPECT_EQ(f1.scheme.x_op.pauli[2], big_r[i]);
    EXPECT_EQ(f1.scheme.sign, 1);
    const Scenario f2 = preset(std::string("fig2_") + panels[i]);
    EXPECT_EQ(f2.scheme.controls[0].pauli[0], small_r[i]);
    EXPECT_EQ(f2.scheme.controls[0].pauli[1], 1.0);
  }
  EXPECT_EQ(preset("fig3").output.chart, ChartKind::spectrum);
  EXPECT_THROW(preset("fig9"), ScenarioError);
}
