#include <catch_amalgamated.hpp>

#include <filesystem>
#include <string>

#include "focksmith/herald.hpp"
#include "focksmith/io.hpp"
#include "focksmith/photon_stats.hpp"
#include "focksmith/plan.hpp"
#include "focksmith/runner.hpp"
#include "focksmith/states.hpp"
#include "focksmith/types.hpp"

using namespace focksmith;

namespace {

std::string fixture(const std::string& name) {
  return read_text_file(std::string(FOCKSMITH_FIXTURES_DIR) + "/" + name);
}

std::string plan_file(const std::string& name) {
  return read_text_file(std::string(FOCKSMITH_PLANS_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("parse and print are inverse at the typed level") {
  const std::string text = R"(
seed 99
space { modes 3 cutoff 9 }
input { mode 0 kind coherent alpha_re 0.4 alpha_im -0.1 }
input { mode 1 kind fock n 1 }
stage { op beam_splitter tau 0.5 mode_a 1 mode_b 2 }
stage { op phase_rotation theta 1.25 mode 0 }
stage { op displacement alpha_re 0.2 mode 2 }
stage { op single_mode_squeeze zeta 0.05 mode 2 }
stage { op two_mode_squeeze zeta 0.1 mode_a 0 mode_b 1 }
stage { op pure_loss eta 0.9 mode 0 }
stage { op subtract_physical mode 0 reflectivity 0.05
        detector { kind on_off efficiency 0.8 dark_rate 0.001 } }
stage { op herald when { mode 2 n 0 } }
stage { op apply_ideal term { coeff_re 1 mode 0 kind add }
        term { coeff_re -1 mode 1 kind add } }
measure { kind mean_photon mode 0 }
measure { kind photon_statistics mode 1 }
measure { kind purity }
measure { kind log_negativity side_a 0 }
measure { kind fidelity_with target { kind epr lambda 0.2 } }
measure { kind wigner mode 0 file wig.txt half_width 5 points 101 }
measure { kind homodyne_samples mode 0 phases 6 n_per_phase 10 file h.txt }
)";
  const CircuitPlan plan = parse_plan(text);
  const std::string canonical = print_plan(plan);
  const CircuitPlan reparsed = parse_plan(canonical);
  REQUIRE(plan == reparsed);
  // The canonical form is a fixed point of parse-then-print.
  REQUIRE(print_plan(reparsed) == canonical);

  REQUIRE(plan.space.modes == 3);
  REQUIRE(plan.seed == 99);
  REQUIRE(plan.inputs.size() == 2);
  REQUIRE(plan.inputs[1].spec.kind == StateKind::fock);
  REQUIRE(plan.stages.size() == 9);
  REQUIRE(plan.measurements.size() == 7);
  REQUIRE(final_mode_count(plan) == 2);  // one herald consumes one mode
}

TEST_CASE("every fixture reports its error position") {
  struct Case {
    const char* name;
    int line;
    int column;
    const char* needle;
  };
  const Case cases[] = {
      {"bad_brace.plan", 2, 7, "unclosed '{'"},
      {"bad_missing.plan", 2, 7, "missing required parameter 'tau'"},
      {"bad_mode.plan", 2, 41, "out of range"},
      {"bad_op.plan", 2, 9, "unknown op"},
      {"bad_value.plan", 2, 7, "'x_lo' must be strictly below 'x_hi'"},
  };
  for (const Case& c : cases) {
    const std::string text = fixture(c.name);
    try {
      parse_plan(text);
      FAIL("expected a plan error for " << c.name);
    } catch (const PlanError& err) {
      REQUIRE(err.line() == c.line);
      REQUIRE(err.column() == c.column);
      REQUIRE(std::string(err.what()).find(c.needle) != std::string::npos);
    }
  }
}

TEST_CASE("plan validation rules") {
  // Duplicate input mode.
  REQUIRE_THROWS_AS(parse_plan("space { modes 2 cutoff 6 }\n"
                               "input { mode 0 kind fock n 1 }\n"
                               "input { mode 0 kind vacuum }\n"),
                    PlanError);
  // Two-mode input overlapping another binding.
  REQUIRE_THROWS_AS(parse_plan("space { modes 2 cutoff 6 }\n"
                               "input { mode 0 kind epr lambda 0.2 }\n"
                               "input { mode 1 kind fock n 1 }\n"),
                    PlanError);
  // Herald may not consume every mode.
  REQUIRE_THROWS_AS(parse_plan("space { modes 1 cutoff 6 }\n"
                               "stage { op herald when { mode 0 n 0 } }\n"),
                    PlanError);
  // Unknown parameter.
  REQUIRE_THROWS_AS(parse_plan("space { modes 1 cutoff 6 }\n"
                               "stage { op pure_loss mode 0 eta 0.5 gain 2 }\n"),
                    PlanError);
  // Duplicate output file.
  REQUIRE_THROWS_AS(parse_plan("space { modes 1 cutoff 6 }\n"
                               "measure { kind save_state file out.state }\n"
                               "measure { kind wigner mode 0 file out.state }\n"),
                    PlanError);
  // herald_fock must open the plan and own the space.
  REQUIRE_THROWS_AS(parse_plan("space { modes 1 cutoff 6 }\n"
                               "stage { op phase_rotation theta 1 mode 0 }\n"
                               "stage { op herald_fock k 1 lambda 0.2 tree_depth 0 }\n"),
                    PlanError);
  // fidelity_with target must span the surviving modes.
  REQUIRE_THROWS_AS(parse_plan("space { modes 2 cutoff 6 }\n"
                               "measure { kind fidelity_with target { kind fock n 1 } }\n"),
                    PlanError);
  // A mixed target state is rejected for fidelity_with.
  REQUIRE_THROWS_AS(parse_plan("space { modes 1 cutoff 6 }\n"
                               "measure { kind fidelity_with target { kind thermal nbar 0.4 } }\n"),
                    PlanError);
}

TEST_CASE("runner reproduces direct module calls bit for bit") {
  // The plan pipeline must not introduce any numerical difference over
  // calling the modules directly.
  const std::string text =
      "seed 3\n"
      "space { modes 1 cutoff 14 }\n"
      "input { mode 0 kind coherent alpha_re 0.8 }\n"
      "stage { op subtract_physical mode 0 reflectivity 0.1\n"
      "        detector { kind on_off efficiency 0.9 } }\n"
      "measure { kind mean_photon mode 0 }\n";
  const CircuitPlan plan = parse_plan(text);
  const RunReport report = execute_plan(plan);

  StateSpec spec;
  spec.kind = StateKind::coherent;
  spec.alpha = cplx(0.8, 0.0);
  const State coh = make_state(spec, ModeSpace(1, 14));
  const HeraldOutcome direct =
      subtract_physical(coh, 0, 0.1, DetectorModel::on_off(0.9));

  REQUIRE(report.metrics.get_double("s0_subtract_physical_probability") ==
          direct.probability);
  REQUIRE(report.metrics.get_double("m0_mean_photon") == mean_photon(direct.state, 0));
}

TEST_CASE("runner executes the bundled example plans") {
  const CircuitPlan scissors = parse_plan(plan_file("scissors.plan"));
  const RunReport report = execute_plan(scissors);
  // Heralded success probability matches the closed form
  // e^{-alpha^2} (1 + alpha^2) / 4 for the truncated alpha = 0.3 input.
  const double alpha = 0.3;
  const double expected =
      std::exp(-alpha * alpha) * (1.0 + alpha * alpha) / 4.0;
  REQUIRE(std::abs(report.metrics.get_double("s2_herald_probability") - expected) < 1e-9);
  // The surviving mode holds (|0> + alpha|1>)/norm: P(1)/P(0) = alpha^2.
  const double p0 = report.metrics.get_double("m0_p0");
  const double p1 = report.metrics.get_double("m0_p1");
  REQUIRE(std::abs(p1 / p0 - alpha * alpha) < 1e-9);
  REQUIRE(report.metrics.get_double("m0_p2") < 1e-12);

  const CircuitPlan pair = parse_plan(plan_file("delocalized_addition.plan"));
  const RunReport pair_report = execute_plan(pair);
  REQUIRE(pair_report.metrics.get_double("m0_discorrelated") == 1.0);
  REQUIRE(std::abs(pair_report.metrics.get_double("m1_log_negativity") - 1.0) < 1e-9);
}

TEST_CASE("reports export deterministically") {
  const std::string text =
      "seed 5\n"
      "space { modes 1 cutoff 8 }\n"
      "input { mode 0 kind fock n 1 }\n"
      "measure { kind homodyne_samples mode 0 phases 3 n_per_phase 20 file samples.txt }\n"
      "measure { kind save_state file state.txt }\n";
  const CircuitPlan plan = parse_plan(text);
  const RunReport a = execute_plan(plan);
  const RunReport b = execute_plan(plan);
  REQUIRE(a.to_text() == b.to_text());
  REQUIRE(a.artifacts.size() == 2);
  REQUIRE(a.artifacts[0].content == b.artifacts[0].content);

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "focksmith_plan_test_out";
  std::filesystem::remove_all(dir);
  export_report(a, dir.string());
  REQUIRE(std::filesystem::exists(dir / "report.txt"));
  REQUIRE(std::filesystem::exists(dir / "metrics.txt"));
  REQUIRE(std::filesystem::exists(dir / "samples.txt"));
  REQUIRE(std::filesystem::exists(dir / "state.txt"));
  // The saved state reloads to the very same amplitudes.
  const State reloaded = load_state((dir / "state.txt").string());
  REQUIRE(reloaded.ket().amplitudes()(1) == cplx(1.0, 0.0));
  std::filesystem::remove_all(dir);
}

TEST_CASE("seed and space overrides rewrite the plan header") {
  CircuitPlan plan = parse_plan(plan_file("delocalized_addition.plan"));
  plan.seed = 1234;
  const CircuitPlan reparsed = parse_plan(print_plan(plan));
  REQUIRE(reparsed.seed == 1234);
}
