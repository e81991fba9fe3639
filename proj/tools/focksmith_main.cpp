#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "focksmith/io.hpp"
#include "focksmith/oracles.hpp"
#include "focksmith/plan.hpp"
#include "focksmith/runner.hpp"
#include "focksmith/types.hpp"

namespace {

int run_command(const std::string& plan_path, const std::string& out_dir,
                bool seed_given, std::uint64_t seed, bool cutoff_given, int cutoff) {
  const std::string text = focksmith::read_text_file(plan_path);
  focksmith::CircuitPlan plan = focksmith::parse_plan(text);
  if (seed_given) {
    plan.seed = seed;
  }
  if (cutoff_given) {
    plan.space.cutoff = cutoff;
    // Re-validate with the new cutoff in place (ranges such as project_fock's
    // n depend on it).
    plan = focksmith::parse_plan(focksmith::print_plan(plan));
  }
  const focksmith::RunReport report = focksmith::execute_plan(plan);
  focksmith::export_report(report, out_dir);
  std::cout << report.to_text();
  return 0;
}

int validate_command(const std::string& plan_path) {
  const std::string text = focksmith::read_text_file(plan_path);
  const focksmith::CircuitPlan plan = focksmith::parse_plan(text);
  std::cout << "plan ok: " << plan.stages.size() << " stage(s), "
            << plan.measurements.size() << " measurement(s)\n";
  std::cout << focksmith::print_plan(plan);
  return 0;
}

int oracle_command(const std::string& name) {
  if (name == "list") {
    for (const std::string& known : focksmith::oracle_names()) {
      std::cout << known << '\n';
    }
    return 0;
  }
  std::cout << focksmith::run_oracle(name);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"focksmith: photon-by-photon state engineering in truncated Fock space"};
  app.require_subcommand(1);

  std::string plan_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int cutoff = 10;

  CLI::App* run = app.add_subcommand("run", "Execute a circuit plan and write its outputs");
  run->add_option("plan", plan_path, "Plan file")->required();
  run->add_option("--out", out_dir, "Output directory (default: out)");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the plan's RNG seed");
  CLI::Option* cutoff_opt = run->add_option("--cutoff", cutoff, "Override the plan's Fock cutoff");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a plan, then echo it");
  validate->add_option("plan", validate_path, "Plan file")->required();

  std::string oracle_name;
  CLI::App* oracle = app.add_subcommand("oracle", "Print reference values ('list' to enumerate)");
  oracle->add_option("name", oracle_name, "Oracle name or 'list'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      return run_command(plan_path, out_dir, static_cast<bool>(*seed_opt), seed,
                         static_cast<bool>(*cutoff_opt), cutoff);
    }
    if (validate->parsed()) {
      return validate_command(validate_path);
    }
    if (oracle->parsed()) {
      return oracle_command(oracle_name);
    }
  } catch (const focksmith::PlanError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const focksmith::HeraldImpossibleError& e) {
    std::cerr << "error: herald impossible: " << e.what() << '\n';
    return 3;
  } catch (const focksmith::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
