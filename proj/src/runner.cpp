#include "focksmith/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "focksmith/algebra.hpp"
#include "focksmith/channels.hpp"
#include "focksmith/detectors.hpp"
#include "focksmith/entanglement.hpp"
#include "focksmith/herald.hpp"
#include "focksmith/operators.hpp"
#include "focksmith/photon_stats.hpp"
#include "focksmith/quadrature.hpp"
#include "focksmith/sampling.hpp"
#include "focksmith/states.hpp"
#include "focksmith/tomography.hpp"
#include "focksmith/wigner.hpp"

namespace focksmith {

namespace {

constexpr double kPi = 3.14159265358979323846;

double num(const Stage& stage, const std::string& key) {
  return stage.nums.at(key);
}

double num_or(const std::map<std::string, double>& nums, const std::string& key,
              double fallback) {
  const auto it = nums.find(key);
  return it == nums.end() ? fallback : it->second;
}

int mode_or(const std::map<std::string, double>& nums, const std::string& key,
            int fallback) {
  return static_cast<int>(num_or(nums, key, fallback));
}

cplx complex_of(const std::map<std::string, double>& nums, const std::string& name) {
  return cplx(num_or(nums, name + "_re", 0.0), num_or(nums, name + "_im", 0.0));
}

const SubBlock* find_sub(const Stage& stage, const std::string& tag) {
  for (const SubBlock& sub : stage.subs) {
    if (sub.tag == tag) {
      return &sub;
    }
  }
  return nullptr;
}

DetectorModel detector_from(const Stage& stage, DetectorModel fallback) {
  const SubBlock* sub = find_sub(stage, "detector");
  if (sub == nullptr) {
    return fallback;
  }
  const std::string& kind = sub->strs.at("kind");
  if (kind == "projective") {
    return DetectorModel::projective(static_cast<int>(num_or(sub->nums, "n", 1.0)));
  }
  if (kind == "on_off") {
    return DetectorModel::on_off(num_or(sub->nums, "efficiency", 1.0),
                                 num_or(sub->nums, "dark_rate", 0.0));
  }
  return DetectorModel::pnr(num_or(sub->nums, "efficiency", 1.0),
                            static_cast<int>(num_or(sub->nums, "max_count", 1.0)));
}

// Initial state: declared inputs bound at their modes, vacuum elsewhere.
State build_initial_state(const CircuitPlan& plan) {
  const ModeSpace space(plan.space.modes, plan.space.cutoff);
  std::vector<const InputDecl*> at_mode(plan.space.modes, nullptr);
  bool any_mixed = false;
  for (const InputDecl& input : plan.inputs) {
    at_mode[input.mode] = &input;
    if (input.spec.kind == StateKind::thermal) {
      any_mixed = true;
    }
  }

  std::vector<State> factors;
  for (int mode = 0; mode < plan.space.modes;) {
    if (at_mode[mode] == nullptr) {
      factors.emplace_back(Ket::vacuum(ModeSpace(1, plan.space.cutoff)));
      ++mode;
      continue;
    }
    const StateSpec& spec = at_mode[mode]->spec;
    const int span = state_kind_modes(spec.kind);
    factors.emplace_back(make_state(spec, ModeSpace(span, plan.space.cutoff)));
    mode += span;
  }

  if (!any_mixed) {
    std::vector<Ket> kets;
    kets.reserve(factors.size());
    for (const State& factor : factors) {
      kets.push_back(factor.ket());
    }
    Ket combined = tensor(kets);
    return State(Ket(space, combined.amplitudes()));
  }

  Mat combined = Mat::Identity(1, 1);
  for (const State& factor : factors) {
    combined = Eigen::kroneckerProduct(combined, factor.to_density().matrix()).eval();
  }
  return State(DensityOperator(space, std::move(combined)));
}

std::string stage_outcome_suffix(const HeraldOutcome& outcome) {
  if (outcome.kind == WeightKind::absolute_probability) {
    return " probability " + format_double(outcome.probability);
  }
  return " weight " + format_double(outcome.probability);
}

std::vector<SequenceOp> steps_of(const Stage& stage) {
  std::vector<SequenceOp> ops;
  for (const SubBlock& sub : stage.subs) {
    if (sub.tag == "step") {
      ops.push_back(sub.strs.at("kind") == "add" ? SequenceOp::add : SequenceOp::subtract);
    }
  }
  return ops;
}

OperatorSuperposition superposition_of(const Stage& stage) {
  OperatorSuperposition sup;
  for (const SubBlock& sub : stage.subs) {
    if (sub.tag != "term") {
      continue;
    }
    SuperpositionTerm term;
    term.coefficient = complex_of(sub.nums, "coeff");
    term.mode = mode_or(sub.nums, "mode", 0);
    const std::string& kind = sub.strs.at("kind");
    term.op = kind == "add" ? TermKind::add
              : kind == "subtract" ? TermKind::subtract
                                   : TermKind::identity;
    sup.terms.push_back(term);
  }
  return sup;
}

// Projective heralds on several modes, highest mode first so the remaining
// indices stay valid as modes are consumed.
HeraldOutcome run_projective_herald(const State& state,
                                    std::vector<std::pair<int, int>> conditions) {
  std::sort(conditions.begin(), conditions.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  State current = state;
  double probability = 1.0;
  for (const auto& [mode, n] : conditions) {
    if (current.is_pure()) {
      ProjectionResult result = project_fock(current.ket(), mode, n);
      probability *= result.probability;
      current = State(std::move(result.state));
    } else {
      RVec diag = RVec::Zero(current.space().levels());
      diag(n) = 1.0;
      ConditionResult result = condition_fock_diag(current, mode, diag);
      probability *= result.probability;
      current = std::move(result.state);
    }
  }
  return HeraldOutcome{std::move(current), probability, WeightKind::absolute_probability};
}

std::vector<double> phase_grid(int count) {
  std::vector<double> phases(count);
  for (int i = 0; i < count; ++i) {
    phases[i] = kPi * i / count;
  }
  return phases;
}

std::string wigner_to_text(const WignerGrid& grid) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < grid.xs.size(); ++i) {
    for (Eigen::Index j = 0; j < grid.ps.size(); ++j) {
      out << format_double(grid.xs(i)) << ' ' << format_double(grid.ps(j)) << ' '
          << format_double(grid.values(i, j)) << '\n';
    }
  }
  return out.str();
}

std::string samples_to_text(const std::vector<QuadratureSample>& samples) {
  std::ostringstream out;
  for (const QuadratureSample& sample : samples) {
    out << format_double(sample.theta) << ' ' << format_double(sample.x) << '\n';
  }
  return out.str();
}

// True state truncated (and renormalized) to the reconstruction cutoff so
// the two density matrices live on the same space.
DensityOperator truncate_density(const DensityOperator& rho, int levels) {
  if (rho.space().num_modes() != 1) {
    throw std::invalid_argument("truncate_density expects a single-mode state");
  }
  if (levels >= rho.space().levels()) {
    return rho;
  }
  Mat block = rho.matrix().topLeftCorner(levels, levels);
  const double trace = block.trace().real();
  if (trace <= 0.0) {
    throw std::invalid_argument("truncate_density: no population below the cutoff");
  }
  block /= trace;
  return DensityOperator(ModeSpace(1, levels - 1), std::move(block));
}

}  // namespace

RunReport execute_plan(const CircuitPlan& plan) {
  RunReport report;
  report.plan = plan;

  State state = build_initial_state(plan);

  for (std::size_t i = 0; i < plan.stages.size(); ++i) {
    const Stage& stage = plan.stages[i];
    const std::string label = "stage " + std::to_string(i) + " " + stage.op;
    const std::string skey = "s" + std::to_string(i) + "_" + stage.op;

    if (stage.op == "beam_splitter") {
      state = apply_two_mode(state, beam_splitter_core(num(stage, "tau"), state.space().levels()),
                             static_cast<int>(num(stage, "mode_a")),
                             static_cast<int>(num(stage, "mode_b")));
      report.stage_lines.push_back(label);
    } else if (stage.op == "two_mode_squeeze") {
      state = apply_two_mode(state, two_mode_squeeze_core(num(stage, "zeta"), state.space().levels()),
                             static_cast<int>(num(stage, "mode_a")),
                             static_cast<int>(num(stage, "mode_b")));
      report.stage_lines.push_back(label);
    } else if (stage.op == "single_mode_squeeze") {
      state = apply_one_mode(state, single_mode_squeeze_core(num(stage, "zeta"), state.space().levels()),
                             static_cast<int>(num(stage, "mode")));
      report.stage_lines.push_back(label);
    } else if (stage.op == "displacement") {
      state = apply_one_mode(state, displacement_core(complex_of(stage.nums, "alpha"),
                                                      state.space().levels()),
                             static_cast<int>(num(stage, "mode")));
      report.stage_lines.push_back(label);
    } else if (stage.op == "phase_rotation") {
      state = apply_one_mode(state,
                             Mat(phase_rotation_diag(num(stage, "theta"), state.space().levels())
                                     .asDiagonal()),
                             static_cast<int>(num(stage, "mode")));
      report.stage_lines.push_back(label);
    } else if (stage.op == "pure_loss") {
      state = pure_loss(state, static_cast<int>(num(stage, "mode")), num(stage, "eta"));
      report.stage_lines.push_back(label);
    } else if (stage.op == "apply_ideal") {
      HeraldOutcome outcome = apply_ideal(state, superposition_of(stage));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_weight", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "subtract_physical") {
      HeraldOutcome outcome =
          subtract_physical(state, static_cast<int>(num(stage, "mode")),
                            num(stage, "reflectivity"),
                            detector_from(stage, DetectorModel::on_off(1.0)));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_probability", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "add_physical") {
      HeraldOutcome outcome =
          add_physical(state, static_cast<int>(num(stage, "mode")), num(stage, "zeta"),
                       detector_from(stage, DetectorModel::on_off(1.0)));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_probability", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "herald_fock") {
      HeraldOutcome outcome = herald_fock(static_cast<int>(num(stage, "k")),
                                          num(stage, "lambda"),
                                          detector_from(stage, DetectorModel::projective(1)),
                                          static_cast<int>(num(stage, "tree_depth")),
                                          plan.space.cutoff);
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_probability", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "condition_on_quadrature") {
      HeraldOutcome outcome =
          condition_on_quadrature(state, static_cast<int>(num(stage, "mode")),
                                  num(stage, "theta"), num(stage, "x_lo"), num(stage, "x_hi"));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_probability", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "project_fock") {
      HeraldOutcome outcome = run_projective_herald(
          state, {{static_cast<int>(num(stage, "mode")), static_cast<int>(num(stage, "n"))}});
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_probability", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "herald") {
      std::vector<std::pair<int, int>> conditions;
      for (const SubBlock& sub : stage.subs) {
        if (sub.tag == "when") {
          conditions.emplace_back(static_cast<int>(sub.nums.at("mode")),
                                  static_cast<int>(sub.nums.at("n")));
        }
      }
      HeraldOutcome outcome = run_projective_herald(state, std::move(conditions));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_probability", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "apply_sequence") {
      HeraldOutcome outcome = apply_sequence(state, steps_of(stage), mode_or(stage.nums, "mode", 0));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_weight", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "superpose_sequences") {
      HeraldOutcome outcome = superpose_sequences(state, complex_of(stage.nums, "c1"),
                                                  complex_of(stage.nums, "c2"),
                                                  mode_or(stage.nums, "mode", 0));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_weight", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "affine_number_op") {
      HeraldOutcome outcome = affine_number_op(state, complex_of(stage.nums, "a"),
                                               complex_of(stage.nums, "b"),
                                               mode_or(stage.nums, "mode", 0));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_weight", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "orthogonalize") {
      const bool has_mu = stage.nums.count("mu_re") != 0;
      const bool has_nu = stage.nums.count("nu_re") != 0;
      HeraldOutcome outcome = orthogonalize(
          state,
          stage.strs.at("c") == "creation" ? OrthogonalizeOp::creation : OrthogonalizeOp::number,
          mode_or(stage.nums, "mode", 0), has_mu ? complex_of(stage.nums, "mu") : cplx(0.0),
          has_nu ? complex_of(stage.nums, "nu") : cplx(1.0));
      report.stage_lines.push_back(label + stage_outcome_suffix(outcome));
      report.metrics.put(skey + "_weight", outcome.probability);
      state = std::move(outcome.state);
    } else if (stage.op == "kerr_emulate") {
      KerrResult result = kerr_emulate(state, static_cast<int>(num_or(stage.nums, "subspace_max", 2.0)),
                                       mode_or(stage.nums, "mode", 0));
      report.stage_lines.push_back(label + stage_outcome_suffix(result.outcome) +
                                   " fidelity " + format_double(result.fidelity));
      report.metrics.put(skey + "_weight", result.outcome.probability);
      report.metrics.put(skey + "_fidelity", result.fidelity);
      report.metrics.put(skey + "_c1_re", result.c1.real());
      report.metrics.put(skey + "_c1_im", result.c1.imag());
      report.metrics.put(skey + "_c2_re", result.c2.real());
      report.metrics.put(skey + "_c2_im", result.c2.imag());
      state = std::move(result.outcome.state);
    } else {
      throw std::logic_error("execute_plan: unhandled op " + stage.op);
    }
  }

  for (std::size_t i = 0; i < plan.measurements.size(); ++i) {
    const Measurement& m = plan.measurements[i];
    const std::string prefix = "m" + std::to_string(i) + "_";

    if (m.kind == "save_state") {
      report.artifacts.push_back({m.strs.at("file"), state_to_text(state)});
    } else if (m.kind == "wigner") {
      const int mode = mode_or(m.nums, "mode", 0);
      WignerGridSpec spec = default_wigner_grid(state, mode);
      if (m.nums.count("half_width") != 0) {
        spec.half_width = m.nums.at("half_width");
      }
      if (m.nums.count("points") != 0) {
        spec.points = static_cast<int>(m.nums.at("points"));
      }
      const WignerGrid grid = wigner(state, mode, spec);
      report.artifacts.push_back({m.strs.at("file"), wigner_to_text(grid)});
      report.metrics.put(prefix + "wigner_min", grid.min_value());
      report.metrics.put(prefix + "wigner_integral", grid.integral());
    } else if (m.kind == "photon_statistics") {
      const RVec marginal = photon_marginal(state, mode_or(m.nums, "mode", 0));
      for (Eigen::Index n = 0; n < marginal.size(); ++n) {
        report.metrics.put(prefix + "p" + std::to_string(n), marginal(n));
      }
    } else if (m.kind == "discorrelation") {
      const DiscorrelationResult result = discorrelation_check(
          state, mode_or(m.nums, "mode_a", 0), mode_or(m.nums, "mode_b", 1));
      report.metrics.put(prefix + "discorrelated",
                         static_cast<long long>(result.discorrelated ? 1 : 0));
      report.metrics.put(prefix + "max_diagonal", result.max_diagonal);
    } else if (m.kind == "log_negativity") {
      report.metrics.put(prefix + "log_negativity",
                         log_negativity(state, {static_cast<int>(m.nums.at("side_a"))}));
    } else if (m.kind == "mean_photon") {
      report.metrics.put(prefix + "mean_photon", mean_photon(state, mode_or(m.nums, "mode", 0)));
    } else if (m.kind == "purity") {
      report.metrics.put(prefix + "purity", state_purity(state));
    } else if (m.kind == "fidelity_with") {
      const State target = make_state(*m.target, state.space());
      report.metrics.put(prefix + "fidelity", fidelity(state, target));
    } else if (m.kind == "homodyne_samples") {
      const std::vector<double> phases = phase_grid(static_cast<int>(num_or(m.nums, "phases", 12.0)));
      const std::uint64_t seed = RngStream(plan.seed).child(i).seed();
      const std::vector<QuadratureSample> samples = sample_homodyne(
          state, mode_or(m.nums, "mode", 0), phases,
          static_cast<int>(m.nums.at("n_per_phase")), seed);
      report.artifacts.push_back({m.strs.at("file"), samples_to_text(samples)});
      report.metrics.put(prefix + "samples", static_cast<long long>(samples.size()));
    } else if (m.kind == "tomography") {
      const int mode = mode_or(m.nums, "mode", 0);
      const std::vector<double> phases = phase_grid(static_cast<int>(num_or(m.nums, "phases", 12.0)));
      const std::uint64_t seed = RngStream(plan.seed).child(i).seed();
      const std::vector<QuadratureSample> samples = sample_homodyne(
          state, mode, phases, static_cast<int>(m.nums.at("n_per_phase")), seed);
      TomographyConfig config;
      config.cutoff = static_cast<int>(num_or(m.nums, "cutoff", config.cutoff));
      config.bin_width = num_or(m.nums, "bin_width", config.bin_width);
      config.max_iterations =
          static_cast<int>(num_or(m.nums, "max_iterations", config.max_iterations));
      config.likelihood_tol = num_or(m.nums, "likelihood_tol", config.likelihood_tol);
      const TomographyResult result = maxlik_reconstruct(samples, config);

      DensityOperator truth = state.space().num_modes() == 1
                                  ? state.to_density()
                                  : partial_trace(state, {mode});
      truth = truncate_density(truth, config.cutoff + 1);
      DensityOperator reconstructed = result.rho;
      if (reconstructed.space().levels() > truth.space().levels()) {
        reconstructed = truncate_density(reconstructed, truth.space().levels());
      }
      report.metrics.put(prefix + "fidelity",
                         fidelity(State(truth), State(reconstructed)));
      report.metrics.put(prefix + "iterations", static_cast<long long>(result.iterations));
      report.metrics.put(prefix + "final_ll", result.log_likelihood.back());
      report.artifacts.push_back({m.strs.at("file"), state_to_text(State(result.rho))});
    }
  }

  report.final_state = std::move(state);
  return report;
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "focksmith report\n";
  out << "plan-begin\n" << print_plan(plan) << "plan-end\n";
  for (const std::string& line : stage_lines) {
    out << line << '\n';
  }
  for (const auto& [key, value] : metrics.entries()) {
    out << "metric " << key << ' ' << value << '\n';
  }
  for (const RunArtifact& artifact : artifacts) {
    out << "artifact " << artifact.name << ' ' << artifact.content.size() << '\n';
  }
  out << "end\n";
  return out.str();
}

void export_report(const RunReport& report, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("could not create output directory '" + out_dir + "': " + ec.message());
  }
  write_text_file(out_dir + "/report.txt", report.to_text());
  save_metrics(report.metrics, out_dir + "/metrics.txt");
  for (const RunArtifact& artifact : report.artifacts) {
    write_text_file(out_dir + "/" + artifact.name, artifact.content);
  }
}

}  // namespace focksmith
