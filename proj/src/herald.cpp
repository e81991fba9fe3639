#include "focksmith/herald.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "focksmith/algebra.hpp"
#include "focksmith/operators.hpp"
#include "focksmith/quadrature.hpp"

namespace focksmith {

namespace {

constexpr double kZeroBranchTol = 1e-300;
/// Squared-norm floor below which an orthogonal branch counts as vanishing
/// (eigenstate input).
constexpr double kEigenstateTol = 1e-20;
/// Top-of-space population above which truncation noticeably biases
/// photon-adding operations.
constexpr double kCutoffMarginTol = 1e-8;
constexpr double kKerrSupportThreshold = 0.995;

void warn_if_truncation_biased(const State& state, int mode, const char* op) {
  const double top = state.top_level_population(mode, 2);
  if (top > kCutoffMarginTol) {
    std::ostringstream msg;
    msg << op << ": population " << top << " in the top two Fock levels of mode " << mode
        << "; truncation will bias the result, consider a larger cutoff";
    emit_warning(msg.str());
  }
}

/// out += coeff * O(term) * in for a full-space vector.
void accumulate_term(Vec& out, const Vec& in, const SuperpositionTerm& term,
                     const ModeSpace& space) {
  if (term.coefficient == cplx(0.0, 0.0)) return;
  if (term.op == TermKind::identity) {
    out += term.coefficient * in;
    return;
  }
  const Eigen::Index stride = space.stride(term.mode);
  const int levels = space.levels();
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    const int n = static_cast<int>((i / stride) % levels);
    if (term.op == TermKind::add) {
      if (n + 1 < levels) {
        out(i + stride) += term.coefficient * std::sqrt(n + 1.0) * in(i);
      }
    } else {  // subtract
      if (n >= 1) out(i - stride) += term.coefficient * std::sqrt(static_cast<double>(n)) * in(i);
    }
  }
}

Vec apply_superposition(const Vec& in, const OperatorSuperposition& sup, const ModeSpace& space) {
  Vec out = Vec::Zero(in.size());
  for (const SuperpositionTerm& term : sup.terms) accumulate_term(out, in, term, space);
  return out;
}

/// A rho A^dag for A = the superposition operator, via two column passes.
Mat sandwich_superposition(const Mat& rho, const OperatorSuperposition& sup,
                           const ModeSpace& space) {
  Mat left(rho.rows(), rho.cols());
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    left.col(c) = apply_superposition(rho.col(c), sup, space);
  }
  Mat right = left.adjoint();
  Mat out(rho.rows(), rho.cols());
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    out.col(c) = apply_superposition(right.col(c), sup, space);
  }
  return out.adjoint();
}

void validate_superposition(const OperatorSuperposition& sup, const ModeSpace& space) {
  if (sup.terms.empty()) {
    throw std::invalid_argument("apply_ideal: superposition must have at least one term");
  }
  bool any_ladder = false;
  for (const SuperpositionTerm& term : sup.terms) {
    space.check_mode(term.mode);
    if (term.op != TermKind::identity) any_ladder = true;
  }
  if (!any_ladder && sup.terms.size() > 1) {
    throw std::invalid_argument(
        "apply_ideal: several identity terms reduce to one; supply a single identity term");
  }
}

HeraldOutcome finish_ideal_pure(const ModeSpace& space, Vec branch) {
  const double weight = branch.squaredNorm();
  if (weight < kZeroBranchTol) {
    throw HeraldImpossibleError("ideal operation annihilated the state (zero branch)");
  }
  branch /= std::sqrt(weight);
  return {State(Ket(space, std::move(branch))), weight, WeightKind::relative_weight};
}

HeraldOutcome finish_ideal_mixed(const ModeSpace& space, Mat branch) {
  const double weight = branch.trace().real();
  if (weight < kZeroBranchTol) {
    throw HeraldImpossibleError("ideal operation annihilated the state (zero branch)");
  }
  branch /= weight;
  return {State(DensityOperator(space, std::move(branch))), weight, WeightKind::relative_weight};
}

/// Single-mode matrix for the ordered ladder product: ops applied left to
/// right means the first op multiplies the state first.
Mat sequence_matrix(const std::vector<SequenceOp>& ops, int levels) {
  Mat m = Mat::Identity(levels, levels);
  for (SequenceOp op : ops) {
    const Mat step =
        ladder_matrix(op == SequenceOp::add ? LadderKind::create : LadderKind::annihilate, levels);
    m = step * m;
  }
  return m;
}

HeraldOutcome apply_single_mode_ideal(const State& state, const Mat& m, int mode) {
  if (state.is_pure()) {
    const Ket out = apply_one_mode(state.ket(), m, mode);
    return finish_ideal_pure(state.space(), out.amplitudes());
  }
  const DensityOperator out = apply_one_mode(state.rho(), m, mode);
  return finish_ideal_mixed(state.space(), out.matrix());
}

/// Shared physical-herald core: append a vacuum ancilla, couple it to the
/// target mode with the given two-mode core, condition the ancilla on the
/// detector's click element, trace it out.
HeraldOutcome couple_and_condition(const State& state, int mode, const Mat& core,
                                   const RVec& click) {
  const ModeSpace& space = state.space();
  const int levels = space.levels();
  const int ancilla = space.num_modes();

  // Rank-1 click elements (exact number resolution) keep pure inputs pure.
  int nonzero = 0;
  int click_level = -1;
  for (int t = 0; t < levels; ++t) {
    if (click(t) != 0.0) {
      ++nonzero;
      click_level = t;
    }
  }
  if (nonzero == 0) {
    throw HeraldImpossibleError("physical herald: the detector click element is zero");
  }

  if (state.is_pure()) {
    const State big = append_vacuum_mode(state);
    const Ket coupled = apply_two_mode(big.ket(), core, mode, ancilla);
    if (nonzero == 1) {
      ProjectionResult pr = project_fock(coupled, ancilla, click_level);
      return {State(std::move(pr.state)), click(click_level) * pr.probability,
              WeightKind::absolute_probability};
    }
    ConditionResult cr = condition_fock_diag(State(coupled), ancilla, click);
    return {std::move(cr.state), cr.probability, WeightKind::absolute_probability};
  }

  // Mixed input: process the eigenbranches of rho as pure states and
  // accumulate the conditioned reduced density; this never materializes the
  // (dim * levels)^2 coupled density.
  Eigen::SelfAdjointEigenSolver<Mat> es(state.rho().matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("physical herald: eigendecomposition of the input failed");
  }
  Mat out = Mat::Zero(space.dim(), space.dim());
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double p_k = es.eigenvalues()(k);
    if (p_k < 1e-15) continue;
    const State big = append_vacuum_mode(State(Ket(space, es.eigenvectors().col(k))));
    const Ket coupled = apply_two_mode(big.ket(), core, mode, ancilla);
    for (int t = 0; t < levels; ++t) {
      if (click(t) == 0.0) continue;
      Eigen::Map<const Vec, 0, Eigen::InnerStride<>> slice(coupled.amplitudes().data() + t,
                                                           space.dim(),
                                                           Eigen::InnerStride<>(levels));
      out.selfadjointView<Eigen::Lower>().rankUpdate(Vec(slice), p_k * click(t));
    }
  }
  Mat full = out.selfadjointView<Eigen::Lower>();
  const double prob = full.trace().real();
  if (prob < kZeroBranchTol) {
    throw HeraldImpossibleError("physical herald: click outcome has zero probability");
  }
  full /= prob;
  return {State(DensityOperator(space, std::move(full))), prob,
          WeightKind::absolute_probability};
}

}  // namespace

HeraldOutcome apply_ideal(const State& state, const OperatorSuperposition& sup) {
  const ModeSpace& space = state.space();
  validate_superposition(sup, space);
  for (const SuperpositionTerm& term : sup.terms) {
    if (term.op == TermKind::add && term.coefficient != cplx(0.0, 0.0)) {
      warn_if_truncation_biased(state, term.mode, "apply_ideal(add)");
    }
  }
  if (state.is_pure()) {
    return finish_ideal_pure(space, apply_superposition(state.ket().amplitudes(), sup, space));
  }
  return finish_ideal_mixed(space, sandwich_superposition(state.rho().matrix(), sup, space));
}

HeraldOutcome subtract_physical(const State& state, int mode, double reflectivity,
                                const DetectorModel& det) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  if (!(reflectivity > 0.0 && reflectivity < 1.0)) {
    throw std::invalid_argument("subtract_physical: reflectivity must lie in (0, 1)");
  }
  warn_if_truncation_biased(state, mode, "subtract_physical");
  const Mat core = beam_splitter_core(std::asin(reflectivity), space.levels());
  return couple_and_condition(state, mode, core, det.click_diag(space.levels()));
}

HeraldOutcome add_physical(const State& state, int mode, double zeta, const DetectorModel& det) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  if (!(zeta > 0.0 && zeta < 1.0)) {
    throw std::invalid_argument("add_physical: squeezing must lie in (0, 1)");
  }
  warn_if_truncation_biased(state, mode, "add_physical");
  const Mat core = two_mode_squeeze_core(zeta, space.levels());
  return couple_and_condition(state, mode, core, det.click_diag(space.levels()));
}

HeraldOutcome herald_fock(int k, double lambda, const DetectorModel& det, int tree_depth,
                          int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("herald_fock: cutoff must be >= 1");
  if (k < 1 || k > cutoff) {
    throw std::invalid_argument("herald_fock: k must lie in [1, cutoff]");
  }
  if (!(std::abs(lambda) < 1.0)) {
    throw std::invalid_argument("herald_fock: |lambda| must be < 1");
  }
  if (tree_depth < 0) throw std::invalid_argument("herald_fock: tree_depth must be >= 0");
  const int num_leaves = 1 << tree_depth;
  const ModeSpace space(1 + num_leaves, cutoff);
  const int levels = space.levels();

  // Leaf firing pattern: a single leaf reads the full count k; several
  // leaves fire one photon each (first k of them; the choice is irrelevant
  // by the symmetry of the balanced tree).
  std::vector<int> counts(static_cast<std::size_t>(num_leaves), 0);
  if (num_leaves == 1) {
    counts[0] = k;
  } else {
    if (k > num_leaves) {
      std::ostringstream msg;
      msg << "herald_fock: k=" << k << " exceeds the " << num_leaves << " tree leaves";
      throw HeraldImpossibleError(msg.str());
    }
    for (int i = 0; i < k; ++i) counts[static_cast<std::size_t>(i)] = 1;
  }
  for (int c : counts) {
    if (det.kind == DetectorKind::on_off && c > 1) {
      throw HeraldImpossibleError("herald_fock: an on/off leaf cannot resolve more than one photon");
    }
    if (det.kind == DetectorKind::pnr && c > det.max_count) {
      throw HeraldImpossibleError("herald_fock: leaf count exceeds the detector's max_count");
    }
  }

  // EPR pair between the signal (mode 0) and the herald root (mode 1).
  Vec amp = Vec::Zero(space.dim());
  const double head = std::sqrt(1.0 - lambda * lambda);
  double term = head;
  for (int n = 0; n < levels; ++n) {
    amp(n * space.stride(0) + n * space.stride(1)) = term;
    term *= lambda;
  }
  Ket psi(space, std::move(amp));

  // Balanced splitter tree over the leaf modes [1, num_leaves].
  if (num_leaves > 1) {
    const Mat half = beam_splitter_core(M_PI / 4.0, levels);
    // Iterative halving: [lo, hi) splits at lo -> mid.
    std::vector<std::pair<int, int>> stack{{1, 1 + num_leaves}};
    while (!stack.empty()) {
      const auto [lo, hi] = stack.back();
      stack.pop_back();
      if (hi - lo < 2) continue;
      const int mid = lo + (hi - lo) / 2;
      psi = apply_two_mode(psi, half, lo, mid);
      stack.push_back({lo, mid});
      stack.push_back({mid, hi});
    }
  }

  // Joint diagonal POVM weight over the leaf block (modes 1.. are the
  // fastest-varying block of size levels^num_leaves).
  std::vector<RVec> elements;
  elements.reserve(counts.size());
  for (int c : counts) elements.push_back(det.count_diag(c, levels));
  Eigen::Index block = 1;
  for (int i = 0; i < num_leaves; ++i) block *= levels;
  RVec joint = RVec::Ones(block);
  for (Eigen::Index t = 0; t < block; ++t) {
    Eigen::Index rest = t;
    double w = 1.0;
    for (int leaf = num_leaves - 1; leaf >= 0; --leaf) {
      const int digit = static_cast<int>(rest % levels);
      rest /= levels;
      w *= elements[static_cast<std::size_t>(leaf)](digit);
      if (w == 0.0) break;
    }
    joint(t) = w;
  }

  // Condition all leaves at once and keep the signal mode.
  int nonzero = 0;
  Eigen::Index fired = -1;
  for (Eigen::Index t = 0; t < block; ++t) {
    if (joint(t) != 0.0) {
      ++nonzero;
      fired = t;
    }
  }
  const ModeSpace signal_space(1, cutoff);
  const Vec& full = psi.amplitudes();
  if (nonzero == 1) {
    Vec reduced(levels);
    for (int n = 0; n < levels; ++n) reduced(n) = full(n * block + fired);
    const double p = joint(fired) * reduced.squaredNorm();
    if (p < kZeroBranchTol) {
      throw HeraldImpossibleError("herald_fock: click pattern has zero probability");
    }
    reduced /= reduced.norm();
    return {State(Ket(signal_space, std::move(reduced))), p, WeightKind::absolute_probability};
  }
  Mat rho = Mat::Zero(levels, levels);
  for (Eigen::Index t = 0; t < block; ++t) {
    if (joint(t) == 0.0) continue;
    for (int n = 0; n < levels; ++n) {
      for (int m = 0; m < levels; ++m) {
        rho(m, n) += joint(t) * full(m * block + t) * std::conj(full(n * block + t));
      }
    }
  }
  const double p = rho.trace().real();
  if (p < kZeroBranchTol) {
    throw HeraldImpossibleError("herald_fock: click pattern has zero probability");
  }
  rho /= p;
  return {State(DensityOperator(signal_space, std::move(rho))), p,
          WeightKind::absolute_probability};
}

HeraldOutcome condition_on_quadrature(const State& state, int mode, double theta, double x_lo,
                                      double x_hi) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  if (std::isnan(x_lo) || std::isnan(x_hi) || !(x_lo < x_hi)) {
    throw std::invalid_argument("condition_on_quadrature: window must satisfy x_lo < x_hi");
  }
  const Mat window = quadrature_window_matrix(theta, x_lo, x_hi, space.levels());
  ConditionResult cr = condition_mode(state, mode, window);
  return {std::move(cr.state), cr.probability, WeightKind::absolute_probability};
}

HeraldOutcome apply_sequence(const State& state, const std::vector<SequenceOp>& ops, int mode) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  for (SequenceOp op : ops) {
    if (op == SequenceOp::add) {
      warn_if_truncation_biased(state, mode, "apply_sequence(add)");
      break;
    }
  }
  return apply_single_mode_ideal(state, sequence_matrix(ops, space.levels()), mode);
}

HeraldOutcome superpose_sequences(const State& state, cplx c1, cplx c2, int mode) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  const int levels = space.levels();
  // c1 * a a^dag + c2 * a^dag a with the truncated ladder products, so the
  // physical loss of the top-level add branch is represented faithfully;
  // away from the cutoff edge this equals (c1+c2) n + c1.
  const Mat m = c1 * sequence_matrix({SequenceOp::add, SequenceOp::subtract}, levels) +
                c2 * sequence_matrix({SequenceOp::subtract, SequenceOp::add}, levels);
  return apply_single_mode_ideal(state, m, mode);
}

HeraldOutcome affine_number_op(const State& state, cplx a, cplx b, int mode) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  const int levels = space.levels();
  Mat m = Mat::Zero(levels, levels);
  for (int n = 0; n < levels; ++n) m(n, n) = a * static_cast<double>(n) + b;
  return apply_single_mode_ideal(state, m, mode);
}

HeraldOutcome orthogonalize(const State& state, OrthogonalizeOp c, int mode, cplx mu, cplx nu) {
  if (!state.is_pure()) {
    throw std::invalid_argument("orthogonalize: defined for pure states only");
  }
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  const Ket& psi = state.ket();
  const Mat cm = ladder_matrix(c == OrthogonalizeOp::creation ? LadderKind::create
                                                              : LadderKind::number,
                               space.levels());
  const cplx mean = expectation_one_mode(state, cm, mode);
  const Ket applied = apply_one_mode(psi, cm, mode);
  Vec branch = applied.amplitudes() - mean * psi.amplitudes();
  const double weight = branch.squaredNorm();
  if (weight <= kEigenstateTol) {
    throw HeraldImpossibleError(
        "orthogonalize: the input is an eigenstate of the chosen operator");
  }
  branch /= std::sqrt(weight);
  Vec out = mu * psi.amplitudes() + nu * branch;
  const double n2 = out.squaredNorm();
  if (n2 < kZeroBranchTol) {
    throw std::invalid_argument("orthogonalize: mu and nu cannot both vanish");
  }
  out /= std::sqrt(n2);
  return {State(Ket(space, std::move(out))), weight, WeightKind::relative_weight};
}

KerrResult kerr_emulate(const State& state, int subspace_max, int mode) {
  if (!state.is_pure()) {
    throw std::invalid_argument("kerr_emulate: defined for pure states only");
  }
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  if (subspace_max < 2) {
    throw std::invalid_argument("kerr_emulate: subspace_max must be >= 2");
  }
  const int levels = space.levels();
  const Eigen::Index stride = space.stride(mode);
  const Vec& amp = state.ket().amplitudes();

  double support = 0.0;
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    const int n = static_cast<int>((i / stride) % levels);
    if (n <= subspace_max) support += std::norm(amp(i));
  }
  if (support < kKerrSupportThreshold) {
    std::ostringstream msg;
    msg << "kerr_emulate: only " << support << " of the population lies in Fock levels 0.."
        << subspace_max << " (need >= " << kKerrSupportThreshold << ")";
    throw std::invalid_argument(msg.str());
  }

  // Target: pi phase flip of the two-photon component.
  Vec target = amp;
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    if (static_cast<int>((i / stride) % levels) == 2) target(i) = -target(i);
  }
  target /= target.norm();

  // Gain per photon number for coefficients (1, w): g_n = (n+1) + w n.
  const auto fidelity_of = [&](cplx w, Vec* branch_out) -> double {
    Vec branch(space.dim());
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      const int n = static_cast<int>((i / stride) % levels);
      branch(i) = (cplx(n + 1.0, 0.0) + w * static_cast<double>(n)) * amp(i);
    }
    const double n2 = branch.squaredNorm();
    if (n2 < kZeroBranchTol) return -1.0;
    const double f = std::norm(target.dot(branch)) / n2;
    if (branch_out != nullptr) *branch_out = std::move(branch);
    return f;
  };

  // Deterministic nested grid search over w = c2 / c1.
  cplx best_w(0.0, 0.0);
  double best_f = -1.0;
  const auto scan = [&](double center_re, double center_im, double radius, double step) {
    const int half = static_cast<int>(std::lround(radius / step));
    for (int i = -half; i <= half; ++i) {
      for (int j = -half; j <= half; ++j) {
        const cplx w(center_re + i * step, center_im + j * step);
        const double f = fidelity_of(w, nullptr);
        if (f > best_f) {
          best_f = f;
          best_w = w;
        }
      }
    }
  };
  scan(0.0, 0.0, 5.0, 0.05);
  scan(best_w.real(), best_w.imag(), 0.05, 0.005);
  scan(best_w.real(), best_w.imag(), 0.005, 0.0005);

  Vec branch(space.dim());
  const double f = fidelity_of(best_w, &branch);
  const double weight = branch.squaredNorm();
  branch /= std::sqrt(weight);
  HeraldOutcome outcome{State(Ket(space, std::move(branch))), weight,
                        WeightKind::relative_weight};
  return KerrResult{std::move(outcome), f, cplx(1.0, 0.0), best_w};
}

}  // namespace focksmith
