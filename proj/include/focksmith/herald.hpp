#pragma once

#include <string>
#include <vector>

#include "focksmith/detectors.hpp"
#include "focksmith/state.hpp"

namespace focksmith {

/// How the probability field of a HeraldOutcome is to be read. Ideal
/// (operator + renormalize) operations report the squared norm of the
/// unnormalized branch, a relative weight with no probability meaning;
/// physical (ancilla + detector) operations report an absolute probability.
enum class WeightKind { relative_weight, absolute_probability };

struct HeraldOutcome {
  State state;         ///< Normalized conditioned state.
  double probability;  ///< Absolute probability or relative weight, per kind.
  WeightKind kind;
};

enum class TermKind { add, subtract, identity };

/// One term of a mode-wise ladder-operator superposition
/// sum_i coefficient_i * O_i acting on mode_i.
struct SuperpositionTerm {
  cplx coefficient;
  int mode = 0;
  TermKind op = TermKind::identity;
};

struct OperatorSuperposition {
  std::vector<SuperpositionTerm> terms;
};

/// Apply sum_i c_i O_i (creation/annihilation/identity on chosen modes) and
/// renormalize. Weight = squared norm of the unnormalized branch.
HeraldOutcome apply_ideal(const State& state, const OperatorSuperposition& sup);

/// Tap the mode with a weak beam splitter of reflectivity r into a vacuum
/// ancilla, fire the detector's click element on the tap, trace it out.
/// Converges to ideal subtraction with trace distance O(r^2).
HeraldOutcome subtract_physical(const State& state, int mode, double reflectivity,
                                const DetectorModel& det);

/// Couple the mode to a vacuum ancilla with a weak two-mode squeezer of
/// parameter zeta, fire the detector's click element on the ancilla, trace
/// it out. Converges to ideal addition with trace distance O(zeta^2).
HeraldOutcome add_physical(const State& state, int mode, double zeta, const DetectorModel& det);

/// Prepare a two-mode squeezed (EPR) pair with amplitude lambda, split the
/// herald arm through a balanced beam-splitter tree with 2^tree_depth
/// leaves, fire the detector on the first k leaves (idle on the rest), and
/// trace every leaf. With a single leaf a number-resolving detector reads
/// k directly; with several leaves each firing leaf registers one photon.
HeraldOutcome herald_fock(int k, double lambda, const DetectorModel& det, int tree_depth,
                          int cutoff);

/// Condition on a quadrature-window measurement x_theta in [x_lo, x_hi] on
/// one mode, then trace that mode. Infinite bounds mean a half/full line.
HeraldOutcome condition_on_quadrature(const State& state, int mode, double theta, double x_lo,
                                      double x_hi);

/// One step of an ideal ladder-operator sequence on a single mode.
enum class SequenceOp { add, subtract };

/// Apply the steps left to right with a single final normalization.
HeraldOutcome apply_sequence(const State& state, const std::vector<SequenceOp>& ops, int mode = 0);

/// c1 * a a^dag + c2 * a^dag a on the chosen mode.
HeraldOutcome superpose_sequences(const State& state, cplx c1, cplx c2, int mode = 0);

/// a * n + b * 1 on the chosen mode.
HeraldOutcome affine_number_op(const State& state, cplx a, cplx b, int mode = 0);

enum class OrthogonalizeOp { creation, number };

/// Map |psi> to the normalized (C - <C>)|psi>, orthogonal to the input; with
/// coefficients (mu, nu) produce mu|psi> + nu|psi_perp> instead.
HeraldOutcome orthogonalize(const State& state, OrthogonalizeOp c, int mode = 0, cplx mu = 0.0,
                            cplx nu = 1.0);

struct KerrResult {
  HeraldOutcome outcome;
  double fidelity = 0.0;
  cplx c1;
  cplx c2;
};

/// Search the (c1, c2) coefficients of c1 a a^dag + c2 a^dag a that best
/// emulate a photon-number pi phase flip on the |2> component for states
/// supported (>= 99.5%) on {|0>..|subspace_max>}.
KerrResult kerr_emulate(const State& state, int subspace_max = 2, int mode = 0);

}  // namespace focksmith
