#pragma once

#include "focksmith/state.hpp"

namespace focksmith {

enum class LadderKind { create, annihilate, number };

/// Raw single-mode ladder matrix of size levels = cutoff + 1.
/// annihilate|n> = sqrt(n)|n-1>; create|n> = sqrt(n+1)|n+1> with
/// create|cutoff> = 0 (truncation); number = create * annihilate exactly.
Mat ladder_matrix(LadderKind kind, int levels);

/// Variant carrying its single-mode space.
OperatorMatrix ladder(LadderKind kind, int cutoff);

/// Matrix exponential of an anti-Hermitian generator, computed by
/// eigendecomposition of iG on the connected components of G's sparsity
/// graph. Exactly unitary up to floating error for any truncation, because
/// a principal truncation of an anti-Hermitian matrix stays anti-Hermitian.
Mat expm_antihermitian(const Mat& g);

/// Two-mode cores act on a (levels^2)-dimensional pair space with the first
/// mode of the pair slowest-varying: pair index = n_first * levels + n_second.
Mat beam_splitter_core(double tau, int levels);
Mat two_mode_squeeze_core(double zeta, int levels);
Mat single_mode_squeeze_core(double zeta, int levels);
Mat displacement_core(cplx alpha, int levels);
Vec phase_rotation_diag(double theta, int levels);

/// Full-space unitaries (generator conventions):
///   beam_splitter:       exp[tau (a b^dag - a^dag b)], a on mode_a, b on mode_b
///   two_mode_squeeze:    exp[zeta (a^dag b^dag - a b)]
///   single_mode_squeeze: exp[zeta (a^dag^2 - a^2)]
///   displacement:        exp[alpha a^dag - conj(alpha) a]
///   phase_rotation:      exp[i theta n]
OperatorMatrix beam_splitter(double tau, int mode_a, int mode_b, const ModeSpace& space);
OperatorMatrix two_mode_squeeze(double zeta, int mode_a, int mode_b, const ModeSpace& space);
OperatorMatrix single_mode_squeeze(double zeta, int mode, const ModeSpace& space);
OperatorMatrix displacement(cplx alpha, int mode, const ModeSpace& space);
OperatorMatrix phase_rotation(double theta, int mode, const ModeSpace& space);

/// Tensor a single-mode operator with the identity on all other modes.
OperatorMatrix embed(const OperatorMatrix& op, int mode, const ModeSpace& space);
/// Same for a two-mode core (mode_a is the slow pair index).
OperatorMatrix embed_pair(const Mat& core, int mode_a, int mode_b, const ModeSpace& space);

/// Apply a single-mode matrix (levels x levels) to one mode of a state,
/// leaving the others untouched. The matrix need not be unitary; density
/// operators are mapped to M rho M^dag.
Ket apply_one_mode(const Ket& psi, const Mat& m, int mode);
DensityOperator apply_one_mode(const DensityOperator& rho, const Mat& m, int mode);
State apply_one_mode(const State& state, const Mat& m, int mode);

/// Apply a two-mode core (levels^2 x levels^2, mode_a slow) to a mode pair.
Ket apply_two_mode(const Ket& psi, const Mat& core, int mode_a, int mode_b);
DensityOperator apply_two_mode(const DensityOperator& rho, const Mat& core, int mode_a, int mode_b);
State apply_two_mode(const State& state, const Mat& core, int mode_a, int mode_b);

}  // namespace focksmith
