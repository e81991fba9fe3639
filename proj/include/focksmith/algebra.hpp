#pragma once

#include <utility>
#include <vector>

#include "focksmith/state.hpp"

namespace focksmith {

/// Kronecker product of kets; earlier factors become lower (slower) modes.
Ket tensor(const Ket& a, const Ket& b);
Ket tensor(const std::vector<Ket>& factors);

/// Reduced density operator over the kept modes (order preserved, ascending).
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);
/// Same reduction of |psi><psi| without forming the full outer product.
DensityOperator partial_trace(const Ket& psi, const std::vector<int>& keep);
DensityOperator partial_trace(const State& state, const std::vector<int>& keep);

struct ProjectionResult {
  Ket state;           // normalized, on the space without the measured mode
  double probability;  // squared norm of the projected branch
};

/// Project one mode onto the Fock level n and drop that mode.
ProjectionResult project_fock(const Ket& psi, int mode, int n);

struct ConditionResult {
  State state;         // normalized, on the space without the measured mode
  double probability;  // trace of the conditioned branch
};

/// Condition on a Fock-diagonal POVM element (diag holds its eigenvalues
/// per photon number) applied to one mode, then trace that mode out.
ConditionResult condition_fock_diag(const State& state, int mode, const RVec& diag);

/// Condition on a general positive operator on one mode, then trace that
/// mode out: Tr_mode[(element x 1) rho] / probability.
ConditionResult condition_mode(const State& state, int mode, const Mat& element);

struct NormalizeResult {
  Ket state;
  double norm;  // pre-normalization Euclidean norm
};

NormalizeResult normalize(const Ket& psi);

cplx expectation(const State& state, const OperatorMatrix& op);
/// Expectation of a single-mode observable embedded on the chosen mode.
cplx expectation_one_mode(const State& state, const Mat& m, int mode);

/// Fidelity, squared-overlap convention: |<a|b>|^2 for pure states,
/// <psi|rho|psi> for pure-vs-mixed, (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
/// in general. Symmetric; 1 iff the states agree up to global phase.
double fidelity(const State& a, const State& b);

/// (1/2) * trace norm of the difference.
double trace_distance(const DensityOperator& a, const DensityOperator& b);
double trace_distance(const State& a, const State& b);

/// Append a vacuum mode after the existing ones (it becomes fastest-varying).
State append_vacuum_mode(const State& state);

}  // namespace focksmith
