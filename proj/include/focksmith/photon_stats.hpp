#pragma once

#include <vector>

#include "focksmith/state.hpp"

namespace focksmith {

/// Photon-number distribution P(n) of one mode (others traced out).
RVec photon_marginal(const State& state, int mode);

/// Joint photon-number distribution P(n_a, n_b) of a mode pair.
RMat photon_joint(const State& state, int mode_a = 0, int mode_b = 1);

struct DiscorrelationResult {
  bool discorrelated = false;  ///< Every diagonal joint element below tolerance.
  double max_diagonal = 0.0;   ///< max_n P(n, n).
};

/// Check the two-mode discorrelation property: the joint photon-number
/// distribution vanishes on its diagonal while the marginals do not.
DiscorrelationResult discorrelation_check(const State& state, int mode_a = 0, int mode_b = 1,
                                          double tol = 1e-9);

/// Mean photon number of one mode.
double mean_photon(const State& state, int mode = 0);

/// Purity Tr[rho^2] of the full state.
double state_purity(const State& state);

}  // namespace focksmith
