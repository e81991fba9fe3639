#pragma once

#include <vector>

#include "focksmith/state.hpp"

namespace focksmith {

/// Kraus operators of the single-mode pure-loss channel with transmission
/// eta: K_k[m,n] = delta_{m,n-k} sqrt(C(n,k) eta^(n-k) (1-eta)^k).
std::vector<Mat> pure_loss_kraus(double eta, int levels);

/// Trace-preserving bosonic loss on one mode; eta=1 is the identity,
/// eta=0 maps the mode to vacuum.
DensityOperator pure_loss(const DensityOperator& rho, int mode, double eta);
State pure_loss(const State& state, int mode, double eta);

}  // namespace focksmith
