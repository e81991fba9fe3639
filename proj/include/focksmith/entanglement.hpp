#pragma once

#include <vector>

#include "focksmith/state.hpp"

namespace focksmith {

/// Logarithmic negativity log2 || rho^{T_A} ||_1 across the bipartition
/// (side_a modes | the rest). Zero for separable states; 1 for a Bell pair.
double log_negativity(const State& state, const std::vector<int>& side_a);

}  // namespace focksmith
