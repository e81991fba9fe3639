#pragma once

#include <vector>

#include "focksmith/quadrature.hpp"
#include "focksmith/state.hpp"

namespace focksmith {

struct TomographyConfig {
  int cutoff = 10;
  double bin_width = 0.1;      ///< Quadrature bin width on [-6, 6]; tails aggregate.
  int max_iterations = 500;
  double likelihood_tol = 1e-9;  ///< Stop on this relative log-likelihood change.
};

struct TomographyResult {
  DensityOperator rho;
  std::vector<double> log_likelihood;  ///< One entry per completed iteration.
  int iterations = 0;
};

/// Iterative maximum-likelihood reconstruction from homodyne samples with
/// binned quadrature projectors: rho <- N[R rho R], R = sum_j (c_j / p_j) Pi_j.
/// The log-likelihood is non-decreasing across iterations.
TomographyResult maxlik_reconstruct(const std::vector<QuadratureSample>& samples,
                                    const TomographyConfig& config);

}  // namespace focksmith
