#pragma once

#include <vector>

#include "focksmith/state.hpp"

namespace focksmith {

/// One homodyne data point: local-oscillator phase and measured quadrature
/// value, in units where the vacuum variance is 1/2.
struct QuadratureSample {
  double theta = 0.0;
  double x = 0.0;
};

/// Fock-basis wavefunctions <n|x> for n = 0..levels-1 (Hermite functions
/// normalized so the vacuum has variance 1/2).
RVec hermite_psi(int levels, double x);

/// x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2) on one mode.
OperatorMatrix quadrature_operator(double theta, int cutoff);

/// Probability density of measuring x_theta on the chosen mode, evaluated on
/// the given grid.
RVec quadrature_pdf(const State& state, int mode, double theta, const RVec& x_grid);

/// Radius beyond which every retained Fock level's wavefunction is
/// negligible; windows are clipped to [-bound, bound].
double quadrature_support_bound(int levels);

/// Real symmetric overlap matrix B(m,n) = integral over [x_lo, x_hi] of
/// psi_m(x) psi_n(x) dx (clipped to the support bound).
RMat hermite_window_overlap(double x_lo, double x_hi, int levels);

/// Positive operator for "x_theta landed in [x_lo, x_hi]":
/// M(m,n) = e^{i theta (m-n)} B(m,n). Infinities denote half/full lines;
/// the full line returns the exact identity.
Mat quadrature_window_matrix(double theta, double x_lo, double x_hi, int levels);

/// Nodes and weights of an n-point Gauss-Legendre rule on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace focksmith
