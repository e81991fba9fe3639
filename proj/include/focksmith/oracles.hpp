#pragma once

#include <string>
#include <vector>

#include "focksmith/types.hpp"

namespace focksmith {

// Reference computations kept deliberately independent of the production
// operator pipeline: matrix exponentials here use scaling-and-squaring of the
// plain Taylor series, and every closed form is spelled out locally.  Tests
// compare production results against these; `focksmith oracle <name>` prints
// them for inspection.

// Taylor-series matrix exponential with scaling and squaring.
Mat expm_taylor(const Mat& generator);

// Fidelity between aa'|alpha> (normalized) and |2 alpha>, by direct Fock
// expansion truncated at `cutoff`.
double amplifier_fidelity_exact(double alpha, int cutoff);

// The same fidelity in closed form: e^{-alpha^2} (1 + 2 alpha^2)^2 /
// (1 + 3 alpha^2 + alpha^4).
double amplifier_fidelity_closed_form(double alpha);

// Unnormalized signal-mode Fock weights after a two-click on/off herald on a
// twin beam split across two unit-efficiency leaves:
// w_n = (1 - lambda^2) lambda^{2n} (1 - 2^{1-n} + [n == 0]).
RVec herald_two_click_weights(double lambda, int levels);

// Logarithmic negativity of the two-mode squeezed state with parameter
// lambda: log2((1 + lambda) / (1 - lambda)).
double epr_log_negativity(double lambda);

// Amplitude maximizing |<m=1 branch overlap>| for the hybrid qubit:
// |alpha'| = (|alpha| + sqrt(|alpha|^2 + 4)) / 2, phase of alpha.
cplx hybrid_alpha_prime_closed_form(cplx alpha);

// Success probability of the ideal single-photon scissors herald on input
// |alpha>: (e^{-alpha^2} / 4)(1 + alpha^2) for real alpha.
double scissors_success_probability(double alpha);

// Unnormalized amplitudes of (a1^dag + e^{i phi} a2^dag)|alpha, alpha> on a
// two-mode grid, built directly from coherent amplitudes.
Vec delocalized_addition_amplitudes(double alpha, double phi, int levels);

// Squared norm of the state above: 2 (1 + alpha^2 (1 + cos phi)).
double delocalized_addition_norm(double alpha, double phi);

// Mean photon number of a photon-subtracted thermal state: 2 nbar.
double thermal_subtracted_mean(double nbar);

// Row m of the displacement operator acting on vacuum:
// <m|D(beta)|0> = e^{-|beta|^2 / 2} beta^m / sqrt(m!).
Vec displacement_column_closed_form(cplx beta, int levels);

// Named oracle reports for the command line.
std::vector<std::string> oracle_names();
std::string run_oracle(const std::string& name);

}  // namespace focksmith
