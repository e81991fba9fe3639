#pragma once

#include <string>

#include "focksmith/state.hpp"

namespace focksmith {

enum class StateKind {
  vacuum,
  fock,
  coherent,
  thermal,
  squeezed_vacuum,
  cat,
  epr,
  sp_entangled,
  hybrid,
  two_mode_added_coherent,
};

std::string state_kind_name(StateKind kind);
StateKind parse_state_kind(const std::string& name);
/// Number of modes the constructor for this kind produces (1 or 2).
int state_kind_modes(StateKind kind);

/// Parameter bundle for make_state; which fields are read depends on kind:
///   fock: n. coherent: alpha. thermal: nbar. squeezed_vacuum: lambda.
///   cat: alpha, parity. epr: lambda. sp_entangled: c1, c2, phi.
///   hybrid: alpha, phi, optional alpha_prime. two_mode_added_coherent: alpha, phi.
struct StateSpec {
  StateKind kind = StateKind::vacuum;
  cplx alpha{0.0, 0.0};
  int n = 0;
  double nbar = 0.0;
  double lambda = 0.0;
  int parity = +1;  // +1 even, -1 odd
  cplx c1{1.0, 0.0};
  cplx c2{0.0, 0.0};
  double phi = 0.0;
  cplx alpha_prime{0.0, 0.0};
  bool has_alpha_prime = false;

  bool operator==(const StateSpec&) const = default;
};

/// Build the named state on the given space. Single-mode kinds need a
/// single-mode space, entangled kinds a two-mode one (vacuum fits any).
/// Thermal states come back mixed; everything else is a normalized ket.
State make_state(const StateSpec& spec, const ModeSpace& space);

/// The two-mode state obtained by applying the balanced delocalized
/// addition (a1^dag + e^{i phi} a2^dag) to |alpha>|alpha> and normalizing.
/// The squared norm of the unnormalized form is 2[1 + |alpha|^2 (1+cos phi)].
Ket make_two_mode_added_coherent(cplx alpha, double phi, const ModeSpace& space);

/// Fock coefficients of |alpha> up to the cutoff: e^{-|a|^2/2} a^n / sqrt(n!).
Vec coherent_amplitudes(cplx alpha, int levels);

/// The lambda of the squeezed-vacuum amplitude pattern produced by
/// exponentiating the squeeze generator with parameter zeta, fitted
/// numerically from the n=0 and n=2 amplitudes.
double fitted_lambda_from_zeta(double zeta);

/// Default amplitude for the hybrid state's coherent branch: the alpha'
/// maximizing fidelity between the photon-added coherent state and a
/// coherent state, found by a numeric scan.
cplx default_hybrid_alpha_prime(cplx alpha);

}  // namespace focksmith
