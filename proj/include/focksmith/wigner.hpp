#pragma once

#include "focksmith/state.hpp"

namespace focksmith {

/// Square phase-space grid for Wigner evaluation, symmetric about the
/// origin, in quadrature units (vacuum variance 1/2 along each axis).
struct WignerGridSpec {
  double half_width = 6.0;
  int points = 201;
};

struct WignerGrid {
  RVec xs;      ///< Grid along the x quadrature.
  RVec ps;      ///< Grid along the p quadrature.
  RMat values;  ///< values(i, j) = W(xs(i), ps(j)).

  double dx() const;
  double dp() const;
  /// Riemann sum of W dx dp; ~1 for normalized states on an adequate grid.
  double integral() const;
  double min_value() const;
  /// Sum of |W| dx dp over the negative region.
  double negativity_volume() const;
};

/// Closed-form matrix elements <m|D(beta)|n> of the displacement operator,
/// exp(beta a^dag - conj(beta) a), truncated to `levels` Fock levels.
Mat displacement_matrix(cplx beta, int levels);

/// W(x, p) for a single-mode density matrix, normalized so that
/// integral W dx dp = 1; computed from the displaced-parity kernel.
double wigner_point(const Mat& rho, double x, double p);

/// Default grid, widened when the state's energy calls for it.
WignerGridSpec default_wigner_grid(const State& state, int mode = 0);

/// Wigner function of the chosen mode (other modes are traced out).
WignerGrid wigner(const State& state, int mode, const WignerGridSpec& spec);
WignerGrid wigner(const State& state, int mode = 0);

/// Negative volume of the default-grid Wigner function of the chosen mode.
double wigner_negativity_volume(const State& state, int mode = 0);

}  // namespace focksmith
