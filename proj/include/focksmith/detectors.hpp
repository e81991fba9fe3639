#pragma once

#include <string>
#include <vector>

#include "focksmith/types.hpp"

namespace focksmith {

/// Photodetector models used to condition heralded preparations. All models
/// are diagonal in the Fock basis, so each POVM element is described by its
/// diagonal weights on |n><n|.
enum class DetectorKind {
  projective,  ///< Ideal number-resolving projector family {|n><n|}.
  on_off,      ///< Click/no-click bucket detector with efficiency and dark counts.
  pnr,         ///< Binomial-loss photon-number-resolving detector, counts 0..max_count.
};

struct DetectorModel {
  DetectorKind kind = DetectorKind::projective;
  int n = 1;               ///< Heralding outcome for projective detectors.
  double efficiency = 1.0; ///< Per-photon detection probability (on_off, pnr).
  double dark_rate = 0.0;  ///< False-click probability (on_off only).
  int max_count = 1;       ///< Highest resolvable count (pnr); that bin aggregates >= max_count.

  static DetectorModel projective(int n);
  static DetectorModel on_off(double efficiency, double dark_rate = 0.0);
  static DetectorModel pnr(double efficiency, int max_count);

  std::string describe() const;

  /// Diagonal weights of the POVM element for registering exactly `count`
  /// photons on a mode with `levels` Fock levels:
  ///  - projective: indicator of `count` photons.
  ///  - on_off: count 0 = no-click element (1-dark)(1-eta)^m, count 1 = click.
  ///  - pnr: P(count | m) = C(m,count) eta^count (1-eta)^(m-count); the
  ///    count == max_count element aggregates all higher outcomes.
  RVec count_diag(int count, int levels) const;

  /// The element that heralds success for single-quantum exchanges:
  /// projective -> outcome n, on_off -> click, pnr -> one count.
  RVec click_diag(int levels) const;

  /// True when a firing outcome pins the photon number exactly (unit
  /// efficiency number resolution), so heralded pure inputs stay pure.
  bool resolves_number() const;

  /// Number of outcomes in the complete POVM for this model.
  int num_outcomes(int levels) const;
};

/// Full diagonal POVM set for the detector: every element, summing to the
/// identity on the measured mode.
std::vector<RVec> detector_povm_diags(const DetectorModel& det, int levels);

}  // namespace focksmith
