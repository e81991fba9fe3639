#pragma once

#include <variant>

#include "focksmith/fock_space.hpp"

namespace focksmith {

/// Pure state: complex amplitude per Fock basis vector.
class Ket {
 public:
  Ket(ModeSpace space, Vec amplitudes);

  /// Vacuum |0,...,0>.
  static Ket vacuum(const ModeSpace& space);
  /// Single basis vector |n_1,...,n_M>.
  static Ket basis(const ModeSpace& space, const std::vector<int>& occupation);

  const ModeSpace& space() const { return space_; }
  const Vec& amplitudes() const { return amplitudes_; }
  Vec& amplitudes() { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  double squared_norm() const { return amplitudes_.squaredNorm(); }
  bool is_normalized(double tol = kNormTol) const;
  void check_normalized(double tol = kNormTol) const;

  /// Population of the top `levels` Fock levels of one mode.
  double top_level_population(int mode, int levels = 2) const;

 private:
  ModeSpace space_;
  Vec amplitudes_;
};

/// Mixed state: dense Hermitian matrix in the Fock basis.
class DensityOperator {
 public:
  DensityOperator(ModeSpace space, Mat matrix);

  static DensityOperator from_ket(const Ket& ket);

  const ModeSpace& space() const { return space_; }
  const Mat& matrix() const { return matrix_; }
  Mat& matrix() { return matrix_; }

  double trace_real() const { return matrix_.trace().real(); }
  double purity() const;

  /// Enforces the representation invariants: Hermiticity to 1e-10,
  /// minimum eigenvalue >= -1e-8, and (optionally) unit trace to 1e-10.
  void validate(bool require_unit_trace = true) const;

  double top_level_population(int mode, int levels = 2) const;

 private:
  ModeSpace space_;
  Mat matrix_;
};

/// Dense operator on a ModeSpace; no normalization constraint.
class OperatorMatrix {
 public:
  OperatorMatrix(ModeSpace space, Mat matrix);

  static OperatorMatrix identity(const ModeSpace& space);

  const ModeSpace& space() const { return space_; }
  const Mat& matrix() const { return matrix_; }
  Mat& matrix() { return matrix_; }

  bool is_unitary(double tol = 1e-10) const;

 private:
  ModeSpace space_;
  Mat matrix_;
};

/// Either a Ket or a DensityOperator. Heralded operations and the plan
/// runner are generic over purity; conditioning can turn pure into mixed.
class State {
 public:
  State(Ket ket) : value_(std::move(ket)) {}                // NOLINT(google-explicit-constructor)
  State(DensityOperator rho) : value_(std::move(rho)) {}    // NOLINT(google-explicit-constructor)

  bool is_pure() const { return std::holds_alternative<Ket>(value_); }
  const Ket& ket() const;
  const DensityOperator& rho() const;
  const ModeSpace& space() const;

  /// Pure states are promoted to |psi><psi|; mixed states returned as-is.
  DensityOperator to_density() const;

  double top_level_population(int mode, int levels = 2) const;

 private:
  std::variant<Ket, DensityOperator> value_;
};

}  // namespace focksmith
