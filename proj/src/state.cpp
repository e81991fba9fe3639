#include "focksmith/state.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>
#include <stdexcept>
#include <utility>

namespace focksmith {

namespace {

/// Sum of diagonal populations over basis states whose occupation of `mode`
/// lies in the top `levels` levels of the truncated ladder.
template <typename DiagFn>
double top_population_impl(const ModeSpace& space, int mode, int levels, DiagFn&& diag) {
  space.check_mode(mode);
  if (levels < 1 || levels > space.levels()) {
    throw std::invalid_argument("top_level_population: levels out of range");
  }
  const int lowest = space.levels() - levels;
  double total = 0.0;
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    if (space.mode_occupation(i, mode) >= lowest) total += diag(i);
  }
  return total;
}

}  // namespace

Ket::Ket(ModeSpace space, Vec amplitudes) : space_(space), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.dim()) {
    std::ostringstream msg;
    msg << "Ket: amplitude vector has length " << amplitudes_.size() << " but space has dimension "
        << space_.dim();
    throw std::invalid_argument(msg.str());
  }
}

Ket Ket::vacuum(const ModeSpace& space) {
  Vec amp = Vec::Zero(space.dim());
  amp(0) = 1.0;
  return Ket(space, std::move(amp));
}

Ket Ket::basis(const ModeSpace& space, const std::vector<int>& occupation) {
  Vec amp = Vec::Zero(space.dim());
  amp(space.index_of(occupation)) = 1.0;
  return Ket(space, std::move(amp));
}

bool Ket::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

void Ket::check_normalized(double tol) const {
  if (!is_normalized(tol)) {
    std::ostringstream msg;
    msg << "Ket: norm " << norm() << " deviates from 1 by more than " << tol;
    throw std::invalid_argument(msg.str());
  }
}

double Ket::top_level_population(int mode, int levels) const {
  return top_population_impl(space_, mode, levels,
                             [&](Eigen::Index i) { return std::norm(amplitudes_(i)); });
}

DensityOperator::DensityOperator(ModeSpace space, Mat matrix)
    : space_(space), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    std::ostringstream msg;
    msg << "DensityOperator: matrix is " << matrix_.rows() << "x" << matrix_.cols()
        << " but space has dimension " << space_.dim();
    throw std::invalid_argument(msg.str());
  }
}

DensityOperator DensityOperator::from_ket(const Ket& ket) {
  Mat rho = ket.amplitudes() * ket.amplitudes().adjoint();
  return DensityOperator(ket.space(), std::move(rho));
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

void DensityOperator::validate(bool require_unit_trace) const {
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    std::ostringstream msg;
    msg << "DensityOperator: Hermiticity violation " << herm << " exceeds " << kHermitianTol;
    throw std::invalid_argument(msg.str());
  }
  if (require_unit_trace) {
    const double tr_err = std::abs(matrix_.trace() - cplx(1.0));
    if (tr_err > kTraceTol) {
      std::ostringstream msg;
      msg << "DensityOperator: trace deviates from 1 by " << tr_err;
      throw std::invalid_argument(msg.str());
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (matrix_ + matrix_.adjoint()),
                                            Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < kPositivityFloor) {
    std::ostringstream msg;
    msg << "DensityOperator: minimum eigenvalue " << min_eig << " below floor "
        << kPositivityFloor;
    throw std::invalid_argument(msg.str());
  }
}

double DensityOperator::top_level_population(int mode, int levels) const {
  return top_population_impl(space_, mode, levels,
                             [&](Eigen::Index i) { return matrix_(i, i).real(); });
}

OperatorMatrix::OperatorMatrix(ModeSpace space, Mat matrix)
    : space_(space), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    std::ostringstream msg;
    msg << "OperatorMatrix: matrix is " << matrix_.rows() << "x" << matrix_.cols()
        << " but space has dimension " << space_.dim();
    throw std::invalid_argument(msg.str());
  }
}

OperatorMatrix OperatorMatrix::identity(const ModeSpace& space) {
  return OperatorMatrix(space, Mat::Identity(space.dim(), space.dim()));
}

bool OperatorMatrix::is_unitary(double tol) const {
  const Mat gram = matrix_.adjoint() * matrix_;
  return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= tol;
}

const Ket& State::ket() const {
  if (const auto* k = std::get_if<Ket>(&value_)) return *k;
  throw std::logic_error("State: requested ket() on a mixed state");
}

const DensityOperator& State::rho() const {
  if (const auto* r = std::get_if<DensityOperator>(&value_)) return *r;
  throw std::logic_error("State: requested rho() on a pure state");
}

const ModeSpace& State::space() const {
  return is_pure() ? ket().space() : rho().space();
}

DensityOperator State::to_density() const {
  return is_pure() ? DensityOperator::from_ket(ket()) : rho();
}

double State::top_level_population(int mode, int levels) const {
  return is_pure() ? ket().top_level_population(mode, levels)
                   : rho().top_level_population(mode, levels);
}

}  // namespace focksmith
