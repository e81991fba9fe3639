#include "focksmith/entanglement.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace focksmith {

double log_negativity(const State& state, const std::vector<int>& side_a) {
  const ModeSpace& space = state.space();
  if (side_a.empty()) throw std::invalid_argument("log_negativity: side A must be nonempty");
  std::vector<bool> in_a(static_cast<std::size_t>(space.num_modes()), false);
  for (int m : side_a) {
    space.check_mode(m);
    if (in_a[static_cast<std::size_t>(m)]) {
      throw std::invalid_argument("log_negativity: duplicate mode in side A");
    }
    in_a[static_cast<std::size_t>(m)] = true;
  }
  if (static_cast<int>(side_a.size()) == space.num_modes()) {
    throw std::invalid_argument("log_negativity: side A must be a proper subset of the modes");
  }

  // Split each flat index into its side-A and side-B offset contributions.
  const Eigen::Index dim = space.dim();
  std::vector<Eigen::Index> a_part(static_cast<std::size_t>(dim), 0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index a = 0;
    for (int m = 0; m < space.num_modes(); ++m) {
      if (in_a[static_cast<std::size_t>(m)]) {
        a += static_cast<Eigen::Index>(space.mode_occupation(i, m)) * space.stride(m);
      }
    }
    a_part[static_cast<std::size_t>(i)] = a;
  }

  const Mat rho = state.to_density().matrix();
  Mat pt(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Eigen::Index aj = a_part[static_cast<std::size_t>(j)];
    const Eigen::Index bj = j - aj;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Eigen::Index ai = a_part[static_cast<std::size_t>(i)];
      const Eigen::Index bi = i - ai;
      // (T_A): swap the side-A indices between row and column.
      pt(i, j) = rho(aj + bi, ai + bj);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("log_negativity: eigendecomposition failed");
  }
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  return std::max(0.0, std::log2(trace_norm));
}

}  // namespace focksmith
