#include "focksmith/photon_stats.hpp"

#include <stdexcept>

namespace focksmith {

RVec photon_marginal(const State& state, int mode) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  RVec p = RVec::Zero(space.levels());
  if (state.is_pure()) {
    const Vec& amp = state.ket().amplitudes();
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      p(space.mode_occupation(i, mode)) += std::norm(amp(i));
    }
  } else {
    const Mat& rho = state.rho().matrix();
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      p(space.mode_occupation(i, mode)) += rho(i, i).real();
    }
  }
  return p;
}

RMat photon_joint(const State& state, int mode_a, int mode_b) {
  const ModeSpace& space = state.space();
  space.check_mode(mode_a);
  space.check_mode(mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("photon_joint: modes must differ");
  RMat p = RMat::Zero(space.levels(), space.levels());
  if (state.is_pure()) {
    const Vec& amp = state.ket().amplitudes();
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      p(space.mode_occupation(i, mode_a), space.mode_occupation(i, mode_b)) += std::norm(amp(i));
    }
  } else {
    const Mat& rho = state.rho().matrix();
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      p(space.mode_occupation(i, mode_a), space.mode_occupation(i, mode_b)) += rho(i, i).real();
    }
  }
  return p;
}

DiscorrelationResult discorrelation_check(const State& state, int mode_a, int mode_b,
                                          double tol) {
  const RMat joint = photon_joint(state, mode_a, mode_b);
  DiscorrelationResult result;
  result.max_diagonal = joint.diagonal().maxCoeff();
  result.discorrelated = result.max_diagonal <= tol;
  return result;
}

double mean_photon(const State& state, int mode) {
  const RVec p = photon_marginal(state, mode);
  double nbar = 0.0;
  for (Eigen::Index n = 0; n < p.size(); ++n) nbar += static_cast<double>(n) * p(n);
  return nbar;
}

double state_purity(const State& state) {
  if (state.is_pure()) {
    const double n2 = state.ket().squared_norm();
    return n2 * n2;
  }
  return state.rho().purity();
}

}  // namespace focksmith
