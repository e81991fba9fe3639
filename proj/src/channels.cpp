#include "focksmith/channels.hpp"

#include <cmath>
#include <stdexcept>

#include "focksmith/operators.hpp"

namespace focksmith {

namespace {

double binomial(int n, int k) {
  double acc = 1.0;
  for (int i = 1; i <= k; ++i) acc *= static_cast<double>(n - k + i) / i;
  return acc;
}

}  // namespace

std::vector<Mat> pure_loss_kraus(double eta, int levels) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("pure_loss: eta must lie in [0, 1]");
  if (levels < 2) throw std::invalid_argument("pure_loss: cutoff must be >= 1");
  std::vector<Mat> kraus;
  kraus.reserve(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) {
    Mat m = Mat::Zero(levels, levels);
    for (int n = k; n < levels; ++n) {
      m(n - k, n) = std::sqrt(binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
    }
    kraus.push_back(std::move(m));
  }
  return kraus;
}

DensityOperator pure_loss(const DensityOperator& rho, int mode, double eta) {
  const ModeSpace& space = rho.space();
  space.check_mode(mode);
  const auto kraus = pure_loss_kraus(eta, space.levels());
  Mat out = Mat::Zero(space.dim(), space.dim());
  for (const Mat& k : kraus) {
    out += apply_one_mode(rho, k, mode).matrix();
  }
  return DensityOperator(space, std::move(out));
}

State pure_loss(const State& state, int mode, double eta) {
  return State(pure_loss(state.to_density(), mode, eta));
}

}  // namespace focksmith
