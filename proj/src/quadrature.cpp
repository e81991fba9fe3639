#include "focksmith/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "focksmith/algebra.hpp"

namespace focksmith {

namespace {

constexpr int kGaussNodes = 16;
constexpr double kMaxCellWidth = 0.05;

/// Accumulate the window overlap integral over [a, b] into acc.
void accumulate_overlap(RMat& acc, double a, double b, int levels) {
  if (!(b > a)) return;
  const int cells = std::max(1, static_cast<int>(std::ceil((b - a) / kMaxCellWidth)));
  const double h = (b - a) / cells;
  std::vector<double> nodes, weights;
  gauss_legendre(kGaussNodes, 0.0, 1.0, nodes, weights);
  for (int c = 0; c < cells; ++c) {
    const double lo = a + c * h;
    for (int q = 0; q < kGaussNodes; ++q) {
      const double x = lo + nodes[q] * h;
      const double w = weights[q] * h;
      const RVec psi = hermite_psi(levels, x);
      acc.selfadjointView<Eigen::Lower>().rankUpdate(psi, w);
    }
  }
}

}  // namespace

RVec hermite_psi(int levels, double x) {
  if (levels < 1) throw std::invalid_argument("hermite_psi: levels must be >= 1");
  RVec psi(levels);
  psi(0) = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (levels > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
  for (int n = 2; n < levels; ++n) {
    psi(n) = x * std::sqrt(2.0 / n) * psi(n - 1) - std::sqrt((n - 1.0) / n) * psi(n - 2);
  }
  return psi;
}

OperatorMatrix quadrature_operator(double theta, int cutoff) {
  ModeSpace space(1, cutoff);
  const int levels = space.levels();
  Mat m = Mat::Zero(levels, levels);
  const cplx lower = std::exp(cplx(0.0, -theta)) / std::sqrt(2.0);
  for (int n = 1; n < levels; ++n) {
    m(n - 1, n) = lower * std::sqrt(static_cast<double>(n));
    m(n, n - 1) = std::conj(m(n - 1, n));
  }
  return OperatorMatrix(space, std::move(m));
}

RVec quadrature_pdf(const State& state, int mode, double theta, const RVec& x_grid) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  const int levels = space.levels();
  // Work with the reduced density of the measured mode; phases rotate the
  // Fock basis as <x;theta|n> = e^{-i theta n} psi_n(x).
  const Mat rho = partial_trace(state, {mode}).matrix();
  Vec phases(levels);
  for (int n = 0; n < levels; ++n) phases(n) = std::exp(cplx(0.0, -theta * n));
  const Mat rotated = phases.asDiagonal() * rho * phases.conjugate().asDiagonal();
  RVec pdf(x_grid.size());
  for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
    const Vec psi = hermite_psi(levels, x_grid(i)).cast<cplx>();
    pdf(i) = std::max(0.0, (psi.adjoint() * rotated * psi)(0).real());
  }
  return pdf;
}

double quadrature_support_bound(int levels) {
  return std::sqrt(2.0 * levels + 1.0) + 8.0;
}

RMat hermite_window_overlap(double x_lo, double x_hi, int levels) {
  if (!(x_lo < x_hi)) throw std::invalid_argument("quadrature window: x_lo must be < x_hi");
  const double bound = quadrature_support_bound(levels);
  const double a = std::max(x_lo, -bound);
  const double b = std::min(x_hi, bound);
  RMat acc = RMat::Zero(levels, levels);
  accumulate_overlap(acc, a, b, levels);
  RMat full = acc.selfadjointView<Eigen::Lower>();
  return full;
}

Mat quadrature_window_matrix(double theta, double x_lo, double x_hi, int levels) {
  const double inf = std::numeric_limits<double>::infinity();
  if (x_lo == -inf && x_hi == inf) return Mat::Identity(levels, levels);
  const RMat overlap = hermite_window_overlap(x_lo, x_hi, levels);
  Mat m(levels, levels);
  for (int col = 0; col < levels; ++col) {
    for (int row = 0; row < levels; ++row) {
      m(row, col) = std::exp(cplx(0.0, theta * (row - col))) * overlap(row, col);
    }
  }
  return m;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  // Newton iteration on P_n from the Chebyshev-angle initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    nodes[static_cast<std::size_t>(n - 1 - i)] = -x;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  // Map from [-1, 1] to [a, b].
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<std::size_t>(i)] = mid + half * nodes[static_cast<std::size_t>(i)];
    weights[static_cast<std::size_t>(i)] *= half;
  }
}

}  // namespace focksmith
