#include "focksmith/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "focksmith/algebra.hpp"

namespace focksmith {

double WignerGrid::dx() const { return xs.size() > 1 ? xs(1) - xs(0) : 0.0; }
double WignerGrid::dp() const { return ps.size() > 1 ? ps(1) - ps(0) : 0.0; }

double WignerGrid::integral() const { return values.sum() * dx() * dp(); }

double WignerGrid::min_value() const { return values.minCoeff(); }

double WignerGrid::negativity_volume() const {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      if (values(i, j) < 0.0) acc -= values(i, j);
    }
  }
  return acc * dx() * dp();
}

Mat displacement_matrix(cplx beta, int levels) {
  if (levels < 1) throw std::invalid_argument("displacement_matrix: levels must be >= 1");
  Mat d(levels, levels);
  const double z = std::norm(beta);
  const double gauss = std::exp(-0.5 * z);
  // Work one subdiagonal offset k at a time:
  //   <n+k|D|n> = sqrt(n!/(n+k)!) beta^k e^{-z/2} L_n^{(k)}(z)
  // with the generalized Laguerre three-term recurrence in n, and the upper
  // triangle following from D's unitarity structure:
  //   <n|D|n+k> = (-1)^k conj(<n+k|D|n>) for real L.
  cplx head = gauss;  // beta^k / sqrt(k!) * e^{-z/2}
  for (int k = 0; k < levels; ++k) {
    if (k > 0) head *= beta / std::sqrt(static_cast<double>(k));
    double lag_prev = 0.0;
    double lag = 1.0;  // L_0^{(k)}
    cplx pref = head;  // sqrt(n!/(n+k)!) beta^k e^{-z/2}
    for (int n = 0; n + k < levels; ++n) {
      if (n > 0) {
        const double lag_next =
            ((2.0 * n - 1.0 + k - z) * lag - (n - 1.0 + k) * lag_prev) / n;
        lag_prev = lag;
        lag = lag_next;
        pref *= std::sqrt(static_cast<double>(n) / (n + k));
      }
      const cplx value = pref * lag;
      d(n + k, n) = value;
      if (k > 0) d(n, n + k) = (k % 2 == 0 ? 1.0 : -1.0) * std::conj(value);
    }
  }
  return d;
}

double wigner_point(const Mat& rho, double x, double p) {
  const int levels = static_cast<int>(rho.rows());
  // W(x,p) = (1/pi) Tr[rho D(2 alpha) Pi], alpha = (x + i p)/sqrt(2);
  // expanding the trace gives sum_{m,n} (-1)^m rho(m,n) <n|D(2 alpha)|m>.
  const cplx beta = std::sqrt(2.0) * cplx(x, p);
  const Mat d = displacement_matrix(beta, levels);
  cplx acc = 0.0;
  for (int m = 0; m < levels; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    for (int n = 0; n < levels; ++n) acc += sign * rho(m, n) * d(n, m);
  }
  return acc.real() / M_PI;
}

WignerGridSpec default_wigner_grid(const State& state, int mode) {
  const Mat rho = partial_trace(state, {mode}).matrix();
  double nbar = 0.0;
  for (Eigen::Index n = 0; n < rho.rows(); ++n) nbar += n * rho(n, n).real();
  WignerGridSpec spec;
  spec.half_width = std::max(6.0, std::sqrt(2.0 * nbar) + 4.0);
  return spec;
}

WignerGrid wigner(const State& state, int mode, const WignerGridSpec& spec) {
  if (spec.points < 2) throw std::invalid_argument("wigner: grid needs at least 2 points");
  if (!(spec.half_width > 0.0)) throw std::invalid_argument("wigner: half_width must be > 0");
  const Mat rho = partial_trace(state, {mode}).matrix();
  WignerGrid grid;
  grid.xs.resize(spec.points);
  grid.ps.resize(spec.points);
  const double step = 2.0 * spec.half_width / (spec.points - 1);
  for (int i = 0; i < spec.points; ++i) {
    grid.xs(i) = -spec.half_width + i * step;
    grid.ps(i) = -spec.half_width + i * step;
  }
  grid.values.resize(spec.points, spec.points);
  for (int j = 0; j < spec.points; ++j) {
    for (int i = 0; i < spec.points; ++i) {
      grid.values(i, j) = wigner_point(rho, grid.xs(i), grid.ps(j));
    }
  }
  return grid;
}

WignerGrid wigner(const State& state, int mode) {
  return wigner(state, mode, default_wigner_grid(state, mode));
}

double wigner_negativity_volume(const State& state, int mode) {
  return wigner(state, mode).negativity_volume();
}

}  // namespace focksmith
