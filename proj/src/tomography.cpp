#include "focksmith/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace focksmith {

namespace {

constexpr double kInteriorHalfWidth = 6.0;
constexpr double kPhaseKey = 1e-9;  ///< Phases closer than this count as equal.

struct BinLayout {
  int interior_bins = 0;  ///< Bins of width bin_width covering [-6, 6].
  int total_bins = 0;     ///< Interior plus two tail bins.
  double bin_width = 0.0;

  int bin_of(double x) const {
    if (x < -kInteriorHalfWidth) return 0;
    if (x >= kInteriorHalfWidth) return total_bins - 1;
    int b = static_cast<int>((x + kInteriorHalfWidth) / bin_width);
    b = std::min(b, interior_bins - 1);
    return 1 + b;
  }
};

}  // namespace

TomographyResult maxlik_reconstruct(const std::vector<QuadratureSample>& samples,
                                    const TomographyConfig& config) {
  if (samples.empty()) throw std::invalid_argument("maxlik_reconstruct: empty sample set");
  if (config.cutoff < 1) throw std::invalid_argument("maxlik_reconstruct: cutoff must be >= 1");
  if (!(config.bin_width > 0.0) ||
      2.0 * kInteriorHalfWidth / config.bin_width < 20.0) {
    throw std::invalid_argument(
        "maxlik_reconstruct: bin_width must be positive and give at least 20 bins on [-6, 6]");
  }
  if (config.max_iterations < 1) {
    throw std::invalid_argument("maxlik_reconstruct: max_iterations must be >= 1");
  }
  if (!(config.likelihood_tol > 0.0)) {
    throw std::invalid_argument("maxlik_reconstruct: likelihood_tol must be > 0");
  }

  // Group samples by phase.
  std::map<long long, std::pair<double, std::vector<double>>> by_phase;
  for (const QuadratureSample& s : samples) {
    if (!std::isfinite(s.theta) || !std::isfinite(s.x)) {
      throw std::invalid_argument("maxlik_reconstruct: non-finite sample");
    }
    const long long key = std::llround(s.theta / kPhaseKey);
    auto& slot = by_phase[key];
    slot.first = s.theta;
    slot.second.push_back(s.x);
  }
  if (by_phase.size() < 8) {
    std::ostringstream msg;
    msg << "maxlik_reconstruct: need samples at >= 8 distinct phases, got " << by_phase.size();
    throw std::invalid_argument(msg.str());
  }

  const int levels = config.cutoff + 1;
  BinLayout layout;
  layout.bin_width = config.bin_width;
  layout.interior_bins =
      static_cast<int>(std::lround(2.0 * kInteriorHalfWidth / config.bin_width));
  layout.total_bins = layout.interior_bins + 2;

  // Phase-independent overlap blocks B_j = integral over bin of psi psi^T;
  // the high tail is the exact complement so the set sums to the identity.
  std::vector<RMat> blocks(static_cast<std::size_t>(layout.total_bins));
  const double bound = quadrature_support_bound(levels);
  blocks[0] = hermite_window_overlap(-bound, -kInteriorHalfWidth, levels);
  RMat running = blocks[0];
  for (int b = 0; b < layout.interior_bins; ++b) {
    const double lo = -kInteriorHalfWidth + b * config.bin_width;
    blocks[static_cast<std::size_t>(1 + b)] =
        hermite_window_overlap(lo, lo + config.bin_width, levels);
    running += blocks[static_cast<std::size_t>(1 + b)];
  }
  blocks[static_cast<std::size_t>(layout.total_bins - 1)] =
      RMat::Identity(levels, levels) - running;

  // Per-phase POVMs Pi(m,n) = e^{i theta (m-n)} B(m,n) and bin counts.
  struct PhaseData {
    Mat phase_rows;             // phase_rows(m,n) = e^{i theta (m-n)}
    std::vector<double> counts; // per bin
  };
  std::vector<PhaseData> phases;
  phases.reserve(by_phase.size());
  double total_counts = 0.0;
  for (const auto& [key, slot] : by_phase) {
    (void)key;
    PhaseData data;
    data.phase_rows.resize(levels, levels);
    for (int n = 0; n < levels; ++n) {
      for (int m = 0; m < levels; ++m) {
        data.phase_rows(m, n) = std::exp(cplx(0.0, slot.first * (m - n)));
      }
    }
    data.counts.assign(static_cast<std::size_t>(layout.total_bins), 0.0);
    for (double x : slot.second) {
      data.counts[static_cast<std::size_t>(layout.bin_of(x))] += 1.0;
      total_counts += 1.0;
    }
    phases.push_back(std::move(data));
  }

  Mat rho = Mat::Identity(levels, levels) / static_cast<double>(levels);
  TomographyResult result{DensityOperator(ModeSpace(1, config.cutoff), rho), {}, 0};

  double prev_ll = 0.0;
  for (int it = 0; it < config.max_iterations; ++it) {
    // Bin probabilities and the R operator for the current iterate.
    Mat r = Mat::Zero(levels, levels);
    double ll = 0.0;
    for (const PhaseData& data : phases) {
      const Mat rotated = data.phase_rows.conjugate().cwiseProduct(rho);
      for (int b = 0; b < layout.total_bins; ++b) {
        const double c = data.counts[static_cast<std::size_t>(b)];
        const RMat& block = blocks[static_cast<std::size_t>(b)];
        // p = Tr[rho Pi] with Pi = phase_rows o block (elementwise).
        double p = 0.0;
        for (int n = 0; n < levels; ++n) {
          for (int m = 0; m < levels; ++m) {
            p += (rotated(m, n) * block(m, n)).real();
          }
        }
        p = std::max(p, 1e-300);
        if (c > 0.0) {
          ll += c * std::log(p);
          r += (c / p) * data.phase_rows.cwiseProduct(block.cast<cplx>());
        }
      }
    }
    r /= total_counts;

    if (it > 0 && ll < prev_ll - 1e-9 * std::abs(prev_ll) - 1e-12) {
      throw std::runtime_error("maxlik_reconstruct: log-likelihood decreased");
    }
    const bool converged = it > 0 && std::abs(ll - prev_ll) <=
                                         config.likelihood_tol * std::abs(prev_ll);
    prev_ll = ll;
    result.log_likelihood.push_back(ll);
    result.iterations = it + 1;
    if (converged) break;

    Mat next = r * rho * r;
    next = 0.5 * (next + next.adjoint()).eval();
    const double tr = next.trace().real();
    if (!(tr > 0.0)) throw std::runtime_error("maxlik_reconstruct: iterate lost its trace");
    rho = next / tr;
  }

  result.rho = DensityOperator(ModeSpace(1, config.cutoff), rho);
  result.rho.validate();
  return result;
}

}  // namespace focksmith
