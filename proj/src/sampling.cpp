#include "focksmith/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace focksmith {

namespace {

/// splitmix64 step: the standard finalizer-style mixer.
std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr int kCdfPoints = 8193;

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
  std::uint64_t s = seed;
  engine_.seed(splitmix64(s));
}

RngStream RngStream::child(std::uint64_t label) const {
  std::uint64_t s = seed_;
  const std::uint64_t mixed = splitmix64(s);
  std::uint64_t combined = mixed ^ (label + 0x9e3779b97f4a7c15ULL);
  return RngStream(splitmix64(combined));
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<QuadratureSample> sample_homodyne(const State& state, int mode,
                                              const std::vector<double>& phases, int n_per_phase,
                                              std::uint64_t rng_seed) {
  if (phases.empty()) throw std::invalid_argument("sample_homodyne: no phases given");
  if (n_per_phase < 1) throw std::invalid_argument("sample_homodyne: n_per_phase must be >= 1");
  const ModeSpace& space = state.space();
  space.check_mode(mode);

  const double bound = quadrature_support_bound(space.levels());
  RVec grid(kCdfPoints);
  const double step = 2.0 * bound / (kCdfPoints - 1);
  for (int i = 0; i < kCdfPoints; ++i) grid(i) = -bound + i * step;

  const RngStream root(rng_seed);
  std::vector<QuadratureSample> samples;
  samples.reserve(phases.size() * static_cast<std::size_t>(n_per_phase));
  for (std::size_t pi = 0; pi < phases.size(); ++pi) {
    const double theta = phases[pi];
    const RVec pdf = quadrature_pdf(state, mode, theta, grid);
    // Trapezoid cumulative distribution over the grid.
    RVec cdf(kCdfPoints);
    cdf(0) = 0.0;
    for (int i = 1; i < kCdfPoints; ++i) {
      cdf(i) = cdf(i - 1) + 0.5 * (pdf(i - 1) + pdf(i)) * step;
    }
    const double total = cdf(kCdfPoints - 1);
    if (total <= 0.0) {
      throw std::runtime_error("sample_homodyne: quadrature density integrated to zero");
    }
    RngStream stream = root.child(pi);
    for (int s = 0; s < n_per_phase; ++s) {
      const double u = stream.uniform() * total;
      // Binary search for the bracketing grid cell, then linear inverse.
      const double* begin = cdf.data();
      const double* it = std::upper_bound(begin, begin + kCdfPoints, u);
      int hi = static_cast<int>(it - begin);
      hi = std::clamp(hi, 1, kCdfPoints - 1);
      const double c0 = cdf(hi - 1);
      const double c1 = cdf(hi);
      const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
      samples.push_back({theta, grid(hi - 1) + frac * step});
    }
  }
  return samples;
}

}  // namespace focksmith
