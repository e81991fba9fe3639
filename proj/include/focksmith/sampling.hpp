#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "focksmith/quadrature.hpp"
#include "focksmith/state.hpp"

namespace focksmith {

/// Deterministic splittable random stream. Children are derived from the
/// parent seed and a label, so results do not depend on evaluation order;
/// uniforms are built from raw 64-bit draws for bit-stable output across
/// platforms and standard-library versions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Independent child stream labelled by an index.
  RngStream child(std::uint64_t label) const;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Draw homodyne samples by inverse-CDF sampling of the exact quadrature
/// density; each phase uses its own child stream of the seed.
std::vector<QuadratureSample> sample_homodyne(const State& state, int mode,
                                              const std::vector<double>& phases, int n_per_phase,
                                              std::uint64_t rng_seed);

}  // namespace focksmith
