#pragma once

#include <cstdint>
#include <vector>

#include "focksmith/types.hpp"

namespace focksmith {

/// Truncated multimode Fock space. Basis states are multi-indices
/// (n_1, ..., n_M) with 0 <= n_m <= cutoff and mode 1 slowest-varying:
/// flat index = n_1 * (cutoff+1)^(M-1) + ... + n_M.
class ModeSpace {
 public:
  ModeSpace(int num_modes, int cutoff);

  int num_modes() const { return num_modes_; }
  int cutoff() const { return cutoff_; }
  int levels() const { return cutoff_ + 1; }
  std::int64_t dim() const { return dim_; }

  /// Stride of a mode in the flat index (mode 0 is slowest-varying).
  std::int64_t stride(int mode) const;

  std::int64_t index_of(const std::vector<int>& occupation) const;
  std::vector<int> occupation_of(std::int64_t index) const;

  /// Occupation of one mode in a flat index, without unpacking the rest.
  int mode_occupation(std::int64_t index, int mode) const;

  ModeSpace with_modes(int num_modes) const { return {num_modes, cutoff_}; }

  bool operator==(const ModeSpace& other) const = default;

  void check_mode(int mode) const;
  void check_same(const ModeSpace& other) const;

 private:
  int num_modes_ = 0;
  int cutoff_ = 0;
  std::int64_t dim_ = 0;
};

}  // namespace focksmith
