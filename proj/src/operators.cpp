#include "focksmith/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace focksmith {

namespace {

void check_levels(int levels) {
  if (levels < 2) throw std::invalid_argument("operator: cutoff must be >= 1");
}

void check_mode_pair(const ModeSpace& space, int mode_a, int mode_b) {
  space.check_mode(mode_a);
  space.check_mode(mode_b);
  if (mode_a == mode_b) throw std::invalid_argument("operator: mode pair must be distinct");
}

/// Union-find over matrix indices, used to split a generator into the
/// independent blocks its sparsity pattern defines.
class DisjointSets {
 public:
  explicit DisjointSets(Eigen::Index n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(Eigen::Index a, Eigen::Index b) { parent_[find(a)] = find(b); }

 private:
  std::vector<Eigen::Index> parent_;
};

/// Enumerate the base indices whose digits at the given modes are zero;
/// adding k * stride(mode) to a base walks that mode's ladder.
std::vector<Eigen::Index> slice_bases(const ModeSpace& space, std::initializer_list<int> modes) {
  std::vector<Eigen::Index> bases;
  bases.reserve(static_cast<std::size_t>(space.dim()));
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    bool base = true;
    for (int m : modes) {
      if (space.mode_occupation(i, m) != 0) {
        base = false;
        break;
      }
    }
    if (base) bases.push_back(i);
  }
  return bases;
}

using StridedVec = Eigen::Map<Vec, 0, Eigen::InnerStride<>>;
using ConstStridedVec = Eigen::Map<const Vec, 0, Eigen::InnerStride<>>;

}  // namespace

Mat ladder_matrix(LadderKind kind, int levels) {
  check_levels(levels);
  Mat m = Mat::Zero(levels, levels);
  switch (kind) {
    case LadderKind::annihilate:
      for (int n = 1; n < levels; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
      break;
    case LadderKind::create:
      for (int n = 0; n + 1 < levels; ++n) m(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
      break;
    case LadderKind::number:
      for (int n = 0; n < levels; ++n) m(n, n) = static_cast<double>(n);
      break;
  }
  return m;
}

OperatorMatrix ladder(LadderKind kind, int cutoff) {
  return OperatorMatrix(ModeSpace(1, cutoff), ladder_matrix(kind, cutoff + 1));
}

Mat expm_antihermitian(const Mat& g) {
  const Eigen::Index n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("expm_antihermitian: matrix must be square");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g + g.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("expm_antihermitian: generator is not anti-Hermitian");
  }

  DisjointSets sets(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j && g(i, j) != cplx(0.0)) sets.unite(i, j);
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) blocks[static_cast<std::size_t>(sets.find(i))].push_back(i);

  Mat result = Mat::Zero(n, n);
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    if (block.size() == 1) {
      // Isolated index: exp of the (typically zero) diagonal entry.
      result(block[0], block[0]) = std::exp(g(block[0], block[0]));
      continue;
    }
    const Eigen::Index b = static_cast<Eigen::Index>(block.size());
    Mat h(b, b);  // Hermitian: g = -i h
    for (Eigen::Index c = 0; c < b; ++c) {
      for (Eigen::Index r = 0; r < b; ++r) h(r, c) = cplx(0.0, 1.0) * g(block[r], block[c]);
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(h);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("expm_antihermitian: eigendecomposition failed");
    }
    Vec phases(b);
    for (Eigen::Index k = 0; k < b; ++k) {
      phases(k) = std::exp(cplx(0.0, -solver.eigenvalues()(k)));
    }
    Mat u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    for (Eigen::Index c = 0; c < b; ++c) {
      for (Eigen::Index r = 0; r < b; ++r) result(block[r], block[c]) = u(r, c);
    }
  }
  return result;
}

Mat beam_splitter_core(double tau, int levels) {
  check_levels(levels);
  const Eigen::Index d = static_cast<Eigen::Index>(levels) * levels;
  Mat g = Mat::Zero(d, d);
  auto idx = [levels](int na, int nb) { return static_cast<Eigen::Index>(na) * levels + nb; };
  for (int na = 0; na < levels; ++na) {
    for (int nb = 0; nb < levels; ++nb) {
      // a b^dag lowers a, raises b; -a^dag b raises a, lowers b.
      if (na >= 1 && nb + 1 < levels) {
        g(idx(na - 1, nb + 1), idx(na, nb)) += tau * std::sqrt(static_cast<double>(na) * (nb + 1));
      }
      if (na + 1 < levels && nb >= 1) {
        g(idx(na + 1, nb - 1), idx(na, nb)) -= tau * std::sqrt(static_cast<double>(na + 1) * nb);
      }
    }
  }
  return expm_antihermitian(g);
}

Mat two_mode_squeeze_core(double zeta, int levels) {
  check_levels(levels);
  const Eigen::Index d = static_cast<Eigen::Index>(levels) * levels;
  Mat g = Mat::Zero(d, d);
  auto idx = [levels](int na, int nb) { return static_cast<Eigen::Index>(na) * levels + nb; };
  for (int na = 0; na < levels; ++na) {
    for (int nb = 0; nb < levels; ++nb) {
      // a^dag b^dag raises both; -a b lowers both.
      if (na + 1 < levels && nb + 1 < levels) {
        g(idx(na + 1, nb + 1), idx(na, nb)) +=
            zeta * std::sqrt(static_cast<double>(na + 1) * (nb + 1));
      }
      if (na >= 1 && nb >= 1) {
        g(idx(na - 1, nb - 1), idx(na, nb)) -= zeta * std::sqrt(static_cast<double>(na) * nb);
      }
    }
  }
  return expm_antihermitian(g);
}

Mat single_mode_squeeze_core(double zeta, int levels) {
  check_levels(levels);
  Mat g = Mat::Zero(levels, levels);
  for (int n = 0; n < levels; ++n) {
    if (n + 2 < levels) {
      g(n + 2, n) += zeta * std::sqrt(static_cast<double>(n + 1) * (n + 2));
    }
    if (n >= 2) {
      g(n - 2, n) -= zeta * std::sqrt(static_cast<double>(n) * (n - 1));
    }
  }
  return expm_antihermitian(g);
}

Mat displacement_core(cplx alpha, int levels) {
  check_levels(levels);
  Mat g = Mat::Zero(levels, levels);
  for (int n = 0; n + 1 < levels; ++n) {
    const double root = std::sqrt(static_cast<double>(n + 1));
    g(n + 1, n) += alpha * root;
    g(n, n + 1) -= std::conj(alpha) * root;
  }
  return expm_antihermitian(g);
}

Vec phase_rotation_diag(double theta, int levels) {
  check_levels(levels);
  Vec d(levels);
  for (int n = 0; n < levels; ++n) d(n) = std::exp(cplx(0.0, theta * n));
  return d;
}

OperatorMatrix beam_splitter(double tau, int mode_a, int mode_b, const ModeSpace& space) {
  check_mode_pair(space, mode_a, mode_b);
  return embed_pair(beam_splitter_core(tau, space.levels()), mode_a, mode_b, space);
}

OperatorMatrix two_mode_squeeze(double zeta, int mode_a, int mode_b, const ModeSpace& space) {
  check_mode_pair(space, mode_a, mode_b);
  return embed_pair(two_mode_squeeze_core(zeta, space.levels()), mode_a, mode_b, space);
}

OperatorMatrix single_mode_squeeze(double zeta, int mode, const ModeSpace& space) {
  space.check_mode(mode);
  return embed(OperatorMatrix(space.with_modes(1), single_mode_squeeze_core(zeta, space.levels())),
               mode, space);
}

OperatorMatrix displacement(cplx alpha, int mode, const ModeSpace& space) {
  space.check_mode(mode);
  return embed(OperatorMatrix(space.with_modes(1), displacement_core(alpha, space.levels())), mode,
               space);
}

OperatorMatrix phase_rotation(double theta, int mode, const ModeSpace& space) {
  space.check_mode(mode);
  Mat m = phase_rotation_diag(theta, space.levels()).asDiagonal();
  return embed(OperatorMatrix(space.with_modes(1), std::move(m)), mode, space);
}

OperatorMatrix embed(const OperatorMatrix& op, int mode, const ModeSpace& space) {
  space.check_mode(mode);
  if (op.space().num_modes() != 1) {
    throw std::invalid_argument("embed: operator must be single-mode");
  }
  if (op.space().cutoff() != space.cutoff()) {
    std::ostringstream msg;
    msg << "embed: operator cutoff " << op.space().cutoff() << " does not match space cutoff "
        << space.cutoff();
    throw std::invalid_argument(msg.str());
  }
  const int levels = space.levels();
  const Eigen::Index stride = space.stride(mode);
  Mat full = Mat::Zero(space.dim(), space.dim());
  for (Eigen::Index base : slice_bases(space, {mode})) {
    for (int j = 0; j < levels; ++j) {
      for (int i = 0; i < levels; ++i) {
        full(base + i * stride, base + j * stride) = op.matrix()(i, j);
      }
    }
  }
  return OperatorMatrix(space, std::move(full));
}

OperatorMatrix embed_pair(const Mat& core, int mode_a, int mode_b, const ModeSpace& space) {
  check_mode_pair(space, mode_a, mode_b);
  const int levels = space.levels();
  const Eigen::Index d2 = static_cast<Eigen::Index>(levels) * levels;
  if (core.rows() != d2 || core.cols() != d2) {
    throw std::invalid_argument("embed_pair: core size does not match space cutoff");
  }
  const Eigen::Index sa = space.stride(mode_a);
  const Eigen::Index sb = space.stride(mode_b);
  Mat full = Mat::Zero(space.dim(), space.dim());
  for (Eigen::Index base : slice_bases(space, {mode_a, mode_b})) {
    for (Eigen::Index cj = 0; cj < d2; ++cj) {
      const Eigen::Index col = base + (cj / levels) * sa + (cj % levels) * sb;
      for (Eigen::Index ci = 0; ci < d2; ++ci) {
        if (core(ci, cj) == cplx(0.0)) continue;
        full(base + (ci / levels) * sa + (ci % levels) * sb, col) = core(ci, cj);
      }
    }
  }
  return OperatorMatrix(space, std::move(full));
}

Ket apply_one_mode(const Ket& psi, const Mat& m, int mode) {
  const ModeSpace& space = psi.space();
  space.check_mode(mode);
  const int levels = space.levels();
  if (m.rows() != levels || m.cols() != levels) {
    throw std::invalid_argument("apply_one_mode: matrix size does not match space cutoff");
  }
  if (space.num_modes() == 1) return Ket(space, m * psi.amplitudes());
  const Eigen::Index stride = space.stride(mode);
  Vec out(space.dim());
  for (Eigen::Index base : slice_bases(space, {mode})) {
    ConstStridedVec x(psi.amplitudes().data() + base, levels, Eigen::InnerStride<>(stride));
    StridedVec y(out.data() + base, levels, Eigen::InnerStride<>(stride));
    y = m * x;
  }
  return Ket(space, std::move(out));
}

DensityOperator apply_one_mode(const DensityOperator& rho, const Mat& m, int mode) {
  const ModeSpace& space = rho.space();
  space.check_mode(mode);
  const int levels = space.levels();
  if (m.rows() != levels || m.cols() != levels) {
    throw std::invalid_argument("apply_one_mode: matrix size does not match space cutoff");
  }
  if (space.num_modes() == 1) {
    return DensityOperator(space, m * rho.matrix() * m.adjoint());
  }
  const Eigen::Index stride = space.stride(mode);
  const auto bases = slice_bases(space, {mode});
  // m rho: transform each column, then m (m rho)^dag gives (m rho m^dag)^dag adjointed back.
  Mat tmp = rho.matrix();
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index col = 0; col < space.dim(); ++col) {
      for (Eigen::Index base : bases) {
        ConstStridedVec x(tmp.data() + col * space.dim() + base, levels,
                          Eigen::InnerStride<>(stride));
        Vec y = m * x;
        StridedVec dst(tmp.data() + col * space.dim() + base, levels,
                       Eigen::InnerStride<>(stride));
        dst = y;
      }
    }
    tmp.adjointInPlace();
  }
  return DensityOperator(space, std::move(tmp));
}

State apply_one_mode(const State& state, const Mat& m, int mode) {
  if (state.is_pure()) return State(apply_one_mode(state.ket(), m, mode));
  return State(apply_one_mode(state.rho(), m, mode));
}

Ket apply_two_mode(const Ket& psi, const Mat& core, int mode_a, int mode_b) {
  const ModeSpace& space = psi.space();
  check_mode_pair(space, mode_a, mode_b);
  const int levels = space.levels();
  const Eigen::Index d2 = static_cast<Eigen::Index>(levels) * levels;
  if (core.rows() != d2 || core.cols() != d2) {
    throw std::invalid_argument("apply_two_mode: core size does not match space cutoff");
  }
  // The whole space is the pair space in natural order: plain product.
  if (space.num_modes() == 2 && mode_a == 0 && mode_b == 1) {
    return Ket(space, core * psi.amplitudes());
  }
  const Eigen::Index sa = space.stride(mode_a);
  const Eigen::Index sb = space.stride(mode_b);
  Vec out = Vec::Zero(space.dim());
  Vec slice(d2), image(d2);
  for (Eigen::Index base : slice_bases(space, {mode_a, mode_b})) {
    for (Eigen::Index k = 0; k < d2; ++k) {
      slice(k) = psi.amplitudes()(base + (k / levels) * sa + (k % levels) * sb);
    }
    image = core * slice;
    for (Eigen::Index k = 0; k < d2; ++k) {
      out(base + (k / levels) * sa + (k % levels) * sb) = image(k);
    }
  }
  return Ket(space, std::move(out));
}

DensityOperator apply_two_mode(const DensityOperator& rho, const Mat& core, int mode_a,
                               int mode_b) {
  const ModeSpace& space = rho.space();
  check_mode_pair(space, mode_a, mode_b);
  const int levels = space.levels();
  const Eigen::Index d2 = static_cast<Eigen::Index>(levels) * levels;
  if (core.rows() != d2 || core.cols() != d2) {
    throw std::invalid_argument("apply_two_mode: core size does not match space cutoff");
  }
  if (space.num_modes() == 2 && mode_a == 0 && mode_b == 1) {
    return DensityOperator(space, core * rho.matrix() * core.adjoint());
  }
  const Eigen::Index sa = space.stride(mode_a);
  const Eigen::Index sb = space.stride(mode_b);
  const auto bases = slice_bases(space, {mode_a, mode_b});
  Mat tmp = rho.matrix();
  Vec slice(d2), image(d2);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index col = 0; col < space.dim(); ++col) {
      cplx* column = tmp.data() + col * space.dim();
      for (Eigen::Index base : bases) {
        for (Eigen::Index k = 0; k < d2; ++k) {
          slice(k) = column[base + (k / levels) * sa + (k % levels) * sb];
        }
        image = core * slice;
        for (Eigen::Index k = 0; k < d2; ++k) {
          column[base + (k / levels) * sa + (k % levels) * sb] = image(k);
        }
      }
    }
    tmp.adjointInPlace();
  }
  return DensityOperator(space, std::move(tmp));
}

State apply_two_mode(const State& state, const Mat& core, int mode_a, int mode_b) {
  if (state.is_pure()) return State(apply_two_mode(state.ket(), core, mode_a, mode_b));
  return State(apply_two_mode(state.rho(), core, mode_a, mode_b));
}

}  // namespace focksmith
