#include "focksmith/algebra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace focksmith {

namespace {

constexpr double kZeroBranchTol = 1e-300;

/// Offsets of every multi-index combination over the given modes, so that a
/// full-space index decomposes as keep_offset + traced_offset.
std::vector<Eigen::Index> mode_offsets(const ModeSpace& space, const std::vector<int>& modes) {
  const int levels = space.levels();
  std::vector<Eigen::Index> offsets{0};
  for (int m : modes) {
    const Eigen::Index stride = space.stride(m);
    std::vector<Eigen::Index> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(levels));
    for (Eigen::Index base : offsets) {
      for (int k = 0; k < levels; ++k) next.push_back(base + k * stride);
    }
    offsets = std::move(next);
  }
  return offsets;
}

std::vector<int> complement_modes(const ModeSpace& space, const std::vector<int>& keep) {
  std::vector<bool> kept(static_cast<std::size_t>(space.num_modes()), false);
  for (int m : keep) {
    space.check_mode(m);
    if (kept[static_cast<std::size_t>(m)]) {
      throw std::invalid_argument("partial_trace: duplicate mode in keep set");
    }
    kept[static_cast<std::size_t>(m)] = true;
  }
  std::vector<int> rest;
  for (int m = 0; m < space.num_modes(); ++m) {
    if (!kept[static_cast<std::size_t>(m)]) rest.push_back(m);
  }
  return rest;
}

std::vector<int> sorted_keep(const std::vector<int>& keep) {
  std::vector<int> s = keep;
  std::sort(s.begin(), s.end());
  return s;
}

void check_keep_nonempty(const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
}

std::vector<int> all_but(const ModeSpace& space, int mode) {
  std::vector<int> keep;
  for (int m = 0; m < space.num_modes(); ++m) {
    if (m != mode) keep.push_back(m);
  }
  return keep;
}

}  // namespace

Ket tensor(const Ket& a, const Ket& b) {
  if (a.space().cutoff() != b.space().cutoff()) {
    throw std::invalid_argument("tensor: cutoffs differ");
  }
  ModeSpace space(a.space().num_modes() + b.space().num_modes(), a.space().cutoff());
  Vec amp(space.dim());
  const Eigen::Index db = b.space().dim();
  for (Eigen::Index i = 0; i < a.space().dim(); ++i) {
    amp.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  }
  return Ket(space, std::move(amp));
}

Ket tensor(const std::vector<Ket>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: no factors");
  Ket out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  const ModeSpace& space = rho.space();
  check_keep_nonempty(keep);
  const std::vector<int> keep_sorted = sorted_keep(keep);
  const std::vector<int> traced = complement_modes(space, keep_sorted);
  if (traced.empty()) return rho;
  const auto keep_off = mode_offsets(space, keep_sorted);
  const auto tr_off = mode_offsets(space, traced);
  const Eigen::Index dk = static_cast<Eigen::Index>(keep_off.size());
  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index col = 0; col < dk; ++col) {
    for (Eigen::Index row = 0; row < dk; ++row) {
      cplx sum = 0.0;
      for (Eigen::Index t : tr_off) sum += rho.matrix()(keep_off[row] + t, keep_off[col] + t);
      out(row, col) = sum;
    }
  }
  return DensityOperator(ModeSpace(static_cast<int>(keep_sorted.size()), space.cutoff()),
                         std::move(out));
}

DensityOperator partial_trace(const Ket& psi, const std::vector<int>& keep) {
  const ModeSpace& space = psi.space();
  check_keep_nonempty(keep);
  const std::vector<int> keep_sorted = sorted_keep(keep);
  const std::vector<int> traced = complement_modes(space, keep_sorted);
  if (traced.empty()) return DensityOperator::from_ket(psi);
  const auto keep_off = mode_offsets(space, keep_sorted);
  const auto tr_off = mode_offsets(space, traced);
  const Eigen::Index dk = static_cast<Eigen::Index>(keep_off.size());
  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index col = 0; col < dk; ++col) {
    for (Eigen::Index row = 0; row < dk; ++row) {
      cplx sum = 0.0;
      for (Eigen::Index t : tr_off) {
        sum += psi.amplitudes()(keep_off[row] + t) * std::conj(psi.amplitudes()(keep_off[col] + t));
      }
      out(row, col) = sum;
    }
  }
  return DensityOperator(ModeSpace(static_cast<int>(keep_sorted.size()), space.cutoff()),
                         std::move(out));
}

DensityOperator partial_trace(const State& state, const std::vector<int>& keep) {
  if (state.is_pure()) return partial_trace(state.ket(), keep);
  return partial_trace(state.rho(), keep);
}

ProjectionResult project_fock(const Ket& psi, int mode, int n) {
  const ModeSpace& space = psi.space();
  space.check_mode(mode);
  if (n < 0 || n > space.cutoff()) {
    std::ostringstream msg;
    msg << "project_fock: level " << n << " outside [0, " << space.cutoff() << "]";
    throw std::invalid_argument(msg.str());
  }
  if (space.num_modes() == 1) {
    throw std::invalid_argument("project_fock: cannot remove the last mode");
  }
  const auto keep = all_but(space, mode);
  const auto keep_off = mode_offsets(space, keep);
  const Eigen::Index shift = static_cast<Eigen::Index>(n) * space.stride(mode);
  Vec reduced(static_cast<Eigen::Index>(keep_off.size()));
  for (Eigen::Index i = 0; i < reduced.size(); ++i) {
    reduced(i) = psi.amplitudes()(keep_off[i] + shift);
  }
  const double p = reduced.squaredNorm();
  if (p < kZeroBranchTol) {
    std::ostringstream msg;
    msg << "project_fock: outcome n=" << n << " on mode " << mode << " has zero probability";
    throw HeraldImpossibleError(msg.str());
  }
  reduced /= std::sqrt(p);
  return {Ket(ModeSpace(space.num_modes() - 1, space.cutoff()), std::move(reduced)), p};
}

ConditionResult condition_fock_diag(const State& state, int mode, const RVec& diag) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  if (diag.size() != space.levels()) {
    throw std::invalid_argument("condition_fock_diag: diagonal length must equal cutoff+1");
  }
  if (space.num_modes() == 1) {
    throw std::invalid_argument("condition_fock_diag: cannot remove the last mode");
  }
  const auto keep = all_but(space, mode);
  const auto keep_off = mode_offsets(space, keep);
  const Eigen::Index dk = static_cast<Eigen::Index>(keep_off.size());
  const Eigen::Index stride = space.stride(mode);
  Mat out = Mat::Zero(dk, dk);
  if (state.is_pure()) {
    const Vec& amp = state.ket().amplitudes();
    for (Eigen::Index col = 0; col < dk; ++col) {
      for (Eigen::Index row = 0; row < dk; ++row) {
        cplx sum = 0.0;
        for (int t = 0; t < space.levels(); ++t) {
          if (diag(t) == 0.0) continue;
          sum += diag(t) * amp(keep_off[row] + t * stride) *
                 std::conj(amp(keep_off[col] + t * stride));
        }
        out(row, col) = sum;
      }
    }
  } else {
    const Mat& rho = state.rho().matrix();
    for (Eigen::Index col = 0; col < dk; ++col) {
      for (Eigen::Index row = 0; row < dk; ++row) {
        cplx sum = 0.0;
        for (int t = 0; t < space.levels(); ++t) {
          if (diag(t) == 0.0) continue;
          sum += diag(t) * rho(keep_off[row] + t * stride, keep_off[col] + t * stride);
        }
        out(row, col) = sum;
      }
    }
  }
  const double p = out.trace().real();
  if (p < kZeroBranchTol) {
    throw HeraldImpossibleError("condition_fock_diag: outcome has zero probability");
  }
  out /= p;
  return {State(DensityOperator(ModeSpace(space.num_modes() - 1, space.cutoff()), std::move(out))),
          p};
}

ConditionResult condition_mode(const State& state, int mode, const Mat& element) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  const int levels = space.levels();
  if (element.rows() != levels || element.cols() != levels) {
    throw std::invalid_argument("condition_mode: element size must equal cutoff+1");
  }
  if (space.num_modes() == 1) {
    throw std::invalid_argument("condition_mode: cannot remove the last mode");
  }
  const auto keep = all_but(space, mode);
  const auto keep_off = mode_offsets(space, keep);
  const Eigen::Index dk = static_cast<Eigen::Index>(keep_off.size());
  const Eigen::Index stride = space.stride(mode);
  Mat out = Mat::Zero(dk, dk);
  // Tr_mode[(element x 1) rho]: sum_{t,t'} element(t,t') rho((t',K),(t,L)).
  if (state.is_pure()) {
    const Vec& amp = state.ket().amplitudes();
    for (Eigen::Index col = 0; col < dk; ++col) {
      for (Eigen::Index row = 0; row < dk; ++row) {
        cplx sum = 0.0;
        for (int t = 0; t < levels; ++t) {
          for (int tp = 0; tp < levels; ++tp) {
            sum += element(t, tp) * amp(keep_off[row] + tp * stride) *
                   std::conj(amp(keep_off[col] + t * stride));
          }
        }
        out(row, col) = sum;
      }
    }
  } else {
    const Mat& rho = state.rho().matrix();
    for (Eigen::Index col = 0; col < dk; ++col) {
      for (Eigen::Index row = 0; row < dk; ++row) {
        cplx sum = 0.0;
        for (int t = 0; t < levels; ++t) {
          for (int tp = 0; tp < levels; ++tp) {
            sum += element(t, tp) * rho(keep_off[row] + tp * stride, keep_off[col] + t * stride);
          }
        }
        out(row, col) = sum;
      }
    }
  }
  // The reduction of (sqrt(E) x 1) rho (sqrt(E) x 1) coincides with this one
  // under the trace, so Hermiticity/positivity hold; symmetrize roundoff.
  out = 0.5 * (out + out.adjoint()).eval();
  const double p = out.trace().real();
  if (p < kZeroBranchTol) {
    throw HeraldImpossibleError("condition_mode: outcome has zero probability");
  }
  out /= p;
  return {State(DensityOperator(ModeSpace(space.num_modes() - 1, space.cutoff()), std::move(out))),
          p};
}

NormalizeResult normalize(const Ket& psi) {
  const double n = psi.norm();
  if (n < 1e-150) throw std::invalid_argument("normalize: zero vector");
  return {Ket(psi.space(), psi.amplitudes() / n), n};
}

cplx expectation(const State& state, const OperatorMatrix& op) {
  state.space().check_same(op.space());
  if (state.is_pure()) {
    return state.ket().amplitudes().dot(op.matrix() * state.ket().amplitudes());
  }
  return (state.rho().matrix() * op.matrix()).trace();
}

cplx expectation_one_mode(const State& state, const Mat& m, int mode) {
  const ModeSpace& space = state.space();
  space.check_mode(mode);
  const int levels = space.levels();
  if (m.rows() != levels || m.cols() != levels) {
    throw std::invalid_argument("expectation_one_mode: matrix size must equal cutoff+1");
  }
  const Eigen::Index stride = space.stride(mode);
  const auto keep_off = mode_offsets(space, all_but(space, mode));
  cplx acc = 0.0;
  if (state.is_pure()) {
    const Vec& amp = state.ket().amplitudes();
    for (Eigen::Index base : keep_off) {
      Eigen::Map<const Vec, 0, Eigen::InnerStride<>> x(amp.data() + base, levels,
                                                       Eigen::InnerStride<>(stride));
      acc += x.dot(m * x);
    }
  } else {
    const Mat& rho = state.rho().matrix();
    for (Eigen::Index base : keep_off) {
      for (int j = 0; j < levels; ++j) {
        for (int i = 0; i < levels; ++i) {
          acc += rho(base + i * stride, base + j * stride) * m(j, i);
        }
      }
    }
  }
  return acc;
}

double fidelity(const State& a, const State& b) {
  a.space().check_same(b.space());
  if (a.is_pure() && b.is_pure()) {
    const cplx overlap = a.ket().amplitudes().dot(b.ket().amplitudes());
    return std::norm(overlap);
  }
  if (a.is_pure() != b.is_pure()) {
    const Ket& psi = a.is_pure() ? a.ket() : b.ket();
    const DensityOperator& rho = a.is_pure() ? b.rho() : a.rho();
    return psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
  }
  // General Uhlmann fidelity via the eigendecomposition of rho.
  Eigen::SelfAdjointEigenSolver<Mat> es(a.rho().matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("fidelity: eigendecomposition failed");
  RVec roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Mat sqrt_rho = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  Mat inner = sqrt_rho * b.rho().matrix() * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Mat> es2(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double root_sum = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  a.space().check_same(b.space());
  Mat diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const State& a, const State& b) {
  return trace_distance(a.to_density(), b.to_density());
}

State append_vacuum_mode(const State& state) {
  const ModeSpace& space = state.space();
  ModeSpace bigger(space.num_modes() + 1, space.cutoff());
  const int levels = space.levels();
  if (state.is_pure()) {
    Vec amp = Vec::Zero(bigger.dim());
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      amp(i * levels) = state.ket().amplitudes()(i);
    }
    return State(Ket(bigger, std::move(amp)));
  }
  Mat out = Mat::Zero(bigger.dim(), bigger.dim());
  const Mat& rho = state.rho().matrix();
  for (Eigen::Index col = 0; col < space.dim(); ++col) {
    for (Eigen::Index row = 0; row < space.dim(); ++row) {
      out(row * levels, col * levels) = rho(row, col);
    }
  }
  return State(DensityOperator(bigger, std::move(out)));
}

}  // namespace focksmith
