#include "focksmith/states.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "focksmith/operators.hpp"

namespace focksmith {

namespace {

/// Truncation budget for states with analytically known tails.
constexpr double kTailBound = 1e-12;
/// Thermal tails decay slowly; beyond this the truncation is rejected.
constexpr double kThermalTailBound = 1e-6;

void require_modes(const ModeSpace& space, int modes, const char* kind) {
  if (space.num_modes() != modes) {
    std::ostringstream msg;
    msg << kind << " state needs a " << modes << "-mode space, got " << space.num_modes()
        << " modes";
    throw std::invalid_argument(msg.str());
  }
}

void check_tail(double tail, double bound, const char* kind) {
  if (!(tail < bound)) {
    std::ostringstream msg;
    msg << kind << " state: truncated tail mass " << tail << " exceeds " << bound
        << "; increase the cutoff";
    throw std::invalid_argument(msg.str());
  }
}

Ket renormalized(const ModeSpace& space, Vec amp) {
  const double n = amp.norm();
  if (n < 1e-150) throw std::invalid_argument("state constructor produced a zero vector");
  amp /= n;
  return Ket(space, std::move(amp));
}

double coherent_tail(cplx alpha, int levels) {
  const Vec c = coherent_amplitudes(alpha, levels);
  return std::max(0.0, 1.0 - c.squaredNorm());
}

Ket make_coherent(cplx alpha, const ModeSpace& space) {
  require_modes(space, 1, "coherent");
  check_tail(coherent_tail(alpha, space.levels()), kTailBound, "coherent");
  return renormalized(space, coherent_amplitudes(alpha, space.levels()));
}

Ket make_cat(cplx alpha, int parity, const ModeSpace& space) {
  require_modes(space, 1, "cat");
  if (parity != +1 && parity != -1) throw std::invalid_argument("cat: parity must be +1 or -1");
  if (parity == -1 && std::abs(alpha) < 1e-12) {
    throw std::invalid_argument("cat: odd cat requires alpha != 0");
  }
  check_tail(coherent_tail(alpha, space.levels()), kTailBound, "cat");
  const Vec plus = coherent_amplitudes(alpha, space.levels());
  const Vec minus = coherent_amplitudes(-alpha, space.levels());
  // c = [2(1 +/- e^{-2|alpha|^2})]^{-1/2}, from <alpha|-alpha> = e^{-2|alpha|^2}.
  const double overlap = std::exp(-2.0 * std::norm(alpha));
  const double c = 1.0 / std::sqrt(2.0 * (1.0 + parity * overlap));
  Vec amp = c * (plus + static_cast<double>(parity) * minus);
  return renormalized(space, std::move(amp));
}

Ket make_squeezed_vacuum(double lambda, const ModeSpace& space) {
  require_modes(space, 1, "squeezed_vacuum");
  if (!(std::abs(lambda) < 1.0)) {
    throw std::invalid_argument("squeezed_vacuum: |lambda| must be < 1");
  }
  Vec amp = Vec::Zero(space.dim());
  // c_{2n} = (1-lambda^2)^{1/4} sqrt((2n)!)/n! (-lambda/2)^n, built by recurrence.
  double c = std::pow(1.0 - lambda * lambda, 0.25);
  double sum = 0.0;
  for (int n = 0; 2 * n <= space.cutoff(); ++n) {
    if (n > 0) {
      c *= (-lambda / 2.0) * std::sqrt(static_cast<double>(2 * n) * (2 * n - 1)) / n;
    }
    amp(2 * n) = c;
    sum += c * c;
  }
  check_tail(std::max(0.0, 1.0 - sum), kTailBound, "squeezed_vacuum");
  return renormalized(space, std::move(amp));
}

State make_thermal(double nbar, const ModeSpace& space) {
  require_modes(space, 1, "thermal");
  if (nbar < 0.0) throw std::invalid_argument("thermal: nbar must be >= 0");
  if (nbar == 0.0) return State(DensityOperator::from_ket(Ket::vacuum(space)));
  const double ratio = nbar / (1.0 + nbar);
  const double tail = std::pow(ratio, space.levels());
  check_tail(tail, kThermalTailBound, "thermal");
  if (tail > kTailBound) {
    std::ostringstream msg;
    msg << "thermal state: truncated tail mass " << tail
        << " renormalized away; moments are approximate at this cutoff";
    emit_warning(msg.str());
  }
  Mat rho = Mat::Zero(space.dim(), space.dim());
  double p = 1.0 / (1.0 + nbar);
  double sum = 0.0;
  for (int n = 0; n < space.levels(); ++n) {
    rho(n, n) = p;
    sum += p;
    p *= ratio;
  }
  rho /= sum;
  return State(DensityOperator(space, std::move(rho)));
}

Ket make_epr(double lambda, const ModeSpace& space) {
  require_modes(space, 2, "epr");
  if (!(std::abs(lambda) < 1.0)) throw std::invalid_argument("epr: |lambda| must be < 1");
  check_tail(std::pow(lambda * lambda, space.levels()), kTailBound, "epr");
  Vec amp = Vec::Zero(space.dim());
  const double head = std::sqrt(1.0 - lambda * lambda);
  double term = head;
  for (int n = 0; n < space.levels(); ++n) {
    amp(static_cast<Eigen::Index>(n) * space.levels() + n) = term;
    term *= lambda;
  }
  return renormalized(space, std::move(amp));
}

Ket make_sp_entangled(cplx c1, cplx c2, double phi, const ModeSpace& space) {
  require_modes(space, 2, "sp_entangled");
  const double norm2 = std::norm(c1) + std::norm(c2);
  if (std::abs(norm2 - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "sp_entangled: |c1|^2 + |c2|^2 = " << norm2 << " must equal 1 within 1e-10";
    throw std::invalid_argument(msg.str());
  }
  Vec amp = Vec::Zero(space.dim());
  const int levels = space.levels();
  amp(static_cast<Eigen::Index>(1) * levels + 0) = c1;
  amp(0 * levels + 1) = std::exp(cplx(0.0, phi)) * c2;
  return renormalized(space, std::move(amp));
}

Ket make_hybrid(cplx alpha, double phi, cplx alpha_prime, const ModeSpace& space) {
  require_modes(space, 2, "hybrid");
  check_tail(coherent_tail(alpha, space.levels()), kTailBound, "hybrid");
  check_tail(coherent_tail(alpha_prime, space.levels()), kTailBound, "hybrid");
  const Vec ca = coherent_amplitudes(alpha, space.levels());
  const Vec cp = coherent_amplitudes(alpha_prime, space.levels());
  const cplx phase = std::exp(cplx(0.0, phi));
  const int levels = space.levels();
  // (|1>|alpha> + e^{i phi}|0>|alpha'>)/sqrt(2); the branches are orthogonal
  // on the first mode, so 1/sqrt(2) normalizes exactly.
  Vec amp = Vec::Zero(space.dim());
  for (int n = 0; n < levels; ++n) {
    amp(static_cast<Eigen::Index>(1) * levels + n) += ca(n) / std::sqrt(2.0);
    amp(0 * levels + n) += phase * cp(n) / std::sqrt(2.0);
  }
  return renormalized(space, std::move(amp));
}

}  // namespace

std::string state_kind_name(StateKind kind) {
  switch (kind) {
    case StateKind::vacuum: return "vacuum";
    case StateKind::fock: return "fock";
    case StateKind::coherent: return "coherent";
    case StateKind::thermal: return "thermal";
    case StateKind::squeezed_vacuum: return "squeezed_vacuum";
    case StateKind::cat: return "cat";
    case StateKind::epr: return "epr";
    case StateKind::sp_entangled: return "sp_entangled";
    case StateKind::hybrid: return "hybrid";
    case StateKind::two_mode_added_coherent: return "two_mode_added_coherent";
  }
  throw std::logic_error("state_kind_name: unknown kind");
}

StateKind parse_state_kind(const std::string& name) {
  for (StateKind kind :
       {StateKind::vacuum, StateKind::fock, StateKind::coherent, StateKind::thermal,
        StateKind::squeezed_vacuum, StateKind::cat, StateKind::epr, StateKind::sp_entangled,
        StateKind::hybrid, StateKind::two_mode_added_coherent}) {
    if (state_kind_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown state kind '" + name + "'");
}

int state_kind_modes(StateKind kind) {
  switch (kind) {
    case StateKind::epr:
    case StateKind::sp_entangled:
    case StateKind::hybrid:
    case StateKind::two_mode_added_coherent:
      return 2;
    default:
      return 1;
  }
}

State make_state(const StateSpec& spec, const ModeSpace& space) {
  switch (spec.kind) {
    case StateKind::vacuum:
      return State(Ket::vacuum(space));
    case StateKind::fock: {
      require_modes(space, 1, "fock");
      if (spec.n < 0) throw std::invalid_argument("fock: n must be >= 0");
      if (spec.n > space.cutoff()) {
        throw std::invalid_argument("fock: n exceeds the cutoff; increase the cutoff");
      }
      return State(Ket::basis(space, {spec.n}));
    }
    case StateKind::coherent:
      return State(make_coherent(spec.alpha, space));
    case StateKind::thermal:
      return make_thermal(spec.nbar, space);
    case StateKind::squeezed_vacuum:
      return State(make_squeezed_vacuum(spec.lambda, space));
    case StateKind::cat:
      return State(make_cat(spec.alpha, spec.parity, space));
    case StateKind::epr:
      return State(make_epr(spec.lambda, space));
    case StateKind::sp_entangled:
      return State(make_sp_entangled(spec.c1, spec.c2, spec.phi, space));
    case StateKind::hybrid: {
      cplx alpha_prime = spec.alpha_prime;
      if (!spec.has_alpha_prime) {
        alpha_prime = default_hybrid_alpha_prime(spec.alpha);
        std::ostringstream msg;
        msg << "hybrid state: alpha_prime defaulted to (" << alpha_prime.real() << ", "
            << alpha_prime.imag() << ")";
        emit_warning(msg.str());
      }
      return State(make_hybrid(spec.alpha, spec.phi, alpha_prime, space));
    }
    case StateKind::two_mode_added_coherent:
      return State(make_two_mode_added_coherent(spec.alpha, spec.phi, space));
  }
  throw std::logic_error("make_state: unknown kind");
}

Ket make_two_mode_added_coherent(cplx alpha, double phi, const ModeSpace& space) {
  require_modes(space, 2, "two_mode_added_coherent");
  // One quantum is added on top of the coherent background: demand the
  // coherent tail bound one level below the cutoff.
  check_tail(coherent_tail(alpha, space.levels() - 1), kTailBound, "two_mode_added_coherent");
  const int levels = space.levels();
  const Vec c = coherent_amplitudes(alpha, levels);
  const cplx phase = std::exp(cplx(0.0, phi));
  Vec amp = Vec::Zero(space.dim());
  for (int m = 0; m < levels; ++m) {
    for (int n = 0; n < levels; ++n) {
      cplx u = 0.0;
      if (m >= 1) u += std::sqrt(static_cast<double>(m)) * c(m - 1) * c(n);
      if (n >= 1) u += phase * c(m) * std::sqrt(static_cast<double>(n)) * c(n - 1);
      amp(static_cast<Eigen::Index>(m) * levels + n) = u;
    }
  }
  return renormalized(space, std::move(amp));
}

Vec coherent_amplitudes(cplx alpha, int levels) {
  if (levels < 1) throw std::invalid_argument("coherent_amplitudes: levels must be >= 1");
  Vec c(levels);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < levels; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

double fitted_lambda_from_zeta(double zeta) {
  // Apply the exponentiated squeeze generator to vacuum at a generous cutoff
  // and read lambda off the n=2 over n=0 amplitude ratio of the even-term
  // pattern: c2/c0 = -lambda/2 * sqrt(2).
  const int levels = 41;
  const Mat s = single_mode_squeeze_core(zeta, levels);
  const cplx c0 = s(0, 0);
  const cplx c2 = s(2, 0);
  if (std::abs(c0) < 1e-12) {
    throw std::invalid_argument("fitted_lambda_from_zeta: vacuum amplitude vanished");
  }
  const cplx ratio = c2 / c0;
  return -std::sqrt(2.0) * ratio.real();
}

cplx default_hybrid_alpha_prime(cplx alpha) {
  const double mag = std::abs(alpha);
  // Maximize |a'|^2 e^{-|a'-a|^2} over the magnitude (phase follows alpha).
  auto objective = [mag](double m) {
    const double d = m - mag;
    return 2.0 * std::log(std::max(m, 1e-12)) - d * d;
  };
  double lo = std::max(1e-6, mag * 0.5);
  double hi = mag + 3.0;
  // Golden-section scan; the objective is unimodal on (0, inf).
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (objective(x1) < objective(x2)) {
      a = x1;
      x1 = x2;
      x2 = a + gr * (b - a);
    } else {
      b = x2;
      x2 = x1;
      x1 = b - gr * (b - a);
    }
  }
  const double best = 0.5 * (a + b);
  const cplx phase = (mag > 1e-12) ? alpha / mag : cplx(1.0, 0.0);
  return best * phase;
}

}  // namespace focksmith
