#include "focksmith/oracles.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "focksmith/io.hpp"

namespace focksmith {

namespace {

constexpr double kPi = 3.14159265358979323846;

int pair_index(int m, int n, int levels) { return m * levels + n; }

// tau (a b^dag - a^dag b) on a two-mode grid, built by explicit ladder action.
Mat beam_splitter_generator(double tau, int levels) {
  const int dim = levels * levels;
  Mat g = Mat::Zero(dim, dim);
  for (int m = 0; m < levels; ++m) {
    for (int n = 0; n < levels; ++n) {
      if (m >= 1 && n + 1 < levels) {
        g(pair_index(m - 1, n + 1, levels), pair_index(m, n, levels)) +=
            tau * std::sqrt(static_cast<double>(m) * (n + 1));
      }
      if (n >= 1 && m + 1 < levels) {
        g(pair_index(m + 1, n - 1, levels), pair_index(m, n, levels)) -=
            tau * std::sqrt(static_cast<double>(m + 1) * n);
      }
    }
  }
  return g;
}

// zeta (a^dag b^dag - a b) on a two-mode grid.
Mat two_mode_squeeze_generator(double zeta, int levels) {
  const int dim = levels * levels;
  Mat g = Mat::Zero(dim, dim);
  for (int m = 0; m < levels; ++m) {
    for (int n = 0; n < levels; ++n) {
      if (m + 1 < levels && n + 1 < levels) {
        g(pair_index(m + 1, n + 1, levels), pair_index(m, n, levels)) +=
            zeta * std::sqrt(static_cast<double>(m + 1) * (n + 1));
      }
      if (m >= 1 && n >= 1) {
        g(pair_index(m - 1, n - 1, levels), pair_index(m, n, levels)) -=
            zeta * std::sqrt(static_cast<double>(m) * n);
      }
    }
  }
  return g;
}

// zeta (a^dag^2 - a^2) on a single-mode grid.
Mat single_mode_squeeze_generator(double zeta, int levels) {
  Mat g = Mat::Zero(levels, levels);
  for (int n = 0; n < levels; ++n) {
    if (n + 2 < levels) {
      g(n + 2, n) += zeta * std::sqrt(static_cast<double>(n + 1) * (n + 2));
    }
    if (n >= 2) {
      g(n - 2, n) -= zeta * std::sqrt(static_cast<double>(n) * (n - 1));
    }
  }
  return g;
}

// beta a^dag - conj(beta) a on a single-mode grid.
Mat displacement_generator(cplx beta, int levels) {
  Mat g = Mat::Zero(levels, levels);
  for (int n = 0; n + 1 < levels; ++n) {
    g(n + 1, n) += beta * std::sqrt(static_cast<double>(n + 1));
    g(n, n + 1) -= std::conj(beta) * std::sqrt(static_cast<double>(n + 1));
  }
  return g;
}

std::string line(const std::string& key, double value) {
  return key + " " + format_double(value) + "\n";
}

std::string tag(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

std::string oracle_bs_single_photon() {
  const int levels = 4;
  const double tau = kPi / 4.0;
  const Mat b = expm_taylor(beam_splitter_generator(tau, levels));
  Vec in = Vec::Zero(levels * levels);
  in(pair_index(1, 0, levels)) = 1.0;
  const Vec out = b * in;
  std::string report;
  report += line("amp_10_re", out(pair_index(1, 0, levels)).real());
  report += line("amp_01_re", out(pair_index(0, 1, levels)).real());
  report += line("cos_tau", std::cos(tau));
  report += line("sin_tau", std::sin(tau));
  return report;
}

std::string oracle_epr_amplitudes() {
  const int levels = 12;
  const double zeta = 0.2;
  const double lambda = std::tanh(zeta);
  const Mat s = expm_taylor(two_mode_squeeze_generator(zeta, levels));
  Vec in = Vec::Zero(levels * levels);
  in(0) = 1.0;
  const Vec out = s * in;
  double max_diag_diff = 0.0;
  double max_off_diag = 0.0;
  const double scale = std::sqrt(1.0 - lambda * lambda);
  for (int m = 0; m < levels; ++m) {
    for (int n = 0; n < levels; ++n) {
      const cplx amp = out(pair_index(m, n, levels));
      if (m == n) {
        // The closed form ignores truncation back-action, so compare only
        // well below the cutoff.
        if (m <= levels - 4) {
          const double expected = scale * std::pow(lambda, m);
          max_diag_diff = std::max(max_diag_diff, std::abs(amp - expected));
        }
      } else {
        max_off_diag = std::max(max_off_diag, std::abs(amp));
      }
    }
  }
  std::string report;
  report += line("lambda", lambda);
  report += line("max_diag_diff", max_diag_diff);
  report += line("max_off_diag", max_off_diag);
  return report;
}

std::string oracle_squeeze_lambda() {
  std::string report;
  for (double zeta : {0.1, 0.2, 0.3}) {
    const int levels = 41;
    const Mat s = expm_taylor(single_mode_squeeze_generator(zeta, levels));
    Vec in = Vec::Zero(levels);
    in(0) = 1.0;
    const Vec out = s * in;
    const double lambda_fit = -std::sqrt(2.0) * (out(2) / out(0)).real();
    report += line("zeta_" + tag(zeta) + "_lambda_fit", lambda_fit);
    report += line("zeta_" + tag(zeta) + "_neg_tanh_2zeta", -std::tanh(2.0 * zeta));
  }
  return report;
}

std::string oracle_amplifier_fidelity() {
  std::string report;
  for (double alpha : {0.1, 0.3, 0.6, 1.0}) {
    report += line("alpha_" + tag(alpha) + "_exact",
                   amplifier_fidelity_exact(alpha, 20));
    report += line("alpha_" + tag(alpha) + "_closed",
                   amplifier_fidelity_closed_form(alpha));
  }
  return report;
}

std::string oracle_herald_two_click() {
  const double lambda = 0.2;
  const RVec w = herald_two_click_weights(lambda, 10);
  const double total = w.sum();
  std::string report;
  report += line("fidelity_fock2", w(2) / total);
  for (int n = 0; n <= 4; ++n) {
    report += line("weight_" + std::to_string(n), w(n));
  }
  return report;
}

std::string oracle_bell_negativity() {
  // (|0,1> + |1,0>)/sqrt(2) on a two-level pair, partial transpose by hand.
  const int levels = 2;
  Vec psi = Vec::Zero(4);
  psi(pair_index(0, 1, levels)) = 1.0 / std::sqrt(2.0);
  psi(pair_index(1, 0, levels)) = 1.0 / std::sqrt(2.0);
  const Mat rho = psi * psi.adjoint();
  Mat pt(4, 4);
  for (int ma = 0; ma < levels; ++ma) {
    for (int nb = 0; nb < levels; ++nb) {
      for (int mpa = 0; mpa < levels; ++mpa) {
        for (int npb = 0; npb < levels; ++npb) {
          pt(pair_index(ma, nb, levels), pair_index(mpa, npb, levels)) =
              rho(pair_index(mpa, nb, levels), pair_index(ma, npb, levels));
        }
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(pt);
  const double trace_norm = solver.eigenvalues().cwiseAbs().sum();
  std::string report;
  report += line("bell_log_negativity", std::log2(trace_norm));
  report += line("epr_lambda_0.3", epr_log_negativity(0.3));
  return report;
}

std::string oracle_hybrid_alpha_prime() {
  std::string report;
  for (double alpha : {0.8, 1.0, 1.5}) {
    const cplx closed = hybrid_alpha_prime_closed_form(cplx(alpha, 0.0));
    double best_m = 0.0;
    double best_val = -1e300;
    for (double m = 1e-5; m <= alpha + 4.0; m += 1e-5) {
      const double val = 2.0 * std::log(m) - (m - alpha) * (m - alpha);
      if (val > best_val) {
        best_val = val;
        best_m = m;
      }
    }
    report += line("alpha_" + tag(alpha) + "_closed", closed.real());
    report += line("alpha_" + tag(alpha) + "_scan", best_m);
  }
  return report;
}

std::string oracle_scissors() {
  const double alpha = 0.3;
  const double norm = std::sqrt(1.0 + alpha * alpha);
  std::string report;
  report += line("probability_alpha_0.3", scissors_success_probability(alpha));
  report += line("target_amp_0", 1.0 / norm);
  report += line("target_amp_1", alpha / norm);
  return report;
}

std::string oracle_wigner_anchors() {
  // W(x, p) = (1/pi) sum_{m,n} (-1)^m rho_{mn} <n|D(2 alpha)|m>, with the
  // displacement matrix from the Taylor exponential.
  const int levels = 25;
  const auto wigner_point = [&](const Mat& rho, double x, double p) {
    const cplx alpha(x / std::sqrt(2.0), p / std::sqrt(2.0));
    const Mat d = expm_taylor(displacement_generator(2.0 * alpha, levels));
    cplx acc = 0.0;
    double sign_m = 1.0;
    for (int m = 0; m < levels; ++m) {
      for (int n = 0; n < levels; ++n) {
        acc += sign_m * rho(m, n) * d(n, m);
      }
      sign_m = -sign_m;
    }
    return acc.real() / kPi;
  };
  Mat vacuum = Mat::Zero(levels, levels);
  vacuum(0, 0) = 1.0;
  Mat fock1 = Mat::Zero(levels, levels);
  fock1(1, 1) = 1.0;
  const double alpha = 0.5;
  Vec coherent(levels);
  double amp = std::exp(-alpha * alpha / 2.0);
  for (int n = 0; n < levels; ++n) {
    coherent(n) = amp;
    amp *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  const Mat coherent_rho = coherent * coherent.adjoint();
  const double x = 0.5;
  const double p = 0.3;
  const double gauss = std::exp(-(x - std::sqrt(2.0) * alpha) * (x - std::sqrt(2.0) * alpha) -
                                p * p) / kPi;
  std::string report;
  report += line("vacuum_origin", wigner_point(vacuum, 0.0, 0.0));
  report += line("one_over_pi", 1.0 / kPi);
  report += line("fock1_origin", wigner_point(fock1, 0.0, 0.0));
  report += line("coherent_point", wigner_point(coherent_rho, x, p));
  report += line("coherent_gaussian", gauss);
  return report;
}

std::string oracle_displacement_column() {
  const cplx beta(0.7, 0.2);
  const int levels = 15;
  const Mat d = expm_taylor(displacement_generator(beta, levels));
  const Vec closed = displacement_column_closed_form(beta, levels);
  double max_diff = 0.0;
  // Skip the last rows, where truncation bends the Taylor column.
  for (int m = 0; m + 4 < levels; ++m) {
    max_diff = std::max(max_diff, std::abs(d(m, 0) - closed(m)));
  }
  std::string report;
  report += line("max_column_diff", max_diff);
  report += line("column_norm_closed", closed.norm());
  return report;
}

std::string oracle_delocalized_norm() {
  std::string report;
  for (double alpha : {0.5, 1.0}) {
    for (double phi : {0.0, kPi / 2.0, kPi}) {
      const Vec amps = delocalized_addition_amplitudes(alpha, phi, 18);
      report += line("alpha_" + tag(alpha) + "_phi_" + tag(phi) + "_numeric",
                     amps.squaredNorm());
      report += line("alpha_" + tag(alpha) + "_phi_" + tag(phi) + "_closed",
                     delocalized_addition_norm(alpha, phi));
    }
  }
  return report;
}

std::string oracle_thermal_subtraction() {
  std::string report;
  for (double nbar : {0.5, 1.0, 2.0}) {
    // Thermal weights p_n ~ nbar^n / (1 + nbar)^{n+1}; annihilation maps the
    // distribution to w_n = (n + 1) p_{n+1}.
    const int cutoff = 400;
    long double total = 0.0L;
    long double first = 0.0L;
    long double ratio = nbar / (1.0 + nbar);
    long double p = 1.0L / (1.0 + nbar);
    for (int n = 0; n <= cutoff; ++n) {
      const long double w = (n + 1) * p * ratio;  // (n+1) p_{n+1}
      total += w;
      first += n * w;
      p *= ratio;
    }
    report += line("nbar_" + tag(nbar) + "_mean",
                   static_cast<double>(first / total));
    report += line("nbar_" + tag(nbar) + "_closed", thermal_subtracted_mean(nbar));
  }
  return report;
}

const std::map<std::string, std::function<std::string()>>& oracle_table() {
  static const std::map<std::string, std::function<std::string()>> table = {
      {"bs-single-photon", oracle_bs_single_photon},
      {"epr-amplitudes", oracle_epr_amplitudes},
      {"squeeze-lambda", oracle_squeeze_lambda},
      {"amplifier-fidelity", oracle_amplifier_fidelity},
      {"herald-two-click", oracle_herald_two_click},
      {"bell-negativity", oracle_bell_negativity},
      {"hybrid-alpha-prime", oracle_hybrid_alpha_prime},
      {"scissors", oracle_scissors},
      {"wigner-anchors", oracle_wigner_anchors},
      {"displacement-column", oracle_displacement_column},
      {"delocalized-norm", oracle_delocalized_norm},
      {"thermal-subtraction", oracle_thermal_subtraction},
  };
  return table;
}

}  // namespace

Mat expm_taylor(const Mat& generator) {
  if (generator.rows() != generator.cols()) {
    throw std::invalid_argument("expm_taylor: matrix must be square");
  }
  const double norm = generator.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scaled_norm = norm;
  while (scaled_norm > 0.5) {
    scaled_norm /= 2.0;
    ++squarings;
  }
  const Mat scaled = generator / std::pow(2.0, squarings);
  const Eigen::Index dim = generator.rows();
  Mat result = Mat::Identity(dim, dim);
  Mat term = Mat::Identity(dim, dim);
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20) {
      break;
    }
  }
  for (int s = 0; s < squarings; ++s) {
    result = result * result;
  }
  return result;
}

double amplifier_fidelity_exact(double alpha, int cutoff) {
  if (cutoff < 2) {
    throw std::invalid_argument("amplifier_fidelity_exact: cutoff too small");
  }
  const int levels = cutoff + 1;
  Vec coherent(levels);
  Vec doubled(levels);
  double amp = std::exp(-alpha * alpha / 2.0);
  double amp2 = std::exp(-2.0 * alpha * alpha);
  for (int n = 0; n < levels; ++n) {
    coherent(n) = amp;
    doubled(n) = amp2;
    amp *= alpha / std::sqrt(static_cast<double>(n + 1));
    amp2 *= 2.0 * alpha / std::sqrt(static_cast<double>(n + 1));
  }
  Vec amplified(levels);
  for (int n = 0; n < levels; ++n) {
    amplified(n) = static_cast<double>(n + 1) * coherent(n);
  }
  amplified /= amplified.norm();
  doubled /= doubled.norm();
  const cplx overlap = doubled.adjoint() * amplified;
  return std::norm(overlap);
}

double amplifier_fidelity_closed_form(double alpha) {
  const double a2 = alpha * alpha;
  const double numerator = (1.0 + 2.0 * a2) * (1.0 + 2.0 * a2);
  const double denominator = 1.0 + 3.0 * a2 + a2 * a2;
  return std::exp(-a2) * numerator / denominator;
}

RVec herald_two_click_weights(double lambda, int levels) {
  if (levels < 1) {
    throw std::invalid_argument("herald_two_click_weights: levels must be positive");
  }
  RVec w(levels);
  const double scale = 1.0 - lambda * lambda;
  for (int n = 0; n < levels; ++n) {
    double shape = 1.0 - std::pow(2.0, 1.0 - n);
    if (n == 0) {
      shape += 1.0;
    }
    w(n) = scale * std::pow(lambda, 2.0 * n) * shape;
  }
  return w;
}

double epr_log_negativity(double lambda) {
  return std::log2((1.0 + lambda) / (1.0 - lambda));
}

cplx hybrid_alpha_prime_closed_form(cplx alpha) {
  const double mag = std::abs(alpha);
  const double best = (mag + std::sqrt(mag * mag + 4.0)) / 2.0;
  if (mag == 0.0) {
    return cplx(best, 0.0);
  }
  return best * alpha / mag;
}

double scissors_success_probability(double alpha) {
  return std::exp(-alpha * alpha) / 4.0 * (1.0 + alpha * alpha);
}

Vec delocalized_addition_amplitudes(double alpha, double phi, int levels) {
  if (levels < 2) {
    throw std::invalid_argument("delocalized_addition_amplitudes: levels too small");
  }
  Vec coherent(levels);
  double amp = std::exp(-alpha * alpha / 2.0);
  for (int n = 0; n < levels; ++n) {
    coherent(n) = amp;
    amp *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  const cplx phase = std::exp(cplx(0.0, phi));
  Vec out = Vec::Zero(levels * levels);
  for (int m = 0; m < levels; ++m) {
    for (int n = 0; n < levels; ++n) {
      cplx value = 0.0;
      if (m >= 1) {
        value += std::sqrt(static_cast<double>(m)) * coherent(m - 1) * coherent(n);
      }
      if (n >= 1) {
        value += phase * std::sqrt(static_cast<double>(n)) * coherent(m) * coherent(n - 1);
      }
      out(pair_index(m, n, levels)) = value;
    }
  }
  return out;
}

double delocalized_addition_norm(double alpha, double phi) {
  return 2.0 * (1.0 + alpha * alpha * (1.0 + std::cos(phi)));
}

double thermal_subtracted_mean(double nbar) { return 2.0 * nbar; }

Vec displacement_column_closed_form(cplx beta, int levels) {
  if (levels < 1) {
    throw std::invalid_argument("displacement_column_closed_form: levels must be positive");
  }
  Vec column(levels);
  cplx amp = std::exp(-0.5 * std::norm(beta));
  for (int m = 0; m < levels; ++m) {
    column(m) = amp;
    amp *= beta / std::sqrt(static_cast<double>(m + 1));
  }
  return column;
}

std::vector<std::string> oracle_names() {
  std::vector<std::string> names;
  for (const auto& entry : oracle_table()) {
    names.push_back(entry.first);
  }
  return names;
}

std::string run_oracle(const std::string& name) {
  const auto& table = oracle_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string known;
    for (const auto& entry : table) {
      known += known.empty() ? entry.first : ", " + entry.first;
    }
    throw std::invalid_argument("unknown oracle '" + name + "' (known: " + known + ")");
  }
  return it->second();
}

}  // namespace focksmith
