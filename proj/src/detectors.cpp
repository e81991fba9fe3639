#include "focksmith/detectors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace focksmith {

namespace {

void check_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << "detector " << what << " must lie in [0, 1], got " << v;
    throw std::invalid_argument(msg.str());
  }
}

/// P(k counts | m photons) for a binomial-loss counter.
double binomial_count_prob(int m, int k, double eta) {
  if (k < 0 || k > m) return 0.0;
  double p = 1.0;
  for (int i = 0; i < k; ++i) {
    p *= eta * static_cast<double>(m - i) / static_cast<double>(i + 1);
  }
  for (int i = 0; i < m - k; ++i) p *= 1.0 - eta;
  return p;
}

}  // namespace

DetectorModel DetectorModel::projective(int n) {
  if (n < 0) throw std::invalid_argument("projective detector outcome must be >= 0");
  DetectorModel det;
  det.kind = DetectorKind::projective;
  det.n = n;
  return det;
}

DetectorModel DetectorModel::on_off(double efficiency, double dark_rate) {
  check_unit_interval(efficiency, "efficiency");
  if (!(dark_rate >= 0.0 && dark_rate < 1.0)) {
    throw std::invalid_argument("detector dark rate must lie in [0, 1)");
  }
  DetectorModel det;
  det.kind = DetectorKind::on_off;
  det.efficiency = efficiency;
  det.dark_rate = dark_rate;
  return det;
}

DetectorModel DetectorModel::pnr(double efficiency, int max_count) {
  check_unit_interval(efficiency, "efficiency");
  if (max_count < 1) throw std::invalid_argument("pnr detector max_count must be >= 1");
  DetectorModel det;
  det.kind = DetectorKind::pnr;
  det.efficiency = efficiency;
  det.max_count = max_count;
  return det;
}

std::string DetectorModel::describe() const {
  std::ostringstream out;
  switch (kind) {
    case DetectorKind::projective:
      out << "projective(n=" << n << ")";
      break;
    case DetectorKind::on_off:
      out << "on_off(efficiency=" << efficiency << ", dark_rate=" << dark_rate << ")";
      break;
    case DetectorKind::pnr:
      out << "pnr(efficiency=" << efficiency << ", max_count=" << max_count << ")";
      break;
  }
  return out.str();
}

RVec DetectorModel::count_diag(int count, int levels) const {
  if (levels < 1) throw std::invalid_argument("detector: levels must be >= 1");
  RVec diag = RVec::Zero(levels);
  switch (kind) {
    case DetectorKind::projective: {
      if (count < 0 || count >= levels) {
        throw std::invalid_argument("projective detector: count outside the Fock range");
      }
      diag(count) = 1.0;
      return diag;
    }
    case DetectorKind::on_off: {
      if (count != 0 && count != 1) {
        throw std::invalid_argument("on_off detector has only outcomes 0 (no click) and 1 (click)");
      }
      for (int m = 0; m < levels; ++m) {
        const double idle = (1.0 - dark_rate) * std::pow(1.0 - efficiency, m);
        diag(m) = (count == 0) ? idle : 1.0 - idle;
      }
      return diag;
    }
    case DetectorKind::pnr: {
      if (count < 0 || count > max_count) {
        throw std::invalid_argument("pnr detector: count outside [0, max_count]");
      }
      for (int m = 0; m < levels; ++m) {
        if (count < max_count) {
          diag(m) = binomial_count_prob(m, count, efficiency);
        } else {
          double below = 0.0;
          for (int k = 0; k < max_count; ++k) below += binomial_count_prob(m, k, efficiency);
          diag(m) = 1.0 - below;
        }
      }
      return diag;
    }
  }
  throw std::logic_error("detector: unknown kind");
}

RVec DetectorModel::click_diag(int levels) const {
  switch (kind) {
    case DetectorKind::projective:
      if (n >= levels) {
        throw std::invalid_argument("projective detector outcome exceeds the Fock range");
      }
      return count_diag(n, levels);
    case DetectorKind::on_off:
      return count_diag(1, levels);
    case DetectorKind::pnr:
      return count_diag(1, levels);
  }
  throw std::logic_error("detector: unknown kind");
}

bool DetectorModel::resolves_number() const {
  switch (kind) {
    case DetectorKind::projective:
      return true;
    case DetectorKind::on_off:
      return false;
    case DetectorKind::pnr:
      return efficiency == 1.0;
  }
  throw std::logic_error("detector: unknown kind");
}

int DetectorModel::num_outcomes(int levels) const {
  switch (kind) {
    case DetectorKind::projective:
      return levels;
    case DetectorKind::on_off:
      return 2;
    case DetectorKind::pnr:
      return max_count + 1;
  }
  throw std::logic_error("detector: unknown kind");
}

std::vector<RVec> detector_povm_diags(const DetectorModel& det, int levels) {
  std::vector<RVec> elements;
  const int outcomes = det.num_outcomes(levels);
  elements.reserve(static_cast<std::size_t>(outcomes));
  for (int k = 0; k < outcomes; ++k) elements.push_back(det.count_diag(k, levels));
  return elements;
}

}  // namespace focksmith
