#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace focksmith {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityFloor = -1e-8;
inline constexpr double kNormTol = 1e-10;

/// Raised when a conditioning operation has zero (or numerically zero)
/// success probability, e.g. pure subtraction from vacuum.
class HeraldImpossibleError : public std::runtime_error {
 public:
  explicit HeraldImpossibleError(const std::string& what)
      : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Truncation diagnostics are routed through a process-wide handler so
/// callers (tests, the CLI report) can collect them instead of spamming
/// stderr. The default handler writes to stderr.
using WarningHandler = std::function<void(const std::string&)>;

void set_warning_handler(WarningHandler handler);
void emit_warning(const std::string& message);

/// RAII scope that swallows warnings into a list.
class WarningCollector {
 public:
  WarningCollector();
  ~WarningCollector();
  WarningCollector(const WarningCollector&) = delete;
  WarningCollector& operator=(const WarningCollector&) = delete;
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace focksmith
