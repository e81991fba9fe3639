#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "focksmith/operators.hpp"
#include "focksmith/quadrature.hpp"
#include "focksmith/sampling.hpp"
#include "focksmith/states.hpp"
#include "focksmith/types.hpp"

using namespace focksmith;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

State coherent_state(cplx alpha, int cutoff) {
  StateSpec spec;
  spec.kind = StateKind::coherent;
  spec.alpha = alpha;
  return make_state(spec, ModeSpace(1, cutoff));
}

}  // namespace

TEST_CASE("hermite functions are orthonormal") {
  const int levels = 12;
  // The full-line overlap matrix is exactly the identity by construction;
  // integrate explicitly instead with Gauss-Legendre on the support.
  const double bound = quadrature_support_bound(levels);
  std::vector<double> nodes, weights;
  gauss_legendre(400, -bound, bound, nodes, weights);
  RMat gram = RMat::Zero(levels, levels);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const RVec psi = hermite_psi(levels, nodes[i]);
    gram += weights[i] * (psi * psi.transpose());
  }
  REQUIRE((gram - RMat::Identity(levels, levels)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ground state wavefunction has vacuum variance one half") {
  // psi_0(x) = pi^{-1/4} e^{-x^2/2}.
  for (const double x : {0.0, 0.7, -1.3}) {
    const double expected = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    REQUIRE(std::abs(hermite_psi(3, x)(0) - expected) < 1e-12);
  }
}

TEST_CASE("quadrature operator matrix") {
  const int cutoff = 6;
  const OperatorMatrix op = quadrature_operator(0.0, cutoff);
  const Mat a = ladder_matrix(LadderKind::annihilate, cutoff + 1);
  const Mat expected = (a + Mat(a.adjoint())) / std::sqrt(2.0);
  REQUIRE((op.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);

  const OperatorMatrix rotated = quadrature_operator(0.9, cutoff);
  const Mat expected_rot = (a * std::exp(cplx(0.0, -0.9)) +
                            Mat(a.adjoint()) * std::exp(cplx(0.0, 0.9))) /
                           std::sqrt(2.0);
  REQUIRE((rotated.matrix() - expected_rot).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("quadrature pdf closed forms") {
  RVec grid(5);
  grid << -2.0, -0.5, 0.0, 0.8, 1.9;

  // Vacuum: Gaussian with variance 1/2 at every phase.
  const State vac(Ket::vacuum(ModeSpace(1, 8)));
  for (const double theta : {0.0, 1.1}) {
    const RVec pdf = quadrature_pdf(vac, 0, theta, grid);
    for (int i = 0; i < grid.size(); ++i) {
      const double expected = std::exp(-grid(i) * grid(i)) / std::sqrt(kPi);
      REQUIRE(std::abs(pdf(i) - expected) < 1e-12);
    }
  }

  // Single photon: 2 x^2 e^{-x^2} / sqrt(pi).
  const State one(Ket::basis(ModeSpace(1, 8), {1}));
  const RVec pdf1 = quadrature_pdf(one, 0, 0.4, grid);
  for (int i = 0; i < grid.size(); ++i) {
    const double expected =
        2.0 * grid(i) * grid(i) * std::exp(-grid(i) * grid(i)) / std::sqrt(kPi);
    REQUIRE(std::abs(pdf1(i) - expected) < 1e-12);
  }

  // Coherent state: Gaussian centered at sqrt(2)|alpha| cos(theta - arg).
  const cplx alpha(0.8, 0.3);
  const State coh = coherent_state(alpha, 20);
  const double theta = 0.7;
  const double center = std::sqrt(2.0) * std::abs(alpha) * std::cos(theta - std::arg(alpha));
  const RVec pdfc = quadrature_pdf(coh, 0, theta, grid);
  for (int i = 0; i < grid.size(); ++i) {
    const double d = grid(i) - center;
    const double expected = std::exp(-d * d) / std::sqrt(kPi);
    REQUIRE(std::abs(pdfc(i) - expected) < 1e-9);
  }
}

TEST_CASE("window matrices form a resolution of the identity") {
  const int levels = 10;
  // Full line is exactly the identity.
  const Mat full = quadrature_window_matrix(0.3, -kInf, kInf, levels);
  REQUIRE((full - Mat::Identity(levels, levels)).cwiseAbs().maxCoeff() == 0.0);

  // A finite partition of the line sums back to the identity.
  const double theta = 1.2;
  const Mat left = quadrature_window_matrix(theta, -kInf, -0.8, levels);
  const Mat middle = quadrature_window_matrix(theta, -0.8, 0.5, levels);
  const Mat right = quadrature_window_matrix(theta, 0.5, kInf, levels);
  REQUIRE((left + middle + right - Mat::Identity(levels, levels)).cwiseAbs().maxCoeff() <
          1e-10);

  // Vacuum spends half its time on the positive axis.
  const Mat positive = quadrature_window_matrix(0.0, 0.0, kInf, levels);
  REQUIRE(std::abs(positive(0, 0).real() - 0.5) < 1e-12);

  // The phase enters only through e^{i theta (m - n)}.
  const Mat base = quadrature_window_matrix(0.0, -0.8, 0.5, levels);
  for (int m = 0; m < levels; ++m) {
    for (int n = 0; n < levels; ++n) {
      const cplx phase = std::exp(cplx(0.0, theta * (m - n)));
      REQUIRE(std::abs(middle(m, n) - phase * base(m, n)) < 1e-12);
    }
  }
}

TEST_CASE("support bound holds the retained levels") {
  const int levels = 11;
  const double bound = quadrature_support_bound(levels);
  // Essentially no |10> probability mass lies beyond the bound.
  std::vector<double> nodes, weights;
  gauss_legendre(200, bound, bound + 10.0, nodes, weights);
  double outside = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const RVec psi = hermite_psi(levels, nodes[i]);
    outside += weights[i] * psi(10) * psi(10);
  }
  REQUIRE(2.0 * outside < 1e-10);
}

TEST_CASE("gauss legendre integrates polynomials exactly") {
  std::vector<double> nodes, weights;
  gauss_legendre(6, -1.0, 2.0, nodes, weights);
  double integral = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    integral += weights[i] * (x * x * x * x * x * x * x);  // x^7
  }
  // Exact: (2^8 - 1)/8 = 31.875 for x^7 on [-1, 2]; a 6-point rule is exact
  // through degree 11.
  REQUIRE(std::abs(integral - (256.0 - 1.0) / 8.0) < 1e-10);
}

TEST_CASE("homodyne sampling is deterministic and phase labelled") {
  const State coh = coherent_state(cplx(0.9, 0.0), 16);
  const std::vector<double> phases{0.0, kPi / 2.0};
  const auto a = sample_homodyne(coh, 0, phases, 500, 42);
  const auto b = sample_homodyne(coh, 0, phases, 500, 42);
  REQUIRE(a.size() == 1000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].theta == b[i].theta);
    REQUIRE(a[i].x == b[i].x);
  }
  const auto c = sample_homodyne(coh, 0, phases, 500, 43);
  bool any_different = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    any_different = any_different || (a[i].x != c[i].x);
  }
  REQUIRE(any_different);

  // Sample moments sit near the exact quadrature moments: mean
  // sqrt(2) alpha cos(theta), variance 1/2.
  double mean0 = 0.0, mean90 = 0.0, var0 = 0.0;
  for (const QuadratureSample& s : a) {
    if (s.theta == 0.0) {
      mean0 += s.x;
    } else {
      mean90 += s.x;
    }
  }
  mean0 /= 500.0;
  mean90 /= 500.0;
  for (const QuadratureSample& s : a) {
    if (s.theta == 0.0) var0 += (s.x - mean0) * (s.x - mean0);
  }
  var0 /= 499.0;
  REQUIRE(std::abs(mean0 - std::sqrt(2.0) * 0.9) < 5.0 * std::sqrt(0.5 / 500.0));
  REQUIRE(std::abs(mean90) < 5.0 * std::sqrt(0.5 / 500.0));
  REQUIRE(std::abs(var0 - 0.5) < 0.15);
}

TEST_CASE("rng streams split without order dependence") {
  RngStream root(99);
  RngStream c1 = root.child(1);
  RngStream c2 = root.child(2);
  const double a1 = c1.uniform();
  // Recreate in the other order; the draws must not change.
  RngStream root2(99);
  RngStream d2 = root2.child(2);
  RngStream d1 = root2.child(1);
  REQUIRE(d1.uniform() == a1);
  REQUIRE(d2.uniform() == c2.uniform());

  // Uniform draws stay in [0, 1).
  RngStream s(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}
