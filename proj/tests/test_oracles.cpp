#include <catch_amalgamated.hpp>

#include <cmath>

#include "focksmith/oracles.hpp"
#include "focksmith/types.hpp"

using namespace focksmith;

TEST_CASE("taylor exponential is unitary for antihermitian input") {
  Mat a(6, 6);
  a.setZero();
  a(1, 0) = cplx(0.4, 0.2);
  a(3, 2) = cplx(-0.7, 0.1);
  a(5, 1) = cplx(0.05, -0.3);
  const Mat gen = a - Mat(a.adjoint());
  const Mat u = expm_taylor(gen);
  REQUIRE((u.adjoint() * u - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-13);
  // exp(G) exp(-G) = 1.
  REQUIRE((u * expm_taylor(Mat(-gen)) - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("amplifier fidelity closed form tracks the exact overlap") {
  for (const double alpha : {0.2, 0.4, 0.6}) {
    REQUIRE(std::abs(amplifier_fidelity_exact(alpha, 24) -
                     amplifier_fidelity_closed_form(alpha)) < 1e-9);
  }
  // Weak-pump limit: the heralded amplifier output approaches the target.
  REQUIRE(amplifier_fidelity_closed_form(0.05) > 0.999);
}

TEST_CASE("two click weights follow the closed form") {
  const double lambda = 0.2;
  const RVec w = herald_two_click_weights(lambda, 8);
  const double head = 1.0 - lambda * lambda;
  for (int n = 0; n < 8; ++n) {
    const double expected =
        head * std::pow(lambda * lambda, n) *
        (1.0 - std::pow(2.0, 1.0 - n) + (n == 0 ? 1.0 : 0.0));
    REQUIRE(std::abs(w(n) - expected) < 1e-14);
  }
  REQUIRE(w(0) == 0.0);
  REQUIRE(w(1) == 0.0);
  REQUIRE(w(2) > 0.0);
}

TEST_CASE("remaining closed forms are self consistent") {
  REQUIRE(std::abs(epr_log_negativity(0.5) - std::log2(3.0)) < 1e-12);
  REQUIRE(std::abs(hybrid_alpha_prime_closed_form(cplx(1.0, 0.0)) -
                   cplx(0.5 * (1.0 + std::sqrt(5.0)), 0.0)) < 1e-12);
  REQUIRE(std::abs(scissors_success_probability(0.3) -
                   std::exp(-0.09) * 1.09 / 4.0) < 1e-12);
  REQUIRE(std::abs(thermal_subtracted_mean(1.3) - 2.6) < 1e-12);
}

TEST_CASE("every oracle report renders") {
  for (const std::string& name : oracle_names()) {
    const std::string report = run_oracle(name);
    REQUIRE_FALSE(report.empty());
    // Reports are key/value lines: every line splits into exactly two fields.
    REQUIRE(report.find(' ') != std::string::npos);
  }
  REQUIRE_THROWS_AS(run_oracle("no-such-oracle"), std::invalid_argument);
}
