#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "focksmith/algebra.hpp"
#include "focksmith/entanglement.hpp"
#include "focksmith/herald.hpp"
#include "focksmith/operators.hpp"
#include "focksmith/oracles.hpp"
#include "focksmith/photon_stats.hpp"
#include "focksmith/quadrature.hpp"
#include "focksmith/states.hpp"
#include "focksmith/types.hpp"
#include "focksmith/wigner.hpp"

using namespace focksmith;

namespace {

constexpr double kPi = 3.14159265358979323846;

State coherent_state(cplx alpha, int cutoff) {
  StateSpec spec;
  spec.kind = StateKind::coherent;
  spec.alpha = alpha;
  return make_state(spec, ModeSpace(1, cutoff));
}

State epr_state(double lambda, int cutoff) {
  StateSpec spec;
  spec.kind = StateKind::epr;
  spec.lambda = lambda;
  return make_state(spec, ModeSpace(2, cutoff));
}

}  // namespace

TEST_CASE("wigner values at the origin anchor to parity") {
  // W(0,0) = (1/pi) sum_n (-1)^n rho_nn.
  const Mat vac = Mat::Identity(8, 8).col(0) * Mat::Identity(8, 8).col(0).adjoint();
  REQUIRE(std::abs(wigner_point(vac, 0.0, 0.0) - 1.0 / kPi) < 1e-12);
  const Mat one = Mat::Identity(8, 8).col(1) * Mat::Identity(8, 8).col(1).adjoint();
  REQUIRE(std::abs(wigner_point(one, 0.0, 0.0) + 1.0 / kPi) < 1e-12);
}

TEST_CASE("coherent state wigner is the displaced vacuum gaussian") {
  const cplx alpha(0.7, -0.4);
  const State coh = coherent_state(alpha, 24);
  const Mat rho = coh.to_density().matrix();
  const double x0 = std::sqrt(2.0) * alpha.real();
  const double p0 = std::sqrt(2.0) * alpha.imag();
  for (const double x : {-0.5, 0.3, 1.4}) {
    for (const double p : {-1.0, 0.2}) {
      const double expected =
          std::exp(-((x - x0) * (x - x0) + (p - p0) * (p - p0))) / kPi;
      REQUIRE(std::abs(wigner_point(rho, x, p) - expected) < 1e-9);
    }
  }
}

TEST_CASE("displacement matrix against the closed form column and exponential") {
  const cplx beta(0.6, 0.35);
  const int levels = 14;
  const Mat d = displacement_matrix(beta, levels);

  // First column: D(beta)|0> = |beta> as amplitudes.
  const Vec column = displacement_column_closed_form(beta, levels);
  REQUIRE((d.col(0) - column).cwiseAbs().maxCoeff() < 1e-11);

  // Full matrix against the Taylor exponential of the generator.
  Mat g = Mat::Zero(levels, levels);
  for (int n = 0; n + 1 < levels; ++n) {
    g(n + 1, n) += beta * std::sqrt(double(n + 1));
    g(n, n + 1) -= std::conj(beta) * std::sqrt(double(n + 1));
  }
  // The closed form is exact for the untruncated operator; the exponential
  // of the truncated generator differs near the cutoff edge, so compare a
  // comfortable top-left block only.
  const Mat reference = expm_taylor(g);
  REQUIRE((d.topLeftCorner(7, 7) - reference.topLeftCorner(7, 7)).cwiseAbs().maxCoeff() <
          1e-7);
}

TEST_CASE("wigner grid integrates to one and matches the quadrature marginal") {
  StateSpec spec;
  spec.kind = StateKind::cat;
  spec.alpha = cplx(1.3, 0.0);
  spec.parity = -1;
  const State cat = make_state(spec, ModeSpace(1, 24));

  WignerGridSpec grid_spec;
  grid_spec.half_width = 7.0;
  grid_spec.points = 281;
  const WignerGrid grid = wigner(cat, 0, grid_spec);
  REQUIRE(std::abs(grid.integral() - 1.0) < 5e-3);
  REQUIRE(grid.min_value() < -1e-3);  // odd cats are strongly nonclassical

  // integral of W(x, p) dp equals the theta = 0 quadrature density.
  RVec xs(3);
  xs << 0.0, 0.9, -1.7;
  const RVec pdf = quadrature_pdf(cat, 0, 0.0, xs);
  for (int i = 0; i < xs.size(); ++i) {
    // Locate the grid row nearest the requested x.
    int row = 0;
    double best = 1e300;
    for (int r = 0; r < grid.xs.size(); ++r) {
      if (std::abs(grid.xs(r) - xs(i)) < best) {
        best = std::abs(grid.xs(r) - xs(i));
        row = r;
      }
    }
    const double marginal = grid.values.row(row).sum() * grid.dp();
    const RVec pdf_at_row = quadrature_pdf(cat, 0, 0.0, grid.xs.segment(row, 1));
    REQUIRE(std::abs(marginal - pdf_at_row(0)) < 1e-4);
    (void)pdf;
  }
}

TEST_CASE("single photon negativity volume matches the closed form") {
  // For |1>, the negative disk contributes 2 e^{-1/2} - 1 of absolute volume.
  const State one(Ket::basis(ModeSpace(1, 10), {1}));
  const double expected = 2.0 * std::exp(-0.5) - 1.0;
  REQUIRE(std::abs(wigner_negativity_volume(one) - expected) < 2e-3);

  // Gaussian states have none.
  REQUIRE(wigner_negativity_volume(coherent_state(cplx(0.5, 0.2), 16)) < 1e-9);
}

TEST_CASE("log negativity closed forms") {
  // EPR: E_N = log2((1 + lambda) / (1 - lambda)).
  for (const double lambda : {0.2, 0.45}) {
    const State epr = epr_state(lambda, 28);
    REQUIRE(std::abs(log_negativity(epr, {0}) - epr_log_negativity(lambda)) < 1e-8);
  }

  // Bell pair carries exactly one ebit.
  StateSpec bell;
  bell.kind = StateKind::sp_entangled;
  bell.c1 = cplx(std::sqrt(0.5), 0.0);
  bell.c2 = cplx(std::sqrt(0.5), 0.0);
  bell.phi = 0.0;
  REQUIRE(std::abs(log_negativity(make_state(bell, ModeSpace(2, 6)), {0}) - 1.0) < 1e-10);

  // Product states are not entangled.
  const State product(
      tensor(coherent_state(cplx(0.8, 0.0), 12).ket(), Ket::basis(ModeSpace(1, 12), {1})));
  REQUIRE(log_negativity(product, {0}) < 1e-9);

  // Invariant under local unitaries (a displacement on one side).
  const State epr = epr_state(0.35, 26);
  const State displaced =
      State(apply_one_mode(epr.ket(), displacement_core(cplx(0.4, 0.2), 27), 0));
  REQUIRE(std::abs(log_negativity(displaced, {0}) - log_negativity(epr, {0})) < 1e-8);
}

TEST_CASE("photon subtraction raises epr entanglement") {
  for (const double lambda : {0.2, 0.4, 0.6}) {
    const State epr = epr_state(lambda, 30);
    OperatorSuperposition sub;
    sub.terms.push_back({cplx(1.0, 0.0), 0, TermKind::subtract});
    const HeraldOutcome out = apply_ideal(epr, sub);
    REQUIRE(log_negativity(out.state, {0}) > log_negativity(epr, {0}) + 0.05);
  }
}

TEST_CASE("photon number marginals and joints") {
  const State epr = epr_state(0.45, 18);
  const RVec marginal = photon_marginal(epr, 0);
  const RMat joint = photon_joint(epr, 0, 1);
  const double q = 0.45 * 0.45;
  for (int n = 0; n <= 18; ++n) {
    REQUIRE(std::abs(marginal(n) - (1.0 - q) * std::pow(q, n)) < 1e-9);
    for (int m = 0; m <= 18; ++m) {
      const double expected = (m == n) ? (1.0 - q) * std::pow(q, n) : 0.0;
      REQUIRE(std::abs(joint(m, n) - expected) < 1e-12);
    }
  }
  // Marginals are consistent with the joint.
  for (int n = 0; n <= 18; ++n) {
    REQUIRE(std::abs(joint.row(n).sum() - marginal(n)) < 1e-10);
  }
}

TEST_CASE("discorrelation of the opposite phase added pair") {
  const ModeSpace two(2, 16);
  const Ket pair = make_two_mode_added_coherent(cplx(1.0, 0.0), kPi, two);
  const DiscorrelationResult result = discorrelation_check(State(pair));
  REQUIRE(result.discorrelated);
  REQUIRE(result.max_diagonal < 1e-15);

  // Marginals keep weight on small photon numbers: the diagonal vanishing
  // is a genuine joint effect, not empty marginals.
  const RVec marginal = photon_marginal(State(pair), 0);
  REQUIRE(marginal(0) > 1e-3);
  REQUIRE(marginal(1) > 1e-3);
  REQUIRE(marginal(2) > 1e-3);

  // The same construction at phi = 0 is correlated.
  const Ket aligned = make_two_mode_added_coherent(cplx(1.0, 0.0), 0.0, two);
  REQUIRE_FALSE(discorrelation_check(State(aligned)).discorrelated);
}

TEST_CASE("mean photon and purity") {
  const State coh = coherent_state(cplx(0.9, 0.4), 20);
  REQUIRE(std::abs(mean_photon(coh) - std::norm(cplx(0.9, 0.4))) < 1e-9);
  REQUIRE(std::abs(state_purity(coh) - 1.0) < 1e-10);

  StateSpec spec;
  spec.kind = StateKind::thermal;
  spec.nbar = 0.7;
  const State thermal = make_state(spec, ModeSpace(1, 40));
  REQUIRE(std::abs(mean_photon(thermal) - 0.7) < 1e-6);
  REQUIRE(std::abs(state_purity(thermal) - 1.0 / 2.4) < 1e-7);
}
