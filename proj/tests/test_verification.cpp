#include <doctest.h>

#include <cmath>

#include "gamble/closed_form.hpp"
#include "gamble/equilibrium.hpp"
#include "gamble/errors.hpp"
#include "gamble/numerics.hpp"
#include "gamble/payoff.hpp"
#include "gamble/verification.hpp"
#include "oracles.hpp"

using namespace gamble;

namespace {

Equilibrium solve(int n, double K, RegretMode mode, double x0 = 1.0) {
  ContestSpec s;
  s.n = n;
  s.K = K;
  s.x0 = x0;
  s.mode = mode;
  return solve_equilibrium(s);
}

}  // namespace

TEST_SUITE("verification") {
  TEST_CASE("certificates of the closed-form equilibria") {
    struct Case {
      int n;
      double K;
      RegretMode mode;
      double lambda;
    };
    for (const auto& c : {Case{2, 0.0, RegretMode::None, 0.5},
                          Case{5, 0.0, RegretMode::None, 0.2},
                          Case{2, 1.0, RegretMode::Future, 1.0 / 3.0},
                          Case{3, 2.0, RegretMode::Future, 1.0 / 7.0},
                          Case{3, 2.0, RegretMode::All, 1.0},
                          Case{2, 0.0, RegretMode::Past, 0.5}}) {
      CAPTURE(c.n);
      CAPTURE(c.K);
      const auto eq = solve(c.n, c.K, c.mode);
      const auto cert = certify(eq);
      CHECK(cert.passed);
      CHECK(cert.max_violation <= 1e-8);
      CHECK(cert.active_set_residual <= 1e-6);
      CHECK(cert.multipliers.lambda == doctest::Approx(c.lambda).epsilon(1e-12));
      CHECK(cert.multipliers.gamma == 0.0);
      CHECK(cert.value == doctest::Approx(eq.value).epsilon(1e-10));
    }
  }

  TEST_CASE("past-regret certificates") {
    for (int n : {2, 3, 5}) {
      for (double K : {0.5, 1.0, 3.0}) {
        CAPTURE(n);
        CAPTURE(K);
        const auto eq = solve(n, K, RegretMode::Past);
        CertifyOptions opt;
        opt.x_points = 1500;
        opt.y_points = 200;
        const auto cert = certify(eq, opt);
        CHECK(cert.passed);
        CHECK(cert.max_violation <= 1e-8);
        CHECK(cert.doob_residual <= 1e-8);
        CHECK(cert.multipliers.lambda == doctest::Approx(eq.past->psi_prime(1.0)));
        CHECK_FALSE(cert.multipliers.eta.empty());
        for (auto [y, eta] : cert.multipliers.eta) REQUIRE(eta >= 0.0);
      }
    }
  }

  TEST_CASE("an inflated endpoint is rejected") {
    for (auto mode : {RegretMode::None, RegretMode::Future, RegretMode::Past,
                      RegretMode::All}) {
      const auto eq = solve(3, 1.0, mode);
      CertifyOptions opt;
      opt.x_points = 1500;
      opt.y_points = 200;
      opt.claimed_endpoint = eq.r() * 1.01;
      const auto cert = certify(eq, opt);
      CHECK_FALSE(cert.passed);
      CHECK(cert.max_violation > 1e-4);
      CHECK_FALSE(cert.failure.empty());
    }
  }

  TEST_CASE("the past integrand vanishes on the support") {
    const auto eq = solve(3, 1.0, RegretMode::Past);
    const LagrangianIntegrand L(eq);
    CHECK(L.two_dimensional());
    for (double y : numerics::linspace(1.0, eq.r(), 30)) {
      REQUIRE(std::abs(L(y, y)) < 1e-12);
      REQUIRE(std::abs(L(eq.past->phi(y), y)) < 1e-9);
    }
    // y beyond the support, and the one-dimensional slice
    CHECK(L(0.5, 3.0 * eq.r()) <= 0.0);
    for (double x : numerics::linspace(0.0, eq.r(), 100)) {
      REQUIRE(L.psi(x) - x / eq.r() <= 1e-12);
    }
    CHECK_THROWS_AS((void)L(1.5, 1.2), DomainError);
    CHECK_THROWS_AS((void)L(0.5), DomainError);
  }

  TEST_CASE("no-regret integrand beyond the support") {
    const auto eq = solve(3, 0.0, RegretMode::None);
    const LagrangianIntegrand L(eq);
    for (double x : {3.0, 4.5, 9.0}) {
      CHECK(L(x) == doctest::Approx(1.0 - x / 3.0));
    }
    for (double x : numerics::linspace(0.0, 3.0, 50)) {
      REQUIRE(std::abs(L(x)) < 1e-12);
    }
  }

  TEST_CASE("best response over feasible deviations") {
    for (auto mode : {RegretMode::None, RegretMode::Future, RegretMode::Past,
                      RegretMode::All}) {
      const auto eq = solve(3, 1.0, mode);
      const auto res = best_response_gap(eq, beta_deviation_family(1.0));
      CHECK(res.equilibrium_payoff == doctest::Approx(eq.value).epsilon(1e-8));
      CHECK(res.gap <= 1e-8);
      CHECK(res.payoffs.size() == 20);
      CHECK(deviation_payoff(eq, eq.cdf) == doctest::Approx(eq.value).epsilon(1e-8));
    }
    const auto eq = solve(2, 0.0, RegretMode::None);
    const std::vector<Deviation> bad{
        {"low mean", EquilibriumCdf(std::make_shared<ScaledBetaCdf>(2.0, 1.0, 3.0))}};
    CHECK_THROWS_AS(best_response_gap(eq, bad), ValidationError);
  }

  TEST_CASE("a wrong candidate fails both routes") {
    // the three-player law offered to a two-player contest
    auto eq = solve(2, 0.0, RegretMode::None);
    eq.closed = closed_form_for(3.0, 1.0);
    eq.cdf = eq.closed->cdf();
    eq.law = JointLaw::stopped_only(eq.cdf, 1.0);
    eq.value = expected_payoff(eq.spec, eq.law, eq.cdf);
    const auto cert = certify(eq);
    CHECK_FALSE(cert.passed);
    CHECK(cert.max_violation > 0.1);
    const auto res = best_response_gap(eq, beta_deviation_family(1.0));
    CHECK(res.gap > 1e-3);
  }

  TEST_CASE("past-regret system residuals and boundary values") {
    for (int n : {2, 3, 6}) {
      CAPTURE(n);
      const auto eq = solve(n, 1.5, RegretMode::Past);
      const auto res = system_residuals(*eq.past);
      CHECK(res.points == 200);
      CHECK(res.eq1 < 1e-6);
      CHECK(res.eq2 < 1e-6);
      CHECK(res.eq3 < 1e-6);
      CHECK(res.theta_identity < 1e-7);
      CHECK(res.phi_identity < 1e-6);
      for (const auto& b : boundary_checks(*eq.past)) {
        CAPTURE(b.name);
        // derivative entries come from one-sided differences
        const bool derivative = b.name.find('\'') != std::string::npos;
        CHECK(b.error() < (derivative ? 1e-5 : 1e-9));
      }
    }
  }
}
