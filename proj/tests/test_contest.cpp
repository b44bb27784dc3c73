#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gamble/closed_form.hpp"
#include "gamble/contest.hpp"
#include "gamble/errors.hpp"
#include "gamble/law.hpp"
#include "gamble/payoff.hpp"
#include "gamble/scale.hpp"
#include "oracles.hpp"

using namespace gamble;

TEST_SUITE("contest_model") {
  TEST_CASE("spec validation") {
    ContestSpec s;
    CHECK_NOTHROW(s.validate());
    s.n = 1;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s = {};
    s.x0 = 0.0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s = {};
    s.K = -0.1;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s = {};
    s.K = 1.0;
    s.K2 = 1.5;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s.K2 = -0.5;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s.K2 = 1.0;
    CHECK_NOTHROW(s.validate());
  }

  TEST_CASE("penalties and effective player count") {
    ContestSpec s;
    s.n = 3;
    s.K = 2.0;
    s.mode = RegretMode::None;
    CHECK(s.penalty() == 0.0);
    CHECK(s.tie_penalty() == 0.0);
    s.mode = RegretMode::Past;
    CHECK(s.penalty() == 2.0);
    CHECK(s.tie_penalty() == 1.0);
    s.K2 = 0.5;
    CHECK(s.tie_penalty() == 0.5);
    CHECK(s.effective_players() == doctest::Approx(3.0 + 2.0 * 2.0));
  }

  TEST_CASE("mode names round trip") {
    for (auto m : {RegretMode::None, RegretMode::Future, RegretMode::Past,
                   RegretMode::All}) {
      CHECK(parse_regret_mode(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_regret_mode("sometimes"), ParameterError);
  }

  TEST_CASE("realized payoff agrees with the definition on random outcomes") {
    std::mt19937_64 rng(11);
    // values on a coarse lattice so that ties happen often
    std::uniform_int_distribution<int> level(0, 6);
    for (auto mode : {RegretMode::None, RegretMode::Future, RegretMode::Past,
                      RegretMode::All}) {
      ContestSpec s;
      s.n = 4;
      s.K = 1.5;
      s.K2 = 0.4;
      s.mode = mode;
      for (int t = 0; t < 2000; ++t) {
        std::vector<double> opp(3);
        for (auto& v : opp) v = 0.5 * level(rng);
        const double x = 0.5 * level(rng);
        const double m = std::max(x, 0.5 * level(rng));
        const double expected =
            oracle::payoff(mode, s.penalty(), s.tie_penalty(), x, m, opp);
        REQUIRE(realized_payoff(s, x, m, opp) == doctest::Approx(expected));
        REQUIRE(realized_payoff(s, PayoffOutcome{x, m, opp}) ==
                doctest::Approx(expected));
      }
    }
  }

  TEST_CASE("realized payoff examples") {
    ContestSpec s;
    s.n = 3;
    s.K = 2.0;
    s.mode = RegretMode::Past;
    const std::vector<double> opp{1.0, 1.0};
    CHECK(realized_payoff(s, 1.0, 1.0, opp) == doctest::Approx(1.0 / 3.0));
    CHECK(realized_payoff(s, 0.5, 2.0, opp) == doctest::Approx(-2.0));
    CHECK(realized_payoff(s, 0.5, 1.0, opp) == doctest::Approx(-1.0));
    CHECK(realized_payoff(s, 0.5, 0.8, opp) == 0.0);
    const std::vector<double> lower{0.3, 0.7};
    CHECK(realized_payoff(s, 1.2, 1.2, lower) == 1.0);
  }

  TEST_CASE("realized payoff rejects bad outcomes") {
    ContestSpec s;
    s.mode = RegretMode::Future;
    s.K = 1.0;
    const std::vector<double> opp{1.0};
    const std::vector<double> none;
    CHECK_THROWS_AS(realized_payoff(s, -1.0, 1.0, opp), DomainError);
    CHECK_THROWS_AS(realized_payoff(s, 1.0, 0.5, opp), DomainError);
    CHECK_THROWS_AS(realized_payoff(s, 1.0, 1.0, none), DomainError);
    const std::vector<double> neg{-0.1};
    CHECK_THROWS_AS(realized_payoff(s, 1.0, 1.0, neg), DomainError);
  }

  TEST_CASE("hitting tail against its closed form") {
    for (double N : {2.0, 3.0, 5.5}) {
      for (int n : {2, 3}) {
        const auto cf = closed_form_for(N, 1.0);
        const EquilibriumCdf F = cf.cdf();
        const double a = (n - 1) / (N - 1.0);
        for (double x : {0.05, 0.5, 1.0, 2.0, N * 0.999, N + 1.0}) {
          CHECK(hitting_tail(F, n, x) ==
                doctest::Approx(oracle::power_hitting_tail(x, N, a))
                    .epsilon(1e-10));
        }
      }
    }
  }

  TEST_CASE("expected payoff: any mean-x0 law on [0, n x0] earns 1/n") {
    // F^{n-1} is linear below n x0, so the payoff is E[X] / (n x0)
    for (int n : {2, 3, 4}) {
      ContestSpec s;
      s.n = n;
      const EquilibriumCdf F = no_regret_cdf(s);
      for (auto [a, b] : {std::pair{2.0, 2.0 * n - 2.0}, {1.0, 1.0 * n - 1.0},
                          {5.0, 5.0 * n - 5.0}}) {
        // support x0 (a+b)/a = n x0 exactly
        const EquilibriumCdf G(std::make_shared<ScaledBetaCdf>(
            ScaledBetaCdf::with_mean(1.0, a, b)));
        const double v =
            expected_payoff(s, JointLaw::stopped_only(G, 1.0), F);
        CHECK(v == doctest::Approx(1.0 / n).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("expected payoff at the closed-form equilibria") {
    ContestSpec s;
    s.n = 2;
    s.K = 1.0;
    s.mode = RegretMode::Future;
    const EquilibriumCdf F = future_regret_cdf(s);
    CHECK(expected_payoff(s, JointLaw::future_kernel(F, 1.0), F) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));

    s.n = 3;
    s.K = 5.0;
    s.mode = RegretMode::All;
    const EquilibriumCdf A = all_regret_cdf(s);
    const double tail = oracle::power_hitting_tail(1.0, 3.0, 1.0);
    CHECK(expected_payoff(s, JointLaw::whole_path(A, 1.0), A) ==
          doctest::Approx(6.0 / 3.0 - 5.0 * tail).epsilon(1e-10));
  }

  TEST_CASE("scale functions") {
    const auto id = ScaleFunction::identity();
    CHECK(id.forward(2.5) == 2.5);

    const auto geo = ScaleFunction::exponential_bm(1.0, 0.25);  // kappa 1/2
    CHECK(geo.exponent() == doctest::Approx(0.5));
    CHECK(geo.forward(4.0) == doctest::Approx(2.0));
    CHECK(geo.forward(0.0) == 0.0);
    for (double y : {0.1, 1.0, 7.0}) {
      CHECK(geo.inverse(geo.forward(y)) == doctest::Approx(y).epsilon(1e-14));
    }
    CHECK_THROWS_AS(ScaleFunction::exponential_bm(1.0, 0.5), ParameterError);

    const auto drift = ScaleFunction::drifting_bm(2.0, -1.0);
    for (double y : {-3.0, 0.0, 2.0}) {
      CHECK(drift.inverse(drift.forward(y)) == doctest::Approx(y));
    }
    CHECK(drift.forward(1.0) > drift.forward(0.0));
    CHECK_THROWS_AS(ScaleFunction::drifting_bm(1.0, 0.2), ParameterError);

    std::vector<double> ys, ss;
    for (int i = 0; i <= 40; ++i) {
      ys.push_back(0.1 * i);
      ss.push_back(std::pow(0.1 * i, 1.5));
    }
    const auto custom = ScaleFunction::custom(ys, ss);
    for (double y : {0.25, 1.3, 3.9}) {
      CHECK(custom.inverse(custom.forward(y)) ==
            doctest::Approx(y).epsilon(1e-10));
      CHECK(custom.forward(y) == doctest::Approx(std::pow(y, 1.5)).epsilon(1e-3));
    }
    CHECK_THROWS_AS(ScaleFunction::custom({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}),
                    ValidationError);
    CHECK_THROWS_AS(ScaleFunction::custom({0.0, 1.0}, {0.5, 1.0}),
                    ValidationError);
  }

  TEST_CASE("stopped diffusion law through the scale function") {
    ContestSpec s;
    s.n = 2;
    s.x0 = 2.0;  // s(4) = 2 for kappa = 1/2
    const EquilibriumCdf F = no_regret_cdf(s);
    const auto geo = ScaleFunction::exponential_bm(1.0, 0.25);
    CHECK(diffusion_cdf(F, geo, 4.0) == doctest::Approx(0.5));
    for (double p : {0.1, 0.5, 0.9}) {
      CHECK(diffusion_cdf(F, geo, diffusion_quantile(F, geo, p)) ==
            doctest::Approx(p).epsilon(1e-12));
    }
  }
}
