#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gamble/equilibrium.hpp"
#include "gamble/errors.hpp"
#include "gamble/payoff.hpp"
#include "gamble/simulation.hpp"
#include "oracles.hpp"

using namespace gamble;

namespace {

Equilibrium solve(int n, double K, RegretMode mode) {
  ContestSpec s;
  s.n = n;
  s.K = K;
  s.mode = mode;
  return solve_equilibrium(s);
}

PathConfig coarse(std::uint64_t seed = 7) {
  PathConfig c;
  c.dt = 1e-3;
  c.seed = seed;
  return c;
}

// |estimate - target| within z standard errors plus a discretization slack
bool within(double estimate, double se, double target, double slack,
            double z = 4.0) {
  return std::abs(estimate - target) <= z * se + slack;
}

}  // namespace

TEST_SUITE("simulation") {
  TEST_CASE("immediate stop") {
    auto rng = path_engine(1, 0, 0);
    const auto res =
        simulate_path_until(StoppingRule::immediate(), 1.0, coarse(), rng);
    CHECK(res.x_tau == 1.0);
    CHECK(res.m_past == 1.0);
    CHECK(res.steps == 0);
    CHECK(res.m_future >= 1.0);
    CHECK(res.m_all == res.m_future);
  }

  TEST_CASE("run to absorption") {
    auto cfg = coarse();
    cfg.max_steps = 200000;
    int absorbed = 0;
    for (std::uint64_t p = 0; p < 50; ++p) {
      auto rng = path_engine(3, 0, p);
      const auto res = simulate_path_until(StoppingRule::run_to_absorption(),
                                           1.0, cfg, rng);
      REQUIRE(res.m_past >= 1.0);
      if (!res.truncated) {
        REQUIRE(res.x_tau == 0.0);
        ++absorbed;
      }
    }
    CHECK(absorbed > 40);
  }

  TEST_CASE("exit from a level pair") {
    const auto rule = StoppingRule::hit_level_pair(0.5, 2.0);
    const int N = 20000;
    int top = 0;
    for (int p = 0; p < N; ++p) {
      auto rng = path_engine(11, 0, p);
      const auto res = simulate_path_until(rule, 1.0, coarse(), rng);
      REQUIRE((res.x_tau == 0.5 || res.x_tau == 2.0));
      if (res.x_tau == 2.0) ++top;
    }
    const double p = double(top) / N;
    CHECK(within(p, std::sqrt(2.0 / 9.0 / N), 1.0 / 3.0, 0.0));
    CHECK_THROWS_AS(StoppingRule::hit_level_pair(2.0, 1.0), ParameterError);
  }

  TEST_CASE("streams are reproducible") {
    const auto eq = solve(2, 0.0, RegretMode::None);
    const auto rule = StoppingRule::azema_yor(eq.cdf, 1.0);
    auto a = path_engine(5, 1, 9);
    auto b = path_engine(5, 1, 9);
    auto c = path_engine(5, 1, 10);
    const auto ra = simulate_path_until(rule, 1.0, coarse(), a);
    const auto rb = simulate_path_until(rule, 1.0, coarse(), b);
    const auto rc = simulate_path_until(rule, 1.0, coarse(), c);
    CHECK(ra.x_tau == rb.x_tau);
    CHECK(ra.m_past == rb.m_past);
    CHECK(ra.m_future == rb.m_future);
    CHECK(ra.steps == rb.steps);
    CHECK(ra.x_tau != rc.x_tau);
  }

  TEST_CASE("Azema-Yor embedding of the uniform law") {
    const auto eq = solve(2, 0.0, RegretMode::None);
    const auto rule = StoppingRule::azema_yor(eq.cdf, 1.0);
    // barycenter of U[0, 2] above x is (x + 2) / 2, so the barrier is 2m - 2
    for (double m : {1.0, 1.25, 1.7}) {
      CHECK(rule.barrier(m) == doctest::Approx(2.0 * m - 2.0).epsilon(1e-6));
    }
    ContestOptions opt;
    opt.paths = 20000;
    opt.path = coarse();
    const auto rep = run_contest(eq.spec, {rule, rule}, opt);
    for (const auto& p : rep.players) {
      CHECK(p.ks_distance < 0.02);
      CHECK(within(p.mean_stop, p.stop_se, 1.0, 0.01));
      CHECK(within(p.win_probability, p.win_se, 0.5, 0.0));
      CHECK(p.truncated == 0);
    }
  }

  TEST_CASE("Perkins embedding of the past-regret law") {
    const auto eq = solve(2, 1.0, RegretMode::Past);
    auto phi = [&](double m) { return eq.past->phi(m); };
    const auto rule = StoppingRule::perkins(eq.cdf, 1.0, phi);
    for (double s : {1.1, 1.3, 1.5}) {
      CHECK(rule.xi_survival(s) ==
            doctest::Approx(perkins_xi_survival(eq.cdf, phi, 1.0, s)).epsilon(1e-4));
    }
    CHECK(rule.xi_survival(0.5) == 1.0);
    CHECK(rule.xi_survival(eq.r()) == 0.0);
    CHECK_THROWS_AS((void)StoppingRule::immediate().xi_survival(1.2), DomainError);

    ContestOptions opt;
    opt.paths = 20000;
    opt.path = coarse();
    opt.support_law = eq.law;
    const auto rep = run_contest(eq.spec, {rule, rule}, opt);
    for (const auto& p : rep.players) {
      CHECK(p.ks_distance < 0.02);
      CHECK(p.off_support < 0.01);
      CHECK(within(p.mean_payoff, p.payoff_se, eq.value, 0.01));
    }
  }

  TEST_CASE("quantile oracle keeps the joint law") {
    const auto eq = solve(3, 1.0, RegretMode::Past);
    const auto rule = StoppingRule::quantile_oracle(eq.law);
    for (std::uint64_t p = 0; p < 200; ++p) {
      auto rng = path_engine(2, 0, p);
      const auto res = simulate_path_until(rule, 1.0, coarse(), rng);
      REQUIRE(res.m_past == doctest::Approx(eq.past->max_of(res.x_tau)));
      REQUIRE(eq.law.on_support(res.x_tau, res.m_past, 1e-9));
    }
  }

  TEST_CASE("a deviator who stops at once wins with probability G(x0)^{n-1}") {
    const auto eq = solve(3, 0.0, RegretMode::None);
    const auto ay = StoppingRule::azema_yor(eq.cdf, 1.0);
    ContestOptions opt;
    opt.paths = 20000;
    opt.path = coarse();
    const auto rep =
        run_contest(eq.spec, {StoppingRule::immediate(), ay, ay}, opt);
    const auto& dev = rep.players[0];
    CHECK(within(dev.win_probability, dev.win_se, 1.0 / 3.0, 0.01));
    CHECK(std::isnan(dev.ks_distance));
  }

  TEST_CASE("future and whole-path payoffs") {
    {
      const auto eq = solve(2, 1.0, RegretMode::Future);
      const auto ay = StoppingRule::azema_yor(eq.cdf, 1.0);
      ContestOptions opt;
      opt.paths = 20000;
      opt.path = coarse();
      const auto rep = run_contest(eq.spec, {ay, ay}, opt);
      for (const auto& p : rep.players) {
        CHECK(within(p.mean_payoff, p.payoff_se, 1.0 / 3.0, 0.01));
      }
    }
    {
      // whole-path value (1+K)/n - K * tail does not depend on the embedding
      const auto eq = solve(2, 1.0, RegretMode::All);
      const double value = 1.0 - oracle::power_hitting_tail(1.0, 2.0, 1.0);
      CHECK(eq.value == doctest::Approx(value).epsilon(1e-10));
      const auto ay = StoppingRule::azema_yor(eq.cdf, 1.0);
      ContestOptions opt;
      opt.paths = 20000;
      opt.path = coarse();
      const auto rep = run_contest(eq.spec, {ay, ay}, opt);
      for (const auto& p : rep.players) {
        CHECK(within(p.mean_payoff, p.payoff_se, value, 0.01));
      }
    }
  }

  TEST_CASE("future maximum by continuation") {
    auto cfg = coarse();
    cfg.simulate_future = true;
    cfg.future_cap = 4.0;
    const int N = 4000;
    int doubled = 0;
    for (int p = 0; p < N; ++p) {
      auto rng = path_engine(13, 0, p);
      const auto res =
          simulate_path_until(StoppingRule::immediate(), 1.0, cfg, rng);
      REQUIRE(res.m_future >= 1.0);
      if (res.m_future >= 2.0) ++doubled;
    }
    CHECK(within(double(doubled) / N, std::sqrt(0.25 / N), 0.5, 0.01));
  }

  TEST_CASE("truncation is counted") {
    const auto eq = solve(2, 0.0, RegretMode::None);
    const auto ay = StoppingRule::azema_yor(eq.cdf, 1.0);
    ContestOptions opt;
    opt.paths = 200;
    opt.path = coarse();
    opt.path.max_steps = 5;
    const auto rep = run_contest(eq.spec, {ay, ay}, opt);
    CHECK(rep.truncation_rate() > 0.5);
    CHECK(rep.players[0].truncated > 100);
  }

  TEST_CASE("Kolmogorov-Smirnov distance") {
    const auto eq = solve(2, 0.0, RegretMode::None);
    const int N = 1000;
    std::vector<double> xs;
    for (int i = N - 1; i >= 0; --i) xs.push_back(eq.cdf.quantile((i + 0.5) / N));
    CHECK(ks_distance(xs, eq.cdf) == doctest::Approx(0.5 / N).epsilon(1e-9));
    CHECK(std::is_sorted(xs.begin(), xs.end()));
  }

  TEST_CASE("bad options") {
    const auto eq = solve(2, 0.0, RegretMode::None);
    ContestOptions opt;
    CHECK_THROWS_AS(run_contest(eq.spec, {StoppingRule::immediate()}, opt),
                    ParameterError);
    opt.paths = 0;
    const auto im = StoppingRule::immediate();
    CHECK_THROWS_AS(run_contest(eq.spec, {im, im}, opt), ParameterError);
    PathConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg = {};
    cfg.future_cap = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
  }
}
