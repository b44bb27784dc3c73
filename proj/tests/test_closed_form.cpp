#include <doctest.h>

#include <cmath>

#include "gamble/closed_form.hpp"
#include "gamble/errors.hpp"
#include "gamble/numerics.hpp"
#include "oracles.hpp"

using namespace gamble;

namespace {
ContestSpec make(int n, double x0, double K, RegretMode mode) {
  ContestSpec s;
  s.n = n;
  s.x0 = x0;
  s.K = K;
  s.mode = mode;
  return s;
}
}  // namespace

TEST_SUITE("closed_form_equilibria") {
  TEST_CASE("no-regret law matches the power formula") {
    for (auto [n, x0] : {std::pair{2, 1.0}, {3, 1.0}, {5, 2.0}}) {
      const auto F = no_regret_cdf(make(n, x0, 0.0, RegretMode::None));
      CHECK(F.upper() == doctest::Approx(n * x0));
      for (double x : numerics::linspace(0.0, 1.2 * n * x0, 1000)) {
        REQUIRE(F.eval(x) ==
                doctest::Approx(oracle::power_cdf(x, n, x0)).epsilon(1e-15));
      }
      CHECK(F.mean() == doctest::Approx(x0).epsilon(1e-12));
      CHECK(F.model().CdfModel::mean() == doctest::Approx(x0).epsilon(1e-10));
    }
  }

  TEST_CASE("n = 2 is uniform on [0, 2 x0]") {
    const auto F = no_regret_cdf(make(2, 1.0, 0.0, RegretMode::None));
    CHECK(F.eval(1.0) == doctest::Approx(0.5));
    CHECK(F.density(0.3) == doctest::Approx(0.5));
    CHECK(F.quantile(0.25) == doctest::Approx(0.5));
  }

  TEST_CASE("future regret is the plain contest with N = n + K (n - 1)") {
    const auto F = future_regret_cdf(make(2, 1.0, 1.0, RegretMode::Future));
    const auto G = closed_form_for(3.0, 1.0).cdf();
    for (double x : numerics::linspace(0.0, 3.5, 500)) {
      REQUIRE(std::abs(F.eval(x) - G.eval(x)) <= 1e-12);
    }
    const auto p = closed_form_parameters(make(4, 1.5, 0.5, RegretMode::Future));
    CHECK(p.effective_n == doctest::Approx(5.5));
    CHECK(p.right_endpoint == doctest::Approx(5.5 * 1.5));
    CHECK(p.value() == doctest::Approx(1.0 / 5.5));
  }

  TEST_CASE("whole-path regret leaves the law unchanged") {
    for (double K : {0.5, 3.0, 10.0}) {
      const auto A = all_regret_cdf(make(3, 1.0, K, RegretMode::All));
      const auto N = no_regret_cdf(make(3, 1.0, 0.0, RegretMode::None));
      for (double x : numerics::linspace(0.0, 3.5, 500)) {
        REQUIRE(A.eval(x) == N.eval(x));
      }
    }
  }

  TEST_CASE("mode mismatches are rejected") {
    CHECK_THROWS_AS(no_regret_cdf(make(2, 1.0, 0.0, RegretMode::Past)),
                    ParameterError);
    CHECK_THROWS_AS(future_regret_cdf(make(2, 1.0, 1.0, RegretMode::None)),
                    ParameterError);
    CHECK_THROWS_AS(closed_form_parameters(make(2, 1.0, 1.0, RegretMode::Past)),
                    ParameterError);
    CHECK_NOTHROW(closed_form_parameters(make(2, 1.0, 0.0, RegretMode::Past)));
  }

  TEST_CASE("quantile inverts the cdf") {
    const auto F = no_regret_cdf(make(4, 1.0, 0.0, RegretMode::None));
    for (double x : numerics::linspace(0.01, 3.99, 200)) {
      REQUIRE(F.quantile(F.eval(x)) == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK(F.quantile(0.0) == 0.0);
    CHECK(F.quantile(1.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS((void)F.quantile(1.5), DomainError);
  }
}
