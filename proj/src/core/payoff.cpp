#include "gamble/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gamble/errors.hpp"
#include "gamble/numerics.hpp"

namespace gamble {

namespace {

void check_value(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be nonnegative and finite");
  }
}

double power_nm1(double v, int n) { return std::pow(v, n - 1); }

}  // namespace

double realized_payoff(const ContestSpec& spec, double own_stop,
                       double own_max, std::span<const double> opponents) {
  check_value(own_stop, "own_stop");
  check_value(own_max, "own_max");
  if (own_max < own_stop) {
    throw DomainError("own_max must be at least own_stop");
  }
  if (opponents.empty()) throw DomainError("need at least one opponent");
  double best = 0.0;
  for (double o : opponents) {
    check_value(o, "opponent stop");
    best = std::max(best, o);
  }
  if (own_stop > best) return 1.0;
  if (own_stop == best) {
    const auto ties = std::count(opponents.begin(), opponents.end(), best);
    return 1.0 / static_cast<double>(ties + 1);
  }
  if (spec.mode == RegretMode::None) return 0.0;
  if (best < own_max) return -spec.penalty();
  if (best == own_max) return -spec.tie_penalty();
  return 0.0;
}

double realized_payoff(const ContestSpec& spec, const PayoffOutcome& outcome) {
  return realized_payoff(spec, outcome.own_stop, outcome.own_max,
                         outcome.opponents_stop);
}

double hitting_tail(const EquilibriumCdf& F, int n, double x) {
  if (x < 0.0) throw DomainError("hitting_tail needs x >= 0");
  if (x == 0.0) return 0.0;
  const double b = F.upper();
  if (x >= b) return 1.0;
  // y = e^s turns the 1/y^2 weight into e^{-s}
  const double inner = numerics::integrate(
      [&](double s) {
        const double y = std::exp(s);
        return power_nm1(F.eval(y), n) / y;
      },
      std::log(x), std::log(b), 1e-13);
  return x * (inner + 1.0 / b);
}

double expected_payoff(const ContestSpec& spec, const JointLaw& own_law,
                       const EquilibriumCdf& F) {
  spec.validate();
  const auto& G = own_law.marginal();
  const double total = G.eval(G.upper());
  if (std::abs(total - 1.0) > 1e-9 || !std::isfinite(G.quantile(1.0))) {
    throw ValidationError("joint law is not normalized");
  }
  const int n = spec.n;
  const double K = spec.penalty();

  // quantile-space cut points where the integrand has kinks
  std::vector<double> cuts;
  for (double c : G.breakpoints()) cuts.push_back(G.eval(c));
  for (double c : F.breakpoints()) cuts.push_back(G.eval(c));
  cuts.push_back(G.eval(F.upper()));
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto over_p = [&](auto&& h) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      sum += numerics::integrate([&](double p) { return h(G.quantile(p)); },
                                 cuts[i], cuts[i + 1], 1e-12);
    }
    return sum;
  };

  const double win = over_p([&](double x) { return power_nm1(F.eval(x), n); });
  if (K == 0.0) return win;

  switch (spec.mode) {
    case RegretMode::Future: {
      const double regret =
          over_p([&](double x) { return hitting_tail(F, n, x); });
      return (1.0 + K) * win - K * regret;
    }
    case RegretMode::Past: {
      if (own_law.mode() != RegretMode::Past &&
          own_law.mode() != RegretMode::None) {
        throw ValidationError("past-mode payoff needs a deterministic maximum");
      }
      const double regret = over_p([&](double x) {
        return power_nm1(F.eval(std::max(own_law.max_of(x), spec.x0)), n);
      });
      return (1.0 + K) * win - K * regret;
    }
    case RegretMode::All:
      return (1.0 + K) * win - K * hitting_tail(F, n, spec.x0);
    case RegretMode::None:
      break;
  }
  return win;
}

}  // namespace gamble
