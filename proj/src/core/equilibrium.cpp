#include "gamble/equilibrium.hpp"

#include <limits>

#include "gamble/payoff.hpp"

namespace gamble {

double Equilibrium::max_of(double x) const {
  if (spec.mode != RegretMode::Past) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return law.max_of(x);
}

Equilibrium solve_equilibrium(const ContestSpec& spec,
                              const PastSolverOptions& options) {
  spec.validate();
  if (spec.mode == RegretMode::Past && spec.K > 0.0) {
    auto sol = PastRegretSolution::solve(spec, options);
    auto cdf = sol->equilibrium_cdf();
    auto law = sol->joint_law();
    return {spec, cdf, law, sol, std::nullopt, sol->value()};
  }
  const ClosedFormEquilibrium cf = closed_form_parameters(spec);
  EquilibriumCdf cdf = cf.cdf();
  const double x0 = spec.x0;
  switch (spec.mode) {
    case RegretMode::None:
      return {spec, cdf, JointLaw::stopped_only(cdf, x0), nullptr, cf,
              cf.value()};
    case RegretMode::Future:
      return {spec, cdf, JointLaw::future_kernel(cdf, x0), nullptr, cf,
              cf.value()};
    case RegretMode::Past: {
      // K = 0: plain contest; the minimal-maximum embedding gives the map
      auto law = JointLaw::past_map(
          cdf, x0, [cdf, x0](double x) { return minimal_max(cdf, x0, x); },
          [cdf, x0](double m) { return minimal_lower(cdf, x0, m); });
      return {spec, cdf, law, nullptr, cf, cf.value()};
    }
    case RegretMode::All: {
      auto law = JointLaw::whole_path(cdf, x0);
      // (1+K)/n minus K times E[F(M)^{n-1}] for the whole-path maximum
      const double K = spec.K;
      const double value =
          (1.0 + K) * cf.value() - K * hitting_tail(cdf, spec.n, x0);
      return {spec, cdf, law, nullptr, cf, value};
    }
  }
  return {spec, cdf, JointLaw::stopped_only(cdf, x0), nullptr, cf,
          cf.value()};
}

}  // namespace gamble
