#pragma once

#include <memory>
#include <optional>

#include "gamble/closed_form.hpp"
#include "gamble/contest.hpp"
#include "gamble/law.hpp"
#include "gamble/past_regret.hpp"

namespace gamble {

/// A solved contest: marginal law, joint law of (X, M) and the value.
struct Equilibrium {
  ContestSpec spec;
  EquilibriumCdf cdf;
  JointLaw law;
  /// Set for past mode with K > 0.
  std::shared_ptr<const PastRegretSolution> past;
  /// Set for every other case.
  std::optional<ClosedFormEquilibrium> closed;
  /// Expected payoff of each player at equilibrium.
  double value = 0.0;

  [[nodiscard]] double r() const { return cdf.upper(); }
  /// M as a function of X where it is deterministic, NaN otherwise.
  [[nodiscard]] double max_of(double x) const;
};

Equilibrium solve_equilibrium(const ContestSpec& spec,
                              const PastSolverOptions& options = {});

}  // namespace gamble
