#pragma once

#include "gamble/contest.hpp"
#include "gamble/law.hpp"

namespace gamble {

/// Parameters of min{(x / (N x0))^{1/(N-1)}, 1}.
struct ClosedFormEquilibrium {
  double effective_n = 2.0;
  double right_endpoint = 2.0;
  double exponent = 1.0;

  [[nodiscard]] EquilibriumCdf cdf() const;
  /// Lagrange multiplier on the mean constraint, 1 / (N x0).
  [[nodiscard]] double lambda() const { return 1.0 / right_endpoint; }
  /// Equilibrium value 1/N of the penalty-free N-player contest.
  [[nodiscard]] double value() const { return 1.0 / effective_n; }
};

/// Closed form for an arbitrary real N >= 2 (N > 1 is enough numerically).
ClosedFormEquilibrium closed_form_for(double effective_n, double x0);

/// Plain contest: N = n. Requires mode none.
EquilibriumCdf no_regret_cdf(const ContestSpec& spec);
/// Future regret: N = n + K (n - 1). Requires mode future.
EquilibriumCdf future_regret_cdf(const ContestSpec& spec);
/// Whole-path regret: the plain-contest law for every K. Requires mode all.
EquilibriumCdf all_regret_cdf(const ContestSpec& spec);

/// The closed form matching spec.mode; throws for past mode with K > 0.
ClosedFormEquilibrium closed_form_parameters(const ContestSpec& spec);

}  // namespace gamble
