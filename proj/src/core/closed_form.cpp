#include "gamble/closed_form.hpp"

#include <memory>

#include "gamble/errors.hpp"

namespace gamble {

namespace {

void require_mode(const ContestSpec& spec, RegretMode mode) {
  spec.validate();
  if (spec.mode != mode) {
    throw ParameterError("closed form requested for mode '" +
                         std::string(to_string(mode)) + "' but spec has '" +
                         std::string(to_string(spec.mode)) + "'");
  }
}

}  // namespace

EquilibriumCdf ClosedFormEquilibrium::cdf() const {
  return EquilibriumCdf(std::make_shared<PowerCdf>(right_endpoint, exponent));
}

ClosedFormEquilibrium closed_form_for(double effective_n, double x0) {
  if (!(effective_n > 1.0) || !(x0 > 0.0)) {
    throw ParameterError("closed form needs N > 1 and x0 > 0");
  }
  return {effective_n, effective_n * x0, 1.0 / (effective_n - 1.0)};
}

EquilibriumCdf no_regret_cdf(const ContestSpec& spec) {
  require_mode(spec, RegretMode::None);
  return closed_form_for(spec.n, spec.x0).cdf();
}

EquilibriumCdf future_regret_cdf(const ContestSpec& spec) {
  require_mode(spec, RegretMode::Future);
  return closed_form_for(spec.effective_players(), spec.x0).cdf();
}

EquilibriumCdf all_regret_cdf(const ContestSpec& spec) {
  require_mode(spec, RegretMode::All);
  return closed_form_for(spec.n, spec.x0).cdf();
}

ClosedFormEquilibrium closed_form_parameters(const ContestSpec& spec) {
  spec.validate();
  switch (spec.mode) {
    case RegretMode::Future:
      return closed_form_for(spec.effective_players(), spec.x0);
    case RegretMode::Past:
      if (spec.K > 0.0) {
        throw ParameterError("past regret with K > 0 has no closed form");
      }
      [[fallthrough]];
    default:
      return closed_form_for(spec.n, spec.x0);
  }
}

}  // namespace gamble
