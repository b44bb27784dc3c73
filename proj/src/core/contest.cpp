#include "gamble/contest.hpp"

#include <cmath>
#include <sstream>

#include "gamble/errors.hpp"

namespace gamble {

std::string_view to_string(RegretMode mode) {
  switch (mode) {
    case RegretMode::None:
      return "none";
    case RegretMode::Future:
      return "future";
    case RegretMode::Past:
      return "past";
    case RegretMode::All:
      return "all";
  }
  return "none";
}

RegretMode parse_regret_mode(std::string_view text) {
  if (text == "none") return RegretMode::None;
  if (text == "future") return RegretMode::Future;
  if (text == "past") return RegretMode::Past;
  if (text == "all") return RegretMode::All;
  throw ParameterError("unknown regret mode '" + std::string(text) +
                       "' (expected none, future, past or all)");
}

void ContestSpec::validate() const {
  std::ostringstream msg;
  if (n < 2) {
    msg << "player count n must be at least 2, got " << n;
  } else if (!(x0 > 0.0) || !std::isfinite(x0)) {
    msg << "starting value x0 must be positive and finite, got " << x0;
  } else if (!(K >= 0.0) || !std::isfinite(K)) {
    msg << "penalty K must be nonnegative and finite, got " << K;
  } else if (K2 && (!(*K2 >= 0.0) || *K2 > K)) {
    msg << "tie penalty K2 must lie in [0, K], got " << *K2;
  } else {
    return;
  }
  throw ParameterError(msg.str());
}

double ContestSpec::penalty() const {
  return mode == RegretMode::None ? 0.0 : K;
}

double ContestSpec::tie_penalty() const {
  if (mode == RegretMode::None) return 0.0;
  return K2 ? *K2 : 0.5 * K;
}

double ContestSpec::effective_players() const {
  return static_cast<double>(n) + K * static_cast<double>(n - 1);
}

}  // namespace gamble
