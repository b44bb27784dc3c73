#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gamble {

/// Which running maximum the regret penalty is measured against.
enum class RegretMode {
  None,    ///< plain contest, no penalty
  Future,  ///< maximum after the stopping time (stopping too soon)
  Past,    ///< maximum before the stopping time (stopping too late)
  All,     ///< maximum over the whole path up to absorption
};

std::string_view to_string(RegretMode mode);
/// Accepts "none", "future", "past", "all".
RegretMode parse_regret_mode(std::string_view text);

/// Parameters of the symmetric n-player contest. All players start from x0.
struct ContestSpec {
  int n = 2;
  double x0 = 1.0;
  double K = 0.0;
  /// Penalty when the opponents' best equals the own maximum exactly.
  /// Unset means K / 2.
  std::optional<double> K2;
  RegretMode mode = RegretMode::None;

  /// Throws ParameterError unless n >= 2, x0 > 0, K >= 0 and 0 <= K2 <= K.
  void validate() const;

  /// K as seen by the payoff: zero in the plain contest.
  [[nodiscard]] double penalty() const;
  [[nodiscard]] double tie_penalty() const;

  /// Number of players in the penalty-free contest that is equivalent to
  /// the future-regret contest: n + K (n - 1).
  [[nodiscard]] double effective_players() const;
};

/// One realized outcome seen from a single player.
struct PayoffOutcome {
  double own_stop = 0.0;
  /// The mode-dependent maximum M (past, future or whole-path).
  double own_max = 0.0;
  std::vector<double> opponents_stop;
};

}  // namespace gamble
