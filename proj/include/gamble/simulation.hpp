#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gamble/contest.hpp"
#include "gamble/law.hpp"

namespace gamble {

enum class IncrementScheme { Gaussian, RandomWalk };

struct PathConfig {
  double dt = 1e-4;
  std::uint64_t max_steps = 10'000'000;
  std::uint64_t seed = 1;
  IncrementScheme scheme = IncrementScheme::Gaussian;
  /// Brownian-bridge corrections for the running maximum and for barrier
  /// crossings between grid points.
  bool bridge = true;
  /// Keep simulating after the stop to get the future maximum. By default
  /// it is drawn exactly as X_tau / U, which is its law for a Brownian
  /// motion absorbed at zero.
  bool simulate_future = false;
  /// In continuation mode the path is followed up to this multiple of the
  /// stopped value (or x0) and the rest of the maximum is drawn exactly.
  double future_cap = 50.0;

  void validate() const;
};

/// Engine used for one (seed, player, path) stream.
using PathEngine = std::mt19937_64;
PathEngine path_engine(std::uint64_t seed, std::uint64_t player,
                       std::uint64_t path);

/// Nondecreasing function of the running maximum on [x0, top], tabulated
/// on a grid that is quadratically refined towards x0.
class BarrierTable {
 public:
  BarrierTable() = default;
  BarrierTable(const std::function<double(double)>& f, double x0, double top,
               std::size_t points);
  [[nodiscard]] double operator()(double m) const;
  [[nodiscard]] bool empty() const { return values_.empty(); }

 private:
  double x0_ = 0.0;
  double top_ = 0.0;
  std::vector<double> values_;
};

/// A stopping rule of the form: stop when X first reaches the upper level
/// xi (possibly random) or falls to barrier(M); absorption at zero always
/// stops.
class StoppingRule {
 public:
  enum class Kind {
    Immediate,
    RunToAbsorption,
    HitLevelPair,
    AzemaYor,
    Perkins,
    QuantileOracle
  };

  static StoppingRule immediate();
  static StoppingRule run_to_absorption();
  /// Exit time of (lower, upper).
  static StoppingRule hit_level_pair(double lower, double upper);
  /// Stop once X <= b^{-1}(M), b(x) = E[X | X >= x] under the target.
  static StoppingRule azema_yor(const EquilibriumCdf& target, double x0,
                                std::size_t table_points = 8193);
  /// tau_xi ^ tau_phi: stop at the random level xi or when X falls to
  /// phi(M). phi maps [x0, upper] onto [0, x0].
  static StoppingRule perkins(const EquilibriumCdf& target, double x0,
                              const std::function<double(double)>& phi,
                              std::size_t table_points = 8193);
  /// Perkins rule with the minimal-maximum boundary of an arbitrary law.
  static StoppingRule perkins(const EquilibriumCdf& target, double x0,
                              std::size_t table_points = 8193);
  /// Draws (X, M) straight from the law; no path for the stopping phase.
  static StoppingRule quantile_oracle(JointLaw law);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string name() const;
  /// Target law where the rule embeds one.
  [[nodiscard]] const std::optional<EquilibriumCdf>& target() const {
    return target_;
  }

  /// Upper stopping level for a new path (+inf when there is none).
  [[nodiscard]] double draw_level(PathEngine& rng) const;
  [[nodiscard]] double barrier(double m) const;
  [[nodiscard]] bool has_barrier() const { return !barrier_.empty(); }
  [[nodiscard]] const JointLaw& oracle() const { return *oracle_; }

  /// Perkins rule: P(xi >= s) from the tabulated hazard.
  [[nodiscard]] double xi_survival(double s) const;

 private:
  Kind kind_ = Kind::Immediate;
  double x0_ = 1.0;
  double lower_ = 0.0;
  double level_ = 0.0;
  BarrierTable barrier_;
  // Perkins: cumulative hazard at increasing levels
  std::vector<double> xi_levels_;
  std::vector<double> xi_hazard_;
  std::optional<EquilibriumCdf> target_;
  std::shared_ptr<const JointLaw> oracle_;
};

struct PathResult {
  double x_tau = 0.0;
  double m_past = 0.0;
  double m_future = 0.0;
  double m_all = 0.0;
  std::uint64_t steps = 0;
  bool truncated = false;
};

/// One path from x0 under the rule, with all three maxima.
PathResult simulate_path_until(const StoppingRule& rule, double x0,
                               const PathConfig& config, PathEngine& rng);

/// Per-player summary of a simulated contest.
struct PlayerStats {
  std::string rule;
  double win_probability = 0.0;  ///< ties count 1/k
  double win_se = 0.0;
  double mean_payoff = 0.0;
  double payoff_se = 0.0;
  double mean_stop = 0.0;
  double stop_se = 0.0;
  /// sup |F_emp - G| against the rule's target; NaN without a target.
  double ks_distance = 0.0;
  /// Past mode: fraction of (X, M) pairs off the support set.
  double off_support = 0.0;
  std::uint64_t truncated = 0;
  double mean_steps = 0.0;
};

struct SimulationReport {
  ContestSpec spec;
  PathConfig config;
  std::uint64_t paths = 0;
  std::vector<PlayerStats> players;
  /// First player's samples, when requested.
  std::vector<PathResult> samples;
  [[nodiscard]] double truncation_rate() const;
};

struct ContestOptions {
  std::uint64_t paths = 10000;
  PathConfig path;
  /// Support set used for the off-support rate (past mode).
  std::optional<JointLaw> support_law;
  /// Tolerance for the support test, as a multiple of the law's endpoint.
  double support_eps = 0.01;
  std::size_t keep_samples = 0;
};

/// Independent paths per player per round; payoff from realized_payoff with
/// the maximum that matches spec.mode.
SimulationReport run_contest(const ContestSpec& spec,
                             const std::vector<StoppingRule>& rules,
                             const ContestOptions& options);

/// Kolmogorov-Smirnov distance of samples (sorted in place) to G.
double ks_distance(std::vector<double>& samples, const EquilibriumCdf& g);

}  // namespace gamble
