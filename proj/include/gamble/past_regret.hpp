#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "gamble/contest.hpp"
#include "gamble/law.hpp"

namespace gamble {

struct PastSolverOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  /// Largest step in the trajectory parameter t = u + J.
  double max_step = 1.0 / 8192;
  /// Relative width at which the event bracket stops shrinking.
  double event_tol = 1e-15;
  std::size_t max_steps = 2'000'000;
};

/// Solution of the J equation
///   J'(u) = (J + 1 - (1-u)^{1/(n-1)}) / ((K+1)(1 - u - J^{n-1})),  J(0) = 0,
/// carried in the parameter t = u + J, which keeps the system regular at
/// the blow-up point u*. Along with (u, J) the trajectory integrates
///   A = \int_0^u H(1-v) dv,  B = \int_0^u e^A dv,
/// and the integrals needed for the lower branch of the CDF and its
/// antiderivative, so every quantity of the equilibrium is a function of t.
class JTrajectory {
 public:
  static constexpr std::size_t kDim = 7;
  using State = std::array<double, kDim>;
  enum Index : std::size_t { U = 0, J = 1, A = 2, B = 3, L = 4, Q = 5, P = 6 };

  JTrajectory(int n, double K, const PastSolverOptions& options = {});

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double K() const { return K_; }

  /// Right-hand side d(state)/dt.
  [[nodiscard]] State rate(const State& s) const;
  /// E = 1 - u - J^{n-1}; vanishes at t*.
  [[nodiscard]] double gap(const State& s) const;

  /// Hermite interpolation on the stored nodes, t clamped to [0, t*].
  [[nodiscard]] State state(double t) const;
  [[nodiscard]] double t_star() const { return t_.back(); }
  [[nodiscard]] const State& end() const { return y_.back(); }
  [[nodiscard]] double u_star() const { return end()[U]; }
  /// Width in u of the final event bracket.
  [[nodiscard]] double bracket_width() const { return bracket_u_; }

  /// t at which component c reaches value v (c must be increasing in t).
  [[nodiscard]] double t_where(Index c, double v) const;
  [[nodiscard]] double J_of_u(double u) const;

  [[nodiscard]] std::size_t size() const { return t_.size(); }
  [[nodiscard]] const std::vector<double>& times() const { return t_; }
  [[nodiscard]] const std::vector<State>& states() const { return y_; }

  /// (u, J(u)) at every node.
  [[nodiscard]] std::vector<std::pair<double, double>> J_table() const;

 private:
  std::size_t cell_of_t(double t) const;
  double component(double t, std::size_t i, std::size_t c) const;

  int n_;
  double K_;
  double p_;
  std::vector<double> t_;
  std::vector<State> y_;
  std::vector<State> dy_;
  double bracket_u_ = 0.0;
};

/// Same as constructing a JTrajectory; validates the spec first.
JTrajectory integrate_J(const ContestSpec& spec,
                        const PastSolverOptions& options = {});

struct PsiRow {
  double z;
  double Psi;
  double Psi_prime;
};

/// The past-regret equilibrium, with every map on [0, r] as a function of
/// the trajectory parameter.
class PastRegretSolution
    : public std::enable_shared_from_this<PastRegretSolution> {
 public:
  /// Requires mode past and K > 0 (K = 0 is the plain contest).
  static std::shared_ptr<const PastRegretSolution> solve(
      const ContestSpec& spec, const PastSolverOptions& options = {});

  PastRegretSolution(const ContestSpec& spec, JTrajectory trajectory);

  [[nodiscard]] const ContestSpec& spec() const { return spec_; }
  [[nodiscard]] const JTrajectory& trajectory() const { return traj_; }
  [[nodiscard]] double r() const { return r_; }
  [[nodiscard]] double u_star() const { return traj_.u_star(); }
  [[nodiscard]] double z_star() const { return 1.0 - traj_.u_star(); }
  /// \int_{z*}^1 exp(\int_w^1 H) dw.
  [[nodiscard]] double I() const { return traj_.end()[JTrajectory::B]; }
  /// psi(x0), the equilibrium value.
  [[nodiscard]] double value() const { return z_star(); }
  /// G(x0): where the two branches of the CDF meet.
  [[nodiscard]] double cdf_at_x0() const { return traj_.end()[JTrajectory::J]; }

  // Branch coordinates at parameter t.
  [[nodiscard]] double upper_at(const JTrajectory::State& s) const;
  [[nodiscard]] double lower_at(const JTrajectory::State& s) const;
  /// t with upper_at = y, y in [x0, r].
  [[nodiscard]] double t_upper(double y) const;
  /// t with lower_at = x, x in [0, x0].
  [[nodiscard]] double t_lower(double x) const;

  /// K / ((K+1)(z - J(1-z)^{n-1})) on (z*, 1].
  [[nodiscard]] double H(double z) const;
  [[nodiscard]] double Psi(double z) const;
  [[nodiscard]] double Psi_prime(double z) const;

  // Maps on [x0, r].
  [[nodiscard]] double psi(double y) const;
  [[nodiscard]] double psi_prime(double y) const;
  [[nodiscard]] double psi_second(double y) const;
  [[nodiscard]] double phi(double y) const;
  [[nodiscard]] double theta(double y) const;
  /// Inverse of phi on [0, x0].
  [[nodiscard]] double phi_inverse(double x) const;
  /// psi on [x0, r], theta(phi^{-1}(x)) below x0, 1 above r.
  [[nodiscard]] double psi_extended(double x) const;

  [[nodiscard]] double cdf(double x) const;
  /// Right density; +infinity at 0 when n >= 3.
  [[nodiscard]] double density(double x) const;
  [[nodiscard]] double quantile(double p) const;
  [[nodiscard]] double integrated_cdf(double x) const;
  [[nodiscard]] double mean() const;
  /// M as a function of the stopped value.
  [[nodiscard]] double max_of(double x) const;

  [[nodiscard]] std::vector<PsiRow> Psi_table() const;

  [[nodiscard]] EquilibriumCdf equilibrium_cdf() const;
  [[nodiscard]] JointLaw joint_law() const;

 private:
  double psi_at(const JTrajectory::State& s) const;

  ContestSpec spec_;
  JTrajectory traj_;
  double r_ = 0.0;
  std::vector<double> x_up_;  // at nodes, decreasing
  std::vector<double> x_lo_;  // at nodes, increasing
};

/// H at z for a built solution; DomainError when z <= z*.
double compute_H(const PastRegretSolution& solution, double z);

struct RAndPsi {
  double r;
  double I;
  std::vector<PsiRow> Psi_table;
};
RAndPsi compute_r_and_Psi(const PastRegretSolution& solution);

/// Marginal CDF and joint law of (X, M).
std::pair<EquilibriumCdf, JointLaw> build_equilibrium(
    const PastRegretSolution& solution);

/// Closed form of the two-player contest.
struct TwoPlayerOracle {
  double K;
  double x0;
  double r;
  /// Residual of the implicit relation between y and phibar = y - phi(y).
  [[nodiscard]] double residual(double y, double phibar) const;
  /// Root phibar of residual(y, .) on [0, r].
  [[nodiscard]] double phibar(double y) const;
};
TwoPlayerOracle two_player_oracle(double K, double x0);

}  // namespace gamble
