#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gamble/equilibrium.hpp"

namespace gamble {

/// Lagrange multipliers of the mean constraint (lambda, gamma) and, in past
/// mode, of the Doob constraint (eta = psi'' on (x0, r), 0 beyond r).
struct Multipliers {
  double lambda = 0.0;
  double gamma = 0.0;
  /// (y, eta(y)) on the certificate's y grid; empty outside past mode.
  std::vector<std::pair<double, double>> eta;
};

/// Pointwise Lagrangian of a candidate, after the multipliers are applied.
/// A candidate is certified when the integrand is <= 0 on the admissible
/// region and vanishes on the support of its own law.
class LagrangianIntegrand {
 public:
  /// claimed_endpoint overrides the right end of the support used to set
  /// the multipliers (the law itself is left untouched).
  explicit LagrangianIntegrand(const Equilibrium& candidate,
                               std::optional<double> claimed_endpoint = {});

  [[nodiscard]] RegretMode mode() const { return mode_; }
  [[nodiscard]] bool two_dimensional() const { return past_ != nullptr; }
  [[nodiscard]] double endpoint() const { return endpoint_; }
  [[nodiscard]] double lambda() const { return lambda_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  /// Value of the Lagrangian at the candidate.
  [[nodiscard]] double value() const { return value_; }

  /// One-dimensional form (none, future, all; past with K = 0).
  [[nodiscard]] double operator()(double x) const;
  /// Past mode: admissible region is y >= max(x, x0), x >= 0.
  [[nodiscard]] double operator()(double x, double y) const;

  /// psi extended to [0, inf) with psi = 1 beyond the support.
  [[nodiscard]] double psi(double x) const;
  [[nodiscard]] double psi_prime(double y) const;
  [[nodiscard]] double eta(double y) const;

  /// Past-mode form with psi(x), psi(y), psi'(y) supplied, for grids.
  [[nodiscard]] double past_value(double psi_x, double x, double y,
                                  double psi_y, double dpsi_y) const;

 private:
  RegretMode mode_;
  int n_;
  double x0_;
  double K_;
  EquilibriumCdf F_;
  std::shared_ptr<const PastRegretSolution> past_;
  double endpoint_;
  double lambda_ = 0.0;
  double gamma_ = 0.0;
  double value_ = 0.0;
};

/// Free-function form of the integrand; y is ignored outside past mode.
double lagrangian_integrand(const LagrangianIntegrand& L, double x,
                            double y = 0.0);

struct CertifyOptions {
  std::size_t x_points = 4000;
  std::size_t y_points = 400;
  /// Grid extends to this multiple of the support end.
  double extent = 3.0;
  double tolerance = 1e-8;
  double active_tolerance = 1e-6;
  std::optional<double> claimed_endpoint;
};

struct GridPoint {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

struct LagrangianCertificate {
  RegretMode mode = RegretMode::None;
  Multipliers multipliers;
  double endpoint = 0.0;
  double value = 0.0;
  std::size_t grid_size = 0;
  double max_violation = 0.0;
  GridPoint worst;
  double active_set_residual = 0.0;
  GridPoint worst_active;
  double mean_residual = 0.0;
  /// sup over 50 levels of |E[(X - z); M >= z]|; past mode only.
  double doob_residual = 0.0;
  bool passed = false;
  std::string failure;
};

LagrangianCertificate certify(const Equilibrium& candidate,
                              const CertifyOptions& options = {});

/// Residuals of the past-regret system on interior points of (x0, r),
/// derivatives by Ridders extrapolation of the interpolated maps.
struct SystemResiduals {
  std::size_t points = 0;
  double eq1 = 0.0;  ///< phi' psi' - (1+K) theta'
  double eq2 = 0.0;  ///< K psi' - (y - phi) psi''
  double eq3 = 0.0;  ///< (y-phi)/(n-1) theta' - (psi^{1/(n-1)} - 1) theta^{(n-2)/(n-1)} + theta
  /// theta from psi and its derivatives against J(1 - psi)^{n-1}.
  double theta_identity = 0.0;
  /// phi as y - K psi'/psi'' against the parametric phi.
  double phi_identity = 0.0;
};
SystemResiduals system_residuals(const PastRegretSolution& solution,
                                 std::size_t points = 200);

/// End values; each entry holds (computed, expected).
struct BoundaryCheck {
  std::string name;
  double computed;
  double expected;
  [[nodiscard]] double error() const;
};
std::vector<BoundaryCheck> boundary_checks(const PastRegretSolution& solution);

/// A feasible deviation: a marginal with mean x0.
struct Deviation {
  std::string name;
  EquilibriumCdf cdf;
};

/// Twenty scaled beta laws with mean x0, including a tight one near x0.
std::vector<Deviation> beta_deviation_family(double x0);

struct BestResponseResult {
  double equilibrium_payoff = 0.0;
  double gap = 0.0;  ///< max over deviations of payoff - equilibrium payoff
  std::string worst;
  std::vector<double> payoffs;
};

/// Payoff of a deviation law against equilibrium opponents. In past mode
/// the deviator uses the embedding with the smallest running maximum.
double deviation_payoff(const Equilibrium& eq, const EquilibriumCdf& dev);

/// Throws ValidationError when a deviation does not have mean x0.
BestResponseResult best_response_gap(const Equilibrium& eq,
                                     const std::vector<Deviation>& deviations);

}  // namespace gamble
