#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "gamble/contest.hpp"

namespace gamble {

/// Atom-free distribution on [0, upper()] for stopped values.
class CdfModel {
 public:
  virtual ~CdfModel() = default;

  [[nodiscard]] virtual double cdf(double x) const = 0;
  /// Right density; +infinity where it is unbounded (typically x = 0).
  [[nodiscard]] virtual double density(double x) const = 0;
  [[nodiscard]] virtual double upper() const = 0;

  /// Default: bisection on cdf(), 64 halvings.
  [[nodiscard]] virtual double quantile(double p) const;
  /// \int_0^x G(y) dy. Default: adaptive quadrature.
  [[nodiscard]] virtual double integrated_cdf(double x) const;
  /// upper - \int_0^upper G.
  [[nodiscard]] virtual double mean() const;
  /// Interior points where the density is discontinuous or singular.
  [[nodiscard]] virtual std::vector<double> breakpoints() const { return {}; }
};

/// Shared, immutable handle on a CdfModel.
class EquilibriumCdf {
 public:
  EquilibriumCdf() = default;
  explicit EquilibriumCdf(std::shared_ptr<const CdfModel> model);

  [[nodiscard]] double eval(double x) const;
  [[nodiscard]] double operator()(double x) const { return eval(x); }
  [[nodiscard]] double density(double x) const;
  [[nodiscard]] double quantile(double p) const;
  [[nodiscard]] double upper() const { return model_->upper(); }
  [[nodiscard]] double mean() const { return model_->mean(); }
  [[nodiscard]] double integrated(double x) const;
  [[nodiscard]] std::vector<double> breakpoints() const {
    return model_->breakpoints();
  }
  [[nodiscard]] const CdfModel& model() const { return *model_; }
  explicit operator bool() const { return static_cast<bool>(model_); }

  /// Draws by inverse transform.
  template <class Engine>
  double sample(Engine& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return quantile(unif(rng));
  }

 private:
  std::shared_ptr<const CdfModel> model_;
};

/// G(x) = (x / b)^a on [0, b]. With a = 1/(N-1) and b = N x0 this is the
/// penalty-free N-player equilibrium.
class PowerCdf final : public CdfModel {
 public:
  PowerCdf(double b, double a);
  double cdf(double x) const override;
  double density(double x) const override;
  double upper() const override { return b_; }
  double quantile(double p) const override;
  double integrated_cdf(double x) const override;
  double mean() const override;

  [[nodiscard]] double exponent() const { return a_; }

 private:
  double b_;
  double a_;
};

/// c * Beta(alpha, beta): smooth deviation laws with prescribed mean.
class ScaledBetaCdf final : public CdfModel {
 public:
  ScaledBetaCdf(double c, double alpha, double beta);
  /// Scale chosen so the mean equals x0.
  static ScaledBetaCdf with_mean(double x0, double alpha, double beta);

  double cdf(double x) const override;
  double density(double x) const override;
  double upper() const override { return c_; }
  double quantile(double p) const override;
  double integrated_cdf(double x) const override;
  double mean() const override;

 private:
  double c_;
  double alpha_;
  double beta_;
};

/// Law of (X_tau, M) where M is the mode's maximum.
class JointLaw {
 public:
  /// Plain contest: M carries no penalty; reported as M = X.
  static JointLaw stopped_only(EquilibriumCdf marginal, double x0);
  /// Future regret: P(M >= y | X = z) = z / y for y >= z.
  static JointLaw future_kernel(EquilibriumCdf marginal, double x0);
  /// Past regret: M = max_of(X), a deterministic map whose lower branch
  /// inverts lower_of (the map m -> phi(m) on [x0, upper]).
  static JointLaw past_map(EquilibriumCdf marginal, double x0,
                           std::function<double(double)> max_of,
                           std::function<double(double)> lower_of);
  /// Whole-path regret: conditional of M depends on the embedding, so only
  /// the marginal is held.
  static JointLaw whole_path(EquilibriumCdf marginal, double x0);

  [[nodiscard]] RegretMode mode() const { return mode_; }
  [[nodiscard]] const EquilibriumCdf& marginal() const { return marginal_; }
  [[nodiscard]] double x0() const { return x0_; }
  [[nodiscard]] bool has_max_map() const {
    return mode_ == RegretMode::None || mode_ == RegretMode::Past;
  }
  /// Deterministic maximum; throws DomainError for future/all modes.
  [[nodiscard]] double max_of(double x) const;

  /// phi(m) for past mode; throws DomainError otherwise.
  [[nodiscard]] double lower_of(double m) const;

  /// P(M <= y | X = x). Throws DomainError in whole-path mode.
  [[nodiscard]] double conditional_max_cdf(double y, double x) const;

  /// nu([0, x] x [0, y]) by quadrature over the marginal.
  [[nodiscard]] double joint_cdf(double x, double y) const;

  /// Whether (x, m) lies within eps of the support set of the law.
  [[nodiscard]] bool on_support(double x, double m, double eps) const;

  /// One draw (x, m) from caller-owned engine. Throws DomainError in
  /// whole-path mode.
  template <class Engine>
  std::pair<double, double> sample(Engine& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double x = marginal_.quantile(unif(rng));
    if (mode_ == RegretMode::Future) {
      double v = unif(rng);
      while (v <= 0.0) v = unif(rng);
      return {x, x / v};
    }
    return {x, max_of(x)};
  }

 private:
  JointLaw(RegretMode mode, EquilibriumCdf marginal, double x0,
           std::function<double(double)> max_of,
           std::function<double(double)> lower_of);

  RegretMode mode_ = RegretMode::None;
  EquilibriumCdf marginal_;
  double x0_ = 1.0;
  std::function<double(double)> max_of_;
  std::function<double(double)> lower_of_;
};

/// count draws from a mt19937_64 seeded with seed. Reproducible.
std::vector<std::pair<double, double>> sample_joint(const JointLaw& law,
                                                    std::size_t count,
                                                    std::uint64_t seed);

/// For x < x0, the smallest feasible running maximum of any embedding of G
/// that stops at x: the root m of m - x0 + (m - x) G(x) - \int_x^m G = 0.
/// Returns x for x >= x0.
double minimal_max(const EquilibriumCdf& g, double x0, double x);

/// Lower stopping boundary of the embedding that minimizes the running
/// maximum: for m in [x0, upper], the root phi in [0, x0] of
/// m - x0 + (m - phi) G(phi) - \int_phi^m G = 0.
double minimal_lower(const EquilibriumCdf& g, double x0, double m);

/// E[(X - z); M >= z] for a law with decreasing lower map phi:
/// z - x0 + (z - phi(z)) G(phi(z)) - \int_{phi(z)}^z G, sign flipped.
double doob_residual(const EquilibriumCdf& g, double x0, double z,
                     const std::function<double(double)>& phi);

/// P(xi >= s) = exp(-\int_{x0}^s G(du) / (1 - G(u) + G(phi(u)))).
/// Returns 0 at and beyond the support end when the integral diverges.
double perkins_xi_survival(const EquilibriumCdf& g,
                           const std::function<double(double)>& phi,
                           double x0, double s);

}  // namespace gamble
