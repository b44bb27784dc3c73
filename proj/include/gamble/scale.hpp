#pragma once

#include <vector>

#include "gamble/law.hpp"
#include "gamble/numerics.hpp"

namespace gamble {

/// Increasing map s with s(lower boundary) = 0 that turns a
/// time-homogeneous diffusion Y into a local martingale s(Y).
class ScaleFunction {
 public:
  enum class Kind { Identity, ExponentialBM, DriftingBM, Custom };

  static ScaleFunction identity();
  /// dY = a Y dW + b Y dt: s(y) = y^kappa, kappa = 1 - 2b/a^2 > 0.
  static ScaleFunction exponential_bm(double a, double b);
  /// dY = a dW + b dt with b < 0: s(y) = e^{-eta y}, eta = 2b/a^2.
  static ScaleFunction drifting_bm(double a, double b);
  /// Strictly increasing table with s(y_0) = 0, interpolated by a
  /// shape-preserving cubic.
  static ScaleFunction custom(std::vector<double> y, std::vector<double> s);

  [[nodiscard]] Kind kind() const { return kind_; }
  /// kappa for ExponentialBM, eta for DriftingBM, 0 otherwise.
  [[nodiscard]] double exponent() const { return exponent_; }

  [[nodiscard]] double forward(double y) const;
  [[nodiscard]] double inverse(double x) const;

 private:
  Kind kind_ = Kind::Identity;
  double exponent_ = 0.0;
  numerics::MonotoneCubic table_;
};

double scale_transform(const ScaleFunction& sf, double y);
double scale_inverse(const ScaleFunction& sf, double x);

/// CDF of the stopped diffusion: G_Y(y) = G_X(s(y)).
double diffusion_cdf(const EquilibriumCdf& g, const ScaleFunction& sf,
                     double y);
/// Quantile of the stopped diffusion: s^{-1}(G_X^{-1}(p)).
double diffusion_quantile(const EquilibriumCdf& g, const ScaleFunction& sf,
                          double p);

}  // namespace gamble
