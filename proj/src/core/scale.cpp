#include "gamble/scale.hpp"

#include <cmath>
#include <limits>

#include "gamble/errors.hpp"

namespace gamble {

ScaleFunction ScaleFunction::identity() { return {}; }

ScaleFunction ScaleFunction::exponential_bm(double a, double b) {
  if (!(a != 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("exponential Brownian motion needs a != 0");
  }
  const double kappa = 1.0 - 2.0 * b / (a * a);
  if (!(kappa > 0.0)) {
    throw ParameterError("kappa = 1 - 2b/a^2 must be positive (got " +
                         std::to_string(kappa) +
                         "): the process is not transient to zero");
  }
  ScaleFunction sf;
  sf.kind_ = Kind::ExponentialBM;
  sf.exponent_ = kappa;
  return sf;
}

ScaleFunction ScaleFunction::drifting_bm(double a, double b) {
  if (!(a != 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("drifting Brownian motion needs a != 0");
  }
  if (!(b < 0.0)) {
    throw ParameterError(
        "drifting Brownian motion needs b < 0 for a scale function that "
        "vanishes at the lower boundary");
  }
  ScaleFunction sf;
  sf.kind_ = Kind::DriftingBM;
  sf.exponent_ = 2.0 * b / (a * a);
  return sf;
}

ScaleFunction ScaleFunction::custom(std::vector<double> y,
                                    std::vector<double> s) {
  if (s.empty() || s.front() != 0.0) {
    throw ValidationError("custom scale table must start at s = 0");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) {
      throw ValidationError("custom scale table must be strictly increasing");
    }
  }
  ScaleFunction sf;
  sf.kind_ = Kind::Custom;
  sf.table_ = numerics::MonotoneCubic(std::move(y), std::move(s));
  return sf;
}

double ScaleFunction::forward(double y) const {
  switch (kind_) {
    case Kind::Identity:
      if (y < 0.0) throw DomainError("identity scale is defined for y >= 0");
      return y;
    case Kind::ExponentialBM:
      if (y < 0.0) throw DomainError("exponential BM lives on y >= 0");
      return std::pow(y, exponent_);
    case Kind::DriftingBM:
      return std::exp(-exponent_ * y);
    case Kind::Custom:
      if (y < table_.front_x() || y > table_.back_x()) {
        throw DomainError("y outside the custom scale table");
      }
      return table_(y);
  }
  return y;
}

double ScaleFunction::inverse(double x) const {
  if (x < 0.0) throw DomainError("scale inverse needs x >= 0");
  switch (kind_) {
    case Kind::Identity:
      return x;
    case Kind::ExponentialBM:
      return std::pow(x, 1.0 / exponent_);
    case Kind::DriftingBM:
      if (x == 0.0) return -std::numeric_limits<double>::infinity();
      return -std::log(x) / exponent_;
    case Kind::Custom:
      if (x > table_.ys().back()) {
        throw DomainError("x outside the custom scale table");
      }
      return table_.inverse(x);
  }
  return x;
}

double scale_transform(const ScaleFunction& sf, double y) {
  return sf.forward(y);
}

double scale_inverse(const ScaleFunction& sf, double x) {
  return sf.inverse(x);
}

double diffusion_cdf(const EquilibriumCdf& g, const ScaleFunction& sf,
                     double y) {
  return g.eval(sf.forward(y));
}

double diffusion_quantile(const EquilibriumCdf& g, const ScaleFunction& sf,
                          double p) {
  return sf.inverse(g.quantile(p));
}

}  // namespace gamble
