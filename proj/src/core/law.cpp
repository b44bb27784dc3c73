#include "gamble/law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "gamble/errors.hpp"
#include "gamble/numerics.hpp"

namespace gamble {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// integrate f over [a, b], split at the given interior points
template <class F>
double integrate_split(F&& f, double a, double b,
                       const std::vector<double>& cuts) {
  double total = 0.0;
  double lo = a;
  for (double c : cuts) {
    if (c <= lo || c >= b) continue;
    total += numerics::integrate(f, lo, c);
    lo = c;
  }
  return total + numerics::integrate(f, lo, b);
}

}  // namespace

double CdfModel::quantile(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return upper();
  return numerics::bisect_increasing([this](double x) { return cdf(x); }, p,
                                     0.0, upper());
}

double CdfModel::integrated_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double b = upper();
  const double top = std::min(x, b);
  double total = integrate_split([this](double y) { return cdf(y); }, 0.0,
                                 top, breakpoints());
  if (x > b) total += x - b;
  return total;
}

double CdfModel::mean() const { return upper() - integrated_cdf(upper()); }

EquilibriumCdf::EquilibriumCdf(std::shared_ptr<const CdfModel> model)
    : model_(std::move(model)) {
  if (!model_) throw ValidationError("EquilibriumCdf needs a model");
}

double EquilibriumCdf::eval(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (x >= model_->upper()) return 1.0;
  return model_->cdf(x);
}

double EquilibriumCdf::density(double x) const {
  if (x < 0.0 || x > model_->upper()) return 0.0;
  return model_->density(x);
}

double EquilibriumCdf::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("quantile level must lie in [0, 1]");
  }
  return model_->quantile(p);
}

double EquilibriumCdf::integrated(double x) const {
  if (x <= 0.0) return 0.0;
  return model_->integrated_cdf(x);
}

// ---- PowerCdf

PowerCdf::PowerCdf(double b, double a) : b_(b), a_(a) {
  if (!(b > 0.0) || !(a > 0.0)) {
    throw ParameterError("PowerCdf needs b > 0 and a > 0");
  }
}

double PowerCdf::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= b_) return 1.0;
  return std::pow(x / b_, a_);
}

double PowerCdf::density(double x) const {
  if (x < 0.0 || x > b_) return 0.0;
  if (x == 0.0) {
    if (a_ < 1.0) return kInf;
    return a_ == 1.0 ? 1.0 / b_ : 0.0;
  }
  return a_ / b_ * std::pow(x / b_, a_ - 1.0);
}

double PowerCdf::quantile(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return b_;
  return b_ * std::pow(p, 1.0 / a_);
}

double PowerCdf::integrated_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double top = std::min(x, b_);
  double v = top * std::pow(top / b_, a_) / (a_ + 1.0);
  if (x > b_) v += x - b_;
  return v;
}

double PowerCdf::mean() const { return b_ * a_ / (a_ + 1.0); }

// ---- ScaledBetaCdf

ScaledBetaCdf::ScaledBetaCdf(double c, double alpha, double beta)
    : c_(c), alpha_(alpha), beta_(beta) {
  if (!(c > 0.0) || !(alpha > 0.0) || !(beta > 0.0)) {
    throw ParameterError("beta law needs positive scale and shapes");
  }
}

ScaledBetaCdf ScaledBetaCdf::with_mean(double x0, double alpha, double beta) {
  return ScaledBetaCdf(x0 * (alpha + beta) / alpha, alpha, beta);
}

double ScaledBetaCdf::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= c_) return 1.0;
  return boost::math::ibeta(alpha_, beta_, x / c_);
}

double ScaledBetaCdf::density(double x) const {
  if (x < 0.0 || x > c_) return 0.0;
  if (x == 0.0) {
    if (alpha_ < 1.0) return kInf;
    if (alpha_ > 1.0) return 0.0;
  }
  if (x == c_) {
    if (beta_ < 1.0) return kInf;
    if (beta_ > 1.0) return 0.0;
  }
  return boost::math::ibeta_derivative(alpha_, beta_, x / c_) / c_;
}

double ScaledBetaCdf::quantile(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return c_;
  try {
    return c_ * boost::math::ibeta_inv(alpha_, beta_, p);
  } catch (const boost::math::evaluation_error&) {
    // ibeta_inv in older Boost can stall, e.g. at the median when alpha = beta
    return c_ * numerics::find_root(
                    [&](double s) { return boost::math::ibeta(alpha_, beta_, s) - p; },
                    0.0, 1.0);
  }
}

double ScaledBetaCdf::integrated_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= c_) return x - mean();
  const double s = x / c_;
  return x * boost::math::ibeta(alpha_, beta_, s) -
         mean() * boost::math::ibeta(alpha_ + 1.0, beta_, s);
}

double ScaledBetaCdf::mean() const { return c_ * alpha_ / (alpha_ + beta_); }

// ---- JointLaw

JointLaw::JointLaw(RegretMode mode, EquilibriumCdf marginal, double x0,
                   std::function<double(double)> max_of,
                   std::function<double(double)> lower_of)
    : mode_(mode),
      marginal_(std::move(marginal)),
      x0_(x0),
      max_of_(std::move(max_of)),
      lower_of_(std::move(lower_of)) {
  if (!marginal_) throw ValidationError("joint law needs a marginal");
}

JointLaw JointLaw::stopped_only(EquilibriumCdf marginal, double x0) {
  return {RegretMode::None, std::move(marginal), x0, nullptr, nullptr};
}

JointLaw JointLaw::future_kernel(EquilibriumCdf marginal, double x0) {
  return {RegretMode::Future, std::move(marginal), x0, nullptr, nullptr};
}

JointLaw JointLaw::past_map(EquilibriumCdf marginal, double x0,
                            std::function<double(double)> max_of,
                            std::function<double(double)> lower_of) {
  if (!max_of || !lower_of) {
    throw ValidationError("past-mode joint law needs both maps");
  }
  return {RegretMode::Past, std::move(marginal), x0, std::move(max_of),
          std::move(lower_of)};
}

JointLaw JointLaw::whole_path(EquilibriumCdf marginal, double x0) {
  return {RegretMode::All, std::move(marginal), x0, nullptr, nullptr};
}

double JointLaw::max_of(double x) const {
  switch (mode_) {
    case RegretMode::None:
      return x;
    case RegretMode::Past:
      return x >= x0_ ? x : max_of_(x);
    default:
      throw DomainError("maximum is random in this regret mode");
  }
}

double JointLaw::lower_of(double m) const {
  if (mode_ != RegretMode::Past) {
    throw DomainError("lower boundary only exists in past mode");
  }
  return lower_of_(m);
}

double JointLaw::conditional_max_cdf(double y, double x) const {
  switch (mode_) {
    case RegretMode::Future:
      if (y < x) return 0.0;
      if (!(y > 0.0)) return 1.0;
      return (y - x) / y;
    case RegretMode::All:
      throw DomainError("whole-path maximum has no fixed conditional law");
    default:
      return max_of(x) <= y ? 1.0 : 0.0;
  }
}

double JointLaw::joint_cdf(double x, double y) const {
  if (x <= 0.0 || y <= 0.0) return 0.0;
  if (mode_ == RegretMode::All) {
    throw DomainError("whole-path joint law is not constructed");
  }
  if (mode_ == RegretMode::Future) {
    // only z <= min(x, y) contributes, with weight (y - z) / y
    const double top = std::min(x, y);
    const double p_top = marginal_.eval(top);
    return numerics::integrate(
        [&](double p) {
          const double z = marginal_.quantile(p);
          return (y - std::min(z, y)) / y;
        },
        0.0, p_top, 1e-11);
  }
  if (mode_ == RegretMode::None) return marginal_.eval(std::min(x, y));
  // past: {M <= y} = {phi(y) <= X <= y} for y >= x0
  if (y < x0_) return 0.0;
  const double lo = std::min(lower_of_(std::min(y, marginal_.upper())), x);
  return std::max(0.0, marginal_.eval(std::min(x, y)) - marginal_.eval(lo));
}

bool JointLaw::on_support(double x, double m, double eps) const {
  switch (mode_) {
    case RegretMode::None:
      return std::abs(m - x) <= eps;
    case RegretMode::Future:
      return m + eps >= x;
    case RegretMode::All:
      return m + eps >= x && m + eps >= x0_;
    case RegretMode::Past:
      if (std::abs(m - x) <= eps && x + eps >= x0_) return true;
      if (m < x0_ || m > marginal_.upper()) return false;
      return std::abs(x - lower_of_(m)) <= eps;
  }
  return false;
}

std::vector<std::pair<double, double>> sample_joint(const JointLaw& law,
                                                    std::size_t count,
                                                    std::uint64_t seed) {
  if (law.mode() == RegretMode::All) {
    throw DomainError("whole-path joint law is sampled by path simulation");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(law.sample(rng));
  return out;
}

double minimal_max(const EquilibriumCdf& g, double x0, double x) {
  if (x >= x0) return x;
  if (x < 0.0) throw DomainError("minimal_max needs x >= 0");
  const double gx = g.eval(x);
  const double ix = g.integrated(x);
  auto f = [&](double m) {
    return m - x0 + (m - x) * gx - (g.integrated(m) - ix);
  };
  if (f(x0) >= 0.0) return x0;
  return numerics::find_root(f, x0, g.upper(), 1e-14);
}

double minimal_lower(const EquilibriumCdf& g, double x0, double m) {
  if (m < x0) throw DomainError("minimal_lower needs m >= x0");
  if (m >= g.upper()) return 0.0;
  const double gm = g.integrated(m);
  auto f = [&](double x) {
    return m - x0 + (m - x) * g.eval(x) - (gm - g.integrated(x));
  };
  // f increases from f(0) <= 0 to f(x0) >= 0
  if (f(0.0) >= 0.0) return 0.0;
  if (f(x0) <= 0.0) return x0;
  return numerics::find_root(f, 0.0, x0, 1e-14);
}

double doob_residual(const EquilibriumCdf& g, double x0, double z,
                     const std::function<double(double)>& phi) {
  const double p = phi(z);
  return x0 - z + (g.integrated(z) - g.integrated(p)) - (z - p) * g.eval(p);
}

double perkins_xi_survival(const EquilibriumCdf& g,
                           const std::function<double(double)>& phi,
                           double x0, double s) {
  if (s < x0) throw DomainError("xi survival is defined for s >= x0");
  if (s >= g.upper()) return 0.0;
  if (s == x0) return 1.0;
  const double hazard = numerics::integrate(
      [&](double u) {
        const double denom = 1.0 - g.eval(u) + g.eval(phi(u));
        return g.density(u) / denom;
      },
      x0, s, 1e-11);
  return std::exp(-hazard);
}

}  // namespace gamble
