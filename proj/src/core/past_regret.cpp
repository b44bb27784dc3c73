#include "gamble/past_regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "gamble/errors.hpp"
#include "gamble/numerics.hpp"

namespace gamble {

namespace odeint = boost::numeric::odeint;
using State = JTrajectory::State;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ipow(double x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

}  // namespace

// ---- JTrajectory

JTrajectory::JTrajectory(int n, double K, const PastSolverOptions& opt)
    : n_(n), K_(K), p_(1.0 / (n - 1)) {
  if (n < 2) throw ParameterError("J equation needs n >= 2");
  if (!(K > 0.0) || !std::isfinite(K)) {
    throw ParameterError("J equation needs K > 0");
  }
  auto rhs = [this](const State& s, State& ds, double /*t*/) {
    ds = rate(s);
  };

  State y{};
  double t = 0.0;
  t_.push_back(t);
  y_.push_back(y);
  dy_.push_back(rate(y));

  auto stepper = odeint::make_dense_output(
      opt.abs_tol, opt.rel_tol, opt.max_step,
      odeint::runge_kutta_dopri5<State>());
  stepper.initialize(y, 0.0, opt.max_step / 16.0);

  bool found = false;
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    const auto [t0, t1] = stepper.do_step(rhs);
    const State& s1 = stepper.current_state();
    if (!(t1 > t0) || !std::isfinite(s1[U])) {
      throw SolverError("J equation: step underflow before the event, last t " +
                        std::to_string(t0));
    }
    if (s1[U] >= 1.0) {
      throw SolverError("J equation: event not found before u = 1");
    }
    if (gap(s1) > 0.0) {
      t_.push_back(t1);
      y_.push_back(s1);
      dy_.push_back(rate(s1));
      continue;
    }
    // The gap changes sign inside [t0, t1]; bisect on the dense output.
    double lo = t0;
    double hi = t1;
    State s_lo = y_.back();
    State s_hi = s1;
    State mid_state{};
    for (int it = 0; it < 200 && hi - lo > opt.event_tol * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      stepper.calc_state(mid, mid_state);
      if (gap(mid_state) > 0.0) {
        lo = mid;
        s_lo = mid_state;
      } else {
        hi = mid;
        s_hi = mid_state;
      }
    }
    bracket_u_ = std::abs(s_hi[U] - s_lo[U]);
    // take the point where the gap is linearly zero between the ends
    const double g_lo = gap(s_lo);
    const double g_hi = gap(s_hi);
    const double w = g_lo > g_hi ? g_lo / (g_lo - g_hi) : 0.5;
    const double ts = lo + w * (hi - lo);
    State ss{};
    stepper.calc_state(ts, ss);
    if (ts > t_.back()) {
      t_.push_back(ts);
      y_.push_back(ss);
      dy_.push_back(rate(ss));
    }
    found = true;
    break;
  }
  if (!found) {
    throw SolverError("J equation: step limit reached before the event");
  }
}

State JTrajectory::rate(const State& s) const {
  const double u = s[U];
  const double j = std::max(s[J], 0.0);
  const double one_minus_u = std::max(1.0 - u, 0.0);
  const double e = one_minus_u - ipow(j, n_ - 1);
  const double num = j + 1.0 - std::pow(one_minus_u, p_);
  const double d = (K_ + 1.0) * e + num;
  const double ea = std::exp(s[A]);
  State ds{};
  ds[U] = (K_ + 1.0) * e / d;
  ds[J] = num / d;
  ds[A] = K_ / d;
  ds[B] = ea * ds[U];
  ds[L] = ea * (n_ - 1) * ipow(j, n_ - 2) * ds[J];
  ds[Q] = j * ds[L];
  ds[P] = std::pow(one_minus_u, p_) * ea * ds[U];
  return ds;
}

double JTrajectory::gap(const State& s) const {
  return 1.0 - s[U] - ipow(std::max(s[J], 0.0), n_ - 1);
}

std::size_t JTrajectory::cell_of_t(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.begin()) return 0;
  const auto i = static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(i, t_.size() - 2);
}

double JTrajectory::component(double t, std::size_t i, std::size_t c) const {
  const double h = t_[i + 1] - t_[i];
  const double s = (t - t_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[i][c] + (s3 - 2 * s2 + s) * h * dy_[i][c] +
         (-2 * s3 + 3 * s2) * y_[i + 1][c] + (s3 - s2) * h * dy_[i + 1][c];
}

State JTrajectory::state(double t) const {
  if (t <= 0.0) return y_.front();
  if (t >= t_star()) return y_.back();
  const std::size_t i = cell_of_t(t);
  State out{};
  for (std::size_t c = 0; c < kDim; ++c) out[c] = component(t, i, c);
  return out;
}

double JTrajectory::t_where(Index c, double v) const {
  if (v <= y_.front()[c]) return 0.0;
  if (v >= y_.back()[c]) return t_star();
  auto it = std::upper_bound(
      y_.begin(), y_.end(), v,
      [c](double value, const State& s) { return value < s[c]; });
  const auto i = static_cast<std::size_t>(it - y_.begin()) - 1;
  return numerics::find_root(
      [&](double t) { return component(t, i, c) - v; }, t_[i], t_[i + 1],
      1e-16);
}

double JTrajectory::J_of_u(double u) const {
  if (u < 0.0 || u > u_star()) {
    throw DomainError("J is defined on [0, u*]");
  }
  return state(t_where(U, u))[J];
}

std::vector<std::pair<double, double>> JTrajectory::J_table() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(y_.size());
  for (const auto& s : y_) out.emplace_back(s[U], s[J]);
  return out;
}

JTrajectory integrate_J(const ContestSpec& spec,
                        const PastSolverOptions& options) {
  spec.validate();
  return JTrajectory(spec.n, spec.K, options);
}

// ---- PastRegretSolution

std::shared_ptr<const PastRegretSolution> PastRegretSolution::solve(
    const ContestSpec& spec, const PastSolverOptions& options) {
  spec.validate();
  if (spec.mode != RegretMode::Past) {
    throw ParameterError("past-regret solver needs mode past");
  }
  if (spec.K == 0.0) {
    throw ParameterError(
        "K = 0 is the plain contest; use the closed form instead");
  }
  return std::make_shared<PastRegretSolution>(
      spec, JTrajectory(spec.n, spec.K, options));
}

PastRegretSolution::PastRegretSolution(const ContestSpec& spec,
                                       JTrajectory trajectory)
    : spec_(spec), traj_(std::move(trajectory)) {
  const double k1 = spec_.K + 1.0;
  const double i_star = I();
  if (!(i_star < k1)) {
    throw SolverError("inconsistent J solution: I = " +
                      std::to_string(i_star) + " >= K + 1");
  }
  r_ = spec_.x0 * k1 / (k1 - i_star);

  const auto& states = traj_.states();
  x_up_.reserve(states.size());
  x_lo_.reserve(states.size());
  for (const auto& s : states) {
    x_up_.push_back(upper_at(s));
    x_lo_.push_back(lower_at(s));
  }
  // pin the exact end values the construction guarantees
  x_up_.front() = r_;
  x_lo_.front() = 0.0;
  for (std::size_t i = 1; i < x_lo_.size(); ++i) {
    if (x_lo_[i] < x_lo_[i - 1] || x_up_[i] > x_up_[i - 1]) {
      throw SolverError("past-regret branches are not monotone");
    }
  }
}

double PastRegretSolution::upper_at(const JTrajectory::State& s) const {
  const double k1 = spec_.K + 1.0;
  return r_ * (k1 - s[JTrajectory::B]) / k1;
}

double PastRegretSolution::lower_at(const JTrajectory::State& s) const {
  return r_ * s[JTrajectory::L];
}

double PastRegretSolution::psi_at(const JTrajectory::State& s) const {
  return 1.0 - s[JTrajectory::U];
}

double PastRegretSolution::t_upper(double y) const {
  const double x0 = spec_.x0;
  if (y < x0 || y > r_) throw DomainError("upper branch is [x0, r]");
  if (y >= r_) return 0.0;
  if (y <= x0) return traj_.t_star();
  // x_up decreases in t: find the cell, then solve inside it
  auto it = std::upper_bound(x_up_.begin(), x_up_.end(), y,
                             [](double v, double e) { return v > e; });
  const auto i = static_cast<std::size_t>(it - x_up_.begin()) - 1;
  const auto& ts = traj_.times();
  if (i + 1 >= ts.size()) return traj_.t_star();
  return numerics::find_root(
      [&](double t) { return upper_at(traj_.state(t)) - y; }, ts[i],
      ts[i + 1], 1e-16);
}

double PastRegretSolution::t_lower(double x) const {
  const double x0 = spec_.x0;
  if (x < 0.0 || x > x0) throw DomainError("lower branch is [0, x0]");
  if (x <= 0.0) return 0.0;
  if (x >= x0) return traj_.t_star();
  auto it = std::upper_bound(x_lo_.begin(), x_lo_.end(), x);
  const auto i = static_cast<std::size_t>(it - x_lo_.begin()) - 1;
  const auto& ts = traj_.times();
  if (i + 1 >= ts.size()) return traj_.t_star();
  return numerics::find_root(
      [&](double t) { return lower_at(traj_.state(t)) - x; }, ts[i],
      ts[i + 1], 1e-16);
}

double PastRegretSolution::H(double z) const {
  if (!(z > z_star()) || z > 1.0) {
    throw DomainError("H is defined on (z*, 1]");
  }
  const auto s = traj_.state(traj_.t_where(JTrajectory::U, 1.0 - z));
  const double e = traj_.gap(s);
  if (!(e > 0.0)) throw DomainError("H diverges at z*");
  return spec_.K / ((spec_.K + 1.0) * e);
}

double PastRegretSolution::Psi(double z) const {
  if (z < z_star() || z > 1.0) throw DomainError("Psi is defined on [z*, 1]");
  return upper_at(traj_.state(traj_.t_where(JTrajectory::U, 1.0 - z)));
}

double PastRegretSolution::Psi_prime(double z) const {
  if (z < z_star() || z > 1.0) throw DomainError("Psi is defined on [z*, 1]");
  const auto s = traj_.state(traj_.t_where(JTrajectory::U, 1.0 - z));
  return r_ * std::exp(s[JTrajectory::A]) / (spec_.K + 1.0);
}

double PastRegretSolution::psi(double y) const {
  return psi_at(traj_.state(t_upper(y)));
}

double PastRegretSolution::psi_prime(double y) const {
  const auto s = traj_.state(t_upper(y));
  return (spec_.K + 1.0) / (r_ * std::exp(s[JTrajectory::A]));
}

double PastRegretSolution::psi_second(double y) const {
  const auto s = traj_.state(t_upper(y));
  const double e = traj_.gap(s);
  if (!(e > 0.0)) return kInf;
  const double d1 = (spec_.K + 1.0) / (r_ * std::exp(s[JTrajectory::A]));
  return spec_.K * d1 * d1 / ((spec_.K + 1.0) * e);
}

double PastRegretSolution::phi(double y) const {
  return lower_at(traj_.state(t_upper(y)));
}

double PastRegretSolution::theta(double y) const {
  const double j = traj_.state(t_upper(y))[JTrajectory::J];
  return ipow(j, spec_.n - 1);
}

double PastRegretSolution::phi_inverse(double x) const {
  return upper_at(traj_.state(t_lower(x)));
}

double PastRegretSolution::psi_extended(double x) const {
  if (x < 0.0) throw DomainError("psi is defined on [0, inf)");
  if (x >= r_) return 1.0;
  if (x >= spec_.x0) return psi(x);
  return ipow(traj_.state(t_lower(x))[JTrajectory::J], spec_.n - 1);
}

double PastRegretSolution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= r_) return 1.0;
  if (x < spec_.x0) return traj_.state(t_lower(x))[JTrajectory::J];
  return std::pow(psi(x), 1.0 / (spec_.n - 1));
}

double PastRegretSolution::density(double x) const {
  if (x < 0.0 || x > r_) return 0.0;
  const int n = spec_.n;
  if (x < spec_.x0) {
    const auto s = traj_.state(t_lower(x));
    const double j = s[JTrajectory::J];
    if (n > 2 && !(j > 0.0)) return kInf;
    return 1.0 / (r_ * std::exp(s[JTrajectory::A]) * (n - 1) * ipow(j, n - 2));
  }
  const auto s = traj_.state(t_upper(x));
  const double p = 1.0 / (n - 1);
  return p * std::pow(psi_at(s), p - 1.0) * (spec_.K + 1.0) /
         (r_ * std::exp(s[JTrajectory::A]));
}

double PastRegretSolution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("quantile level must lie in [0, 1]");
  }
  if (p == 0.0) return 0.0;
  if (p >= 1.0) return r_;
  if (p < cdf_at_x0()) {
    return lower_at(traj_.state(traj_.t_where(JTrajectory::J, p)));
  }
  const double u = 1.0 - ipow(p, spec_.n - 1);
  return upper_at(traj_.state(traj_.t_where(JTrajectory::U, u)));
}

double PastRegretSolution::integrated_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  const auto& end = traj_.end();
  const double lower_total = r_ * end[JTrajectory::Q];
  if (x <= spec_.x0) {
    return r_ * traj_.state(t_lower(x))[JTrajectory::Q];
  }
  const double k1 = spec_.K + 1.0;
  const double upper_total = r_ / k1 * end[JTrajectory::P];
  if (x >= r_) return lower_total + upper_total + (x - r_);
  const double above = r_ / k1 * traj_.state(t_upper(x))[JTrajectory::P];
  return lower_total + upper_total - above;
}

double PastRegretSolution::mean() const { return r_ - integrated_cdf(r_); }

double PastRegretSolution::max_of(double x) const {
  if (x < 0.0) throw DomainError("stopped values are nonnegative");
  if (x >= spec_.x0) return x;
  return phi_inverse(x);
}

std::vector<PsiRow> PastRegretSolution::Psi_table() const {
  std::vector<PsiRow> rows;
  const auto& states = traj_.states();
  rows.reserve(states.size());
  for (std::size_t i = states.size(); i-- > 0;) {
    const auto& s = states[i];
    rows.push_back({1.0 - s[JTrajectory::U], x_up_[i],
                    r_ * std::exp(s[JTrajectory::A]) / (spec_.K + 1.0)});
  }
  return rows;
}

namespace {

class PastRegretCdf final : public CdfModel {
 public:
  explicit PastRegretCdf(std::shared_ptr<const PastRegretSolution> sol)
      : sol_(std::move(sol)) {}
  double cdf(double x) const override { return sol_->cdf(x); }
  double density(double x) const override { return sol_->density(x); }
  double upper() const override { return sol_->r(); }
  double quantile(double p) const override { return sol_->quantile(p); }
  double integrated_cdf(double x) const override {
    return sol_->integrated_cdf(x);
  }
  double mean() const override { return sol_->mean(); }
  std::vector<double> breakpoints() const override {
    return {sol_->spec().x0};
  }

 private:
  std::shared_ptr<const PastRegretSolution> sol_;
};

}  // namespace

EquilibriumCdf PastRegretSolution::equilibrium_cdf() const {
  return EquilibriumCdf(std::make_shared<PastRegretCdf>(shared_from_this()));
}

JointLaw PastRegretSolution::joint_law() const {
  auto self = shared_from_this();
  return JointLaw::past_map(
      equilibrium_cdf(), spec_.x0,
      [self](double x) { return self->max_of(x); },
      [self](double m) {
        return self->phi(std::clamp(m, self->spec().x0, self->r()));
      });
}

double compute_H(const PastRegretSolution& solution, double z) {
  return solution.H(z);
}

RAndPsi compute_r_and_Psi(const PastRegretSolution& solution) {
  return {solution.r(), solution.I(), solution.Psi_table()};
}

std::pair<EquilibriumCdf, JointLaw> build_equilibrium(
    const PastRegretSolution& solution) {
  return {solution.equilibrium_cdf(), solution.joint_law()};
}

// ---- two-player closed form

double TwoPlayerOracle::residual(double y, double phibar) const {
  const double c = K - std::log1p(K);
  return x0 - phibar / K - (x0 / c) * std::log1p(-phibar * c / (K * x0)) - y;
}

double TwoPlayerOracle::phibar(double y) const {
  if (y < x0 || y > r) throw DomainError("phibar is defined on [x0, r]");
  return numerics::find_root([&](double v) { return residual(y, v); }, 0.0,
                             y, 1e-15);
}

TwoPlayerOracle two_player_oracle(double K, double x0) {
  if (!(x0 > 0.0)) throw ParameterError("x0 must be positive");
  if (K < 0.0) throw ParameterError("K must be nonnegative");
  if (K == 0.0) return {0.0, x0, 2.0 * x0};
  const double c = K - std::log1p(K);
  return {K, x0, x0 * K * K / ((K + 1.0) * c)};
}

}  // namespace gamble
