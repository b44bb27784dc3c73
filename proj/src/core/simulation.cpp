#include "gamble/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/random/normal_distribution.hpp>

#include "gamble/errors.hpp"
#include "gamble/numerics.hpp"
#include "gamble/payoff.hpp"

namespace gamble {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// bridge probabilities exp(-e) below this are ignored
constexpr double kMaxExponent = 40.0;

// uniform on (0, 1]
double open_uniform(PathEngine& rng) {
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

struct Mean {
  double sum = 0.0;
  double sum2 = 0.0;
  void add(double v) {
    sum += v;
    sum2 += v * v;
  }
  [[nodiscard]] double mean(double n) const { return sum / n; }
  [[nodiscard]] double se(double n) const {
    if (n < 2) return 0.0;
    const double m = sum / n;
    const double var = std::max(0.0, (sum2 - n * m * m) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

}  // namespace

void PathConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ParameterError("time step dt must be positive");
  }
  if (max_steps == 0) throw ParameterError("max_steps must be positive");
  if (!(future_cap > 1.0)) throw ParameterError("future_cap must exceed 1");
}

PathEngine path_engine(std::uint64_t seed, std::uint64_t player,
                       std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(player),
                    static_cast<std::uint32_t>(path),
                    static_cast<std::uint32_t>(path >> 32)};
  return PathEngine(seq);
}

// ---- BarrierTable

BarrierTable::BarrierTable(const std::function<double(double)>& f, double x0,
                           double top, std::size_t points)
    : x0_(x0), top_(top) {
  if (points < 2 || !(top > x0)) {
    throw ParameterError("barrier table needs top > x0 and two points");
  }
  values_.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double s =
        static_cast<double>(i) / static_cast<double>(points - 1);
    values_[i] = f(x0 + (top - x0) * s * s);
  }
}

double BarrierTable::operator()(double m) const {
  if (m <= x0_) return values_.front();
  if (m >= top_) return values_.back();
  const double pos =
      std::sqrt((m - x0_) / (top_ - x0_)) * static_cast<double>(values_.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), values_.size() - 2);
  const double w = pos - static_cast<double>(i);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

// ---- StoppingRule

StoppingRule StoppingRule::immediate() {
  StoppingRule r;
  r.kind_ = Kind::Immediate;
  return r;
}

StoppingRule StoppingRule::run_to_absorption() {
  StoppingRule r;
  r.kind_ = Kind::RunToAbsorption;
  r.level_ = kInf;
  return r;
}

StoppingRule StoppingRule::hit_level_pair(double lower, double upper) {
  if (!(lower >= 0.0) || !(upper > lower)) {
    throw ParameterError("level pair needs 0 <= lower < upper");
  }
  StoppingRule r;
  r.kind_ = Kind::HitLevelPair;
  r.lower_ = lower;
  r.level_ = upper;
  return r;
}

StoppingRule StoppingRule::azema_yor(const EquilibriumCdf& target, double x0,
                                     std::size_t points) {
  const double top = target.upper();
  // barycenter b(x) = E[X | X >= x]
  auto bary = [&](double x) {
    const double tail = 1.0 - target.eval(x);
    if (!(tail > 0.0)) return top;
    return (x0 - x * target.eval(x) + target.integrated(x)) / tail;
  };
  auto inverse = [&](double m) {
    if (m >= top) return top;
    return numerics::bisect_increasing(bary, m, 0.0, top, 80);
  };
  StoppingRule r;
  r.kind_ = Kind::AzemaYor;
  r.x0_ = x0;
  r.level_ = top;
  r.barrier_ = BarrierTable(inverse, x0, top, points);
  r.target_ = target;
  return r;
}

StoppingRule StoppingRule::perkins(const EquilibriumCdf& target, double x0,
                                   const std::function<double(double)>& phi,
                                   std::size_t points) {
  const double top = target.upper();
  StoppingRule r;
  r.kind_ = Kind::Perkins;
  r.x0_ = x0;
  r.level_ = top;
  r.barrier_ = BarrierTable(phi, x0, top, points);
  r.target_ = target;

  // cumulative hazard of xi on levels dense near the top, where it diverges
  std::vector<double> levels = numerics::linspace(x0, top, 1025);
  levels.pop_back();
  for (int j = 1; j <= 600; ++j) {
    const double d = (top - x0) * std::pow(10.0, -3.0 - j / 50.0);
    levels.push_back(top - d);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  auto hazard = [&](double u) {
    const double denom = 1.0 - target.eval(u) + target.eval(phi(u));
    return denom > 0.0 ? target.density(u) / denom : 0.0;
  };
  r.xi_levels_ = levels;
  r.xi_hazard_.assign(levels.size(), 0.0);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    r.xi_hazard_[i] = r.xi_hazard_[i - 1] +
                      boost::math::quadrature::gauss<double, 20>::integrate(
                          hazard, levels[i - 1], levels[i]);
  }
  return r;
}

StoppingRule StoppingRule::perkins(const EquilibriumCdf& target, double x0,
                                   std::size_t points) {
  return perkins(
      target, x0,
      [&](double m) { return minimal_lower(target, x0, m); }, points);
}

StoppingRule StoppingRule::quantile_oracle(JointLaw law) {
  StoppingRule r;
  r.kind_ = Kind::QuantileOracle;
  r.x0_ = law.x0();
  r.target_ = law.marginal();
  r.oracle_ = std::make_shared<const JointLaw>(std::move(law));
  return r;
}

std::string StoppingRule::name() const {
  switch (kind_) {
    case Kind::Immediate:
      return "immediate";
    case Kind::RunToAbsorption:
      return "absorption";
    case Kind::HitLevelPair:
      return "level-pair";
    case Kind::AzemaYor:
      return "azema-yor";
    case Kind::Perkins:
      return "perkins";
    case Kind::QuantileOracle:
      return "oracle";
  }
  return "unknown";
}

double StoppingRule::draw_level(PathEngine& rng) const {
  if (kind_ != Kind::Perkins) return level_;
  const double e = -std::log(open_uniform(rng));
  if (e >= xi_hazard_.back()) return level_;
  auto it = std::upper_bound(xi_hazard_.begin(), xi_hazard_.end(), e);
  const auto i = static_cast<std::size_t>(it - xi_hazard_.begin());
  const double h0 = xi_hazard_[i - 1];
  const double h1 = xi_hazard_[i];
  const double w = h1 > h0 ? (e - h0) / (h1 - h0) : 0.0;
  return xi_levels_[i - 1] + w * (xi_levels_[i] - xi_levels_[i - 1]);
}

double StoppingRule::barrier(double m) const {
  if (kind_ == Kind::HitLevelPair) return lower_;
  if (barrier_.empty()) return 0.0;
  return barrier_(m);
}

double StoppingRule::xi_survival(double s) const {
  if (kind_ != Kind::Perkins) {
    throw DomainError("xi survival exists only for the Perkins rule");
  }
  if (s <= x0_) return 1.0;
  if (s >= level_) return 0.0;
  if (s >= xi_levels_.back()) return std::exp(-xi_hazard_.back());
  auto it = std::upper_bound(xi_levels_.begin(), xi_levels_.end(), s);
  const auto i = static_cast<std::size_t>(it - xi_levels_.begin());
  const double w =
      (s - xi_levels_[i - 1]) / (xi_levels_[i] - xi_levels_[i - 1]);
  return std::exp(-(xi_hazard_[i - 1] +
                    w * (xi_hazard_[i] - xi_hazard_[i - 1])));
}

// ---- paths

namespace {

// Follows a path from x0 until it reaches level or falls to barrier(M).
// Returns the stopped value and updates m and the step count.
struct Walker {
  const PathConfig& cfg;
  PathEngine& rng;
  boost::random::normal_distribution<double> normal{0.0, 1.0};
  std::bernoulli_distribution coin{0.5};
  double sq;

  Walker(const PathConfig& c, PathEngine& g)
      : cfg(c), rng(g), sq(std::sqrt(c.dt)) {}

  template <class Barrier>
  double run(double x, double& m, double level, Barrier&& barrier,
             std::uint64_t& steps, bool& truncated) {
    const bool gaussian = cfg.scheme == IncrementScheme::Gaussian;
    const bool bridge = cfg.bridge && gaussian;
    const double dt = cfg.dt;
    double low = barrier(m);
    while (true) {
      if (steps >= cfg.max_steps) {
        truncated = true;
        return x;
      }
      ++steps;
      const double z = gaussian ? normal(rng) : (coin(rng) ? 1.0 : -1.0);
      const double xn = x + sq * z;
      // maximum over the step
      double top = std::max(x, xn);
      if (bridge) {
        const double thr = std::min(m, level);
        const double e = top < thr ? 2.0 * (thr - x) * (thr - xn) / dt : 0.0;
        if (e < kMaxExponent) {
          const double d = xn - x;
          top = 0.5 * (x + xn +
                       std::sqrt(d * d - 2.0 * dt * std::log(open_uniform(rng))));
        }
      }
      if (top >= level) {
        m = std::max(m, level);
        return level;
      }
      if (top > m) {
        m = top;
        low = barrier(m);
      }
      if (xn <= low) return low;
      if (bridge) {
        const double e = 2.0 * (x - low) * (xn - low) / dt;
        if (e < kMaxExponent && open_uniform(rng) <= std::exp(-e)) return low;
      }
      x = xn;
    }
  }
};

}  // namespace

PathResult simulate_path_until(const StoppingRule& rule, double x0,
                               const PathConfig& cfg, PathEngine& rng) {
  PathResult res;
  res.x_tau = x0;
  res.m_past = x0;
  Walker walk(cfg, rng);

  switch (rule.kind()) {
    case StoppingRule::Kind::Immediate:
      break;
    case StoppingRule::Kind::QuantileOracle: {
      const JointLaw& law = rule.oracle();
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      res.x_tau = law.marginal().quantile(unif(rng));
      res.m_past = law.mode() == RegretMode::Past ? law.max_of(res.x_tau)
                                                  : std::max(res.x_tau, x0);
      break;
    }
    default: {
      const double level = rule.draw_level(rng);
      double m = x0;
      res.x_tau = walk.run(
          x0, m, level, [&](double mm) { return rule.barrier(mm); },
          res.steps, res.truncated);
      res.m_past = m;
      break;
    }
  }

  if (!(res.x_tau > 0.0)) {
    res.x_tau = 0.0;
    res.m_future = 0.0;
  } else if (!cfg.simulate_future || res.truncated) {
    res.m_future = res.x_tau / open_uniform(rng);
  } else {
    const double cap = cfg.future_cap * std::max(res.x_tau, x0);
    double m = res.x_tau;
    bool cut = false;
    const double end = walk.run(
        res.x_tau, m, cap, [](double) { return 0.0; }, res.steps, cut);
    res.truncated = res.truncated || cut;
    // from the cap the rest of the maximum is exact
    res.m_future = end >= cap ? cap / open_uniform(rng) : m;
  }
  res.m_all = std::max(res.m_past, res.m_future);
  return res;
}

double ks_distance(std::vector<double>& xs, const EquilibriumCdf& g) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = g.eval(xs[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                  std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

double SimulationReport::truncation_rate() const {
  std::uint64_t t = 0;
  for (const auto& p : players) t += p.truncated;
  const double total = static_cast<double>(paths * players.size());
  return total > 0 ? static_cast<double>(t) / total : 0.0;
}

SimulationReport run_contest(const ContestSpec& spec,
                             const std::vector<StoppingRule>& rules,
                             const ContestOptions& opt) {
  spec.validate();
  opt.path.validate();
  if (rules.size() != static_cast<std::size_t>(spec.n)) {
    throw ParameterError("need one stopping rule per player");
  }
  if (opt.paths == 0) throw ParameterError("need at least one path");

  const std::size_t n = rules.size();
  std::vector<Mean> win(n), pay(n), stop(n), steps(n);
  std::vector<std::uint64_t> trunc(n, 0), off(n, 0);
  std::vector<std::vector<double>> stops(n);
  for (auto& s : stops) s.reserve(opt.paths);

  SimulationReport rep;
  rep.spec = spec;
  rep.config = opt.path;
  rep.paths = opt.paths;

  double eps = 0.0;
  if (opt.support_law) eps = opt.support_eps * opt.support_law->marginal().upper();

  std::vector<PathResult> res(n);
  std::vector<double> others(n - 1);
  for (std::uint64_t i = 0; i < opt.paths; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      PathEngine rng = path_engine(opt.path.seed, p, i);
      res[p] = simulate_path_until(rules[p], spec.x0, opt.path, rng);
    }
    if (rep.samples.size() < opt.keep_samples) rep.samples.push_back(res[0]);
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t k = 0;
      double best = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        if (q == p) continue;
        others[k++] = res[q].x_tau;
        best = std::max(best, res[q].x_tau);
      }
      double own_max = res[p].x_tau;
      switch (spec.mode) {
        case RegretMode::Future:
          own_max = res[p].m_future;
          break;
        case RegretMode::Past:
          own_max = res[p].m_past;
          break;
        case RegretMode::All:
          own_max = res[p].m_all;
          break;
        case RegretMode::None:
          break;
      }
      const double x = res[p].x_tau;
      pay[p].add(realized_payoff(spec, x, own_max, others));
      double share = 0.0;
      if (x > best) {
        share = 1.0;
      } else if (x == best) {
        share = 1.0 / static_cast<double>(
                          1 + std::count(others.begin(), others.end(), best));
      }
      win[p].add(share);
      stop[p].add(x);
      steps[p].add(static_cast<double>(res[p].steps));
      stops[p].push_back(x);
      if (res[p].truncated) ++trunc[p];
      if (opt.support_law && !opt.support_law->on_support(x, res[p].m_past, eps)) {
        ++off[p];
      }
    }
  }

  const double np = static_cast<double>(opt.paths);
  for (std::size_t p = 0; p < n; ++p) {
    PlayerStats s;
    s.rule = rules[p].name();
    s.win_probability = win[p].mean(np);
    s.win_se = win[p].se(np);
    s.mean_payoff = pay[p].mean(np);
    s.payoff_se = pay[p].se(np);
    s.mean_stop = stop[p].mean(np);
    s.stop_se = stop[p].se(np);
    s.truncated = trunc[p];
    s.mean_steps = steps[p].mean(np);
    s.off_support = static_cast<double>(off[p]) / np;
    s.ks_distance = rules[p].target()
                        ? ks_distance(stops[p], *rules[p].target())
                        : std::numeric_limits<double>::quiet_NaN();
    rep.players.push_back(s);
  }
  return rep;
}

}  // namespace gamble
