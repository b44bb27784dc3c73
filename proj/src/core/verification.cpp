#include "gamble/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gamble/errors.hpp"
#include "gamble/numerics.hpp"
#include "gamble/payoff.hpp"

namespace gamble {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> certificate_x_grid(std::size_t count, double x0,
                                       double r, double top) {
  std::vector<double> xs = numerics::linspace(0.0, top, count / 2);
  const std::size_t near = count / 8;
  for (std::size_t i = 0; i < 2 * near; ++i) {
    // geometric towards 0
    const double f = static_cast<double>(i) / static_cast<double>(2 * near);
    xs.push_back(x0 * std::pow(1e-12, 1.0 - f));
  }
  for (std::size_t i = 0; i < near; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(near);
    const double d = r * std::pow(1e-12, 1.0 - f) * 0.1;
    xs.push_back(r - d);
    xs.push_back(r + d);
  }
  xs.push_back(x0);
  xs.push_back(r);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double power_nm1(double v, int n) { return std::pow(v, n - 1); }

}  // namespace

// ---- integrand

LagrangianIntegrand::LagrangianIntegrand(const Equilibrium& c,
                                         std::optional<double> claimed)
    : mode_(c.spec.mode),
      n_(c.spec.n),
      x0_(c.spec.x0),
      K_(c.spec.penalty()),
      F_(c.cdf),
      past_(c.past),
      endpoint_(claimed ? *claimed : c.r()) {
  if (!(endpoint_ > x0_)) {
    throw ValidationError("claimed endpoint must exceed x0");
  }
  if (past_) {
    lambda_ = past_->psi_prime(x0_);
    gamma_ = past_->value() - x0_ * lambda_;
    value_ = past_->value();
    return;
  }
  const double slope = mode_ == RegretMode::All ? 1.0 + K_ : 1.0;
  lambda_ = slope / endpoint_;
  gamma_ = 0.0;
  value_ = lambda_ * x0_;
  if (mode_ == RegretMode::All) value_ -= K_ * hitting_tail(F_, n_, x0_);
}

double LagrangianIntegrand::operator()(double x) const {
  if (past_) throw DomainError("past-mode integrand needs (x, y)");
  if (x < 0.0) throw DomainError("integrand needs x >= 0");
  const double win = power_nm1(F_.eval(x), n_);
  switch (mode_) {
    case RegretMode::Future:
      return (1.0 + K_) * win - K_ * hitting_tail(F_, n_, x) - lambda_ * x -
             gamma_;
    case RegretMode::All:
      return (1.0 + K_) * win - lambda_ * x - gamma_;
    default:
      return win - lambda_ * x - gamma_;
  }
}

double LagrangianIntegrand::psi(double x) const {
  if (past_) return past_->psi_extended(x);
  return power_nm1(F_.eval(x), n_);
}

double LagrangianIntegrand::psi_prime(double y) const {
  if (!past_) throw DomainError("psi' is only used in past mode");
  if (y < x0_) throw DomainError("psi' is taken on [x0, r]");
  if (y > past_->r()) return 0.0;
  return past_->psi_prime(y);
}

double LagrangianIntegrand::eta(double y) const {
  if (!past_ || y <= x0_ || y >= past_->r()) return 0.0;
  return past_->psi_second(y);
}

double LagrangianIntegrand::past_value(double psi_x, double x, double y,
                                       double psi_y, double dpsi_y) const {
  if (y > endpoint_) return (1.0 + K_) * (psi_x - x / endpoint_);
  return (1.0 + K_) * (psi_x - psi_y) + (y - x) * dpsi_y;
}

double LagrangianIntegrand::operator()(double x, double y) const {
  if (!past_) return (*this)(x);
  if (x < 0.0 || y < x0_ || y < x) {
    throw DomainError("past-mode integrand needs y >= max(x, x0), x >= 0");
  }
  const double py = y > past_->r() ? 1.0 : past_->psi(y);
  const double dpy = psi_prime(y);
  return past_value(psi(x), x, y, py, dpy);
}

double lagrangian_integrand(const LagrangianIntegrand& L, double x,
                            double y) {
  return L.two_dimensional() ? L(x, y) : L(x);
}

// ---- certificate

LagrangianCertificate certify(const Equilibrium& candidate,
                              const CertifyOptions& opt) {
  const LagrangianIntegrand L(candidate, opt.claimed_endpoint);
  const double x0 = candidate.spec.x0;
  const double r = candidate.r();
  const double top = opt.extent * std::max(r, L.endpoint());

  LagrangianCertificate cert;
  cert.mode = candidate.spec.mode;
  cert.endpoint = L.endpoint();
  cert.value = L.value();
  cert.multipliers.lambda = L.lambda();
  cert.multipliers.gamma = L.gamma();
  cert.max_violation = kNegInf;

  const std::vector<double> xs =
      certificate_x_grid(opt.x_points, x0, r, top);

  auto note_violation = [&](double x, double y, double v) {
    if (v > cert.max_violation) cert.worst = {x, y, v};
    cert.max_violation = std::max(cert.max_violation, v);
  };
  auto note_active = [&](double x, double y, double v) {
    if (std::abs(v) > cert.active_set_residual) {
      cert.active_set_residual = std::abs(v);
      cert.worst_active = {x, y, v};
    }
  };

  if (L.two_dimensional()) {
    const auto& sol = *candidate.past;
    // y grid: squared spacing towards x0 where psi'' blows up
    std::vector<double> ys;
    const std::size_t inside = opt.y_points * 3 / 4;
    for (std::size_t j = 0; j <= inside; ++j) {
      const double s = static_cast<double>(j) / static_cast<double>(inside);
      ys.push_back(x0 + (r - x0) * s * s);
    }
    const std::size_t outside = opt.y_points - inside;
    for (std::size_t j = 1; j <= outside; ++j) {
      ys.push_back(r + (top - r) * static_cast<double>(j) /
                           static_cast<double>(outside));
    }
    if (L.endpoint() > r) ys.push_back(L.endpoint());
    std::sort(ys.begin(), ys.end());

    std::vector<double> psi_x(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) psi_x[i] = L.psi(xs[i]);

    for (double y : ys) {
      const double py = y >= r ? 1.0 : sol.psi(y);
      const double dpy = L.psi_prime(y);
      if (y > x0 && y < r) cert.multipliers.eta.emplace_back(y, L.eta(y));
      for (std::size_t i = 0; i < xs.size() && xs[i] <= y; ++i) {
        note_violation(xs[i], y, L.past_value(psi_x[i], xs[i], y, py, dpy));
        ++cert.grid_size;
      }
      if (y <= r) {
        note_active(y, y, L(y, y));
        const double lo = std::min(sol.phi(y), y);
        note_active(lo, y, L(lo, y));
      }
    }
    std::function<double(double)> phi = [&sol](double m) {
      return sol.phi(m);
    };
    for (int k = 1; k <= 50; ++k) {
      const double z = x0 + (r - x0) * k / 51.0;
      cert.doob_residual = std::max(
          cert.doob_residual,
          std::abs(doob_residual(candidate.cdf, x0, z, phi)));
    }
  } else {
    for (double x : xs) {
      const double v = L(x);
      note_violation(x, x, v);
      if (x <= r) note_active(x, x, v);
      ++cert.grid_size;
    }
    if (candidate.spec.mode == RegretMode::Past) {
      std::function<double(double)> phi = [&](double m) {
        return minimal_lower(candidate.cdf, x0, m);
      };
      for (int k = 1; k <= 50; ++k) {
        const double z = x0 + (r - x0) * k / 51.0;
        cert.doob_residual = std::max(
            cert.doob_residual,
            std::abs(doob_residual(candidate.cdf, x0, z, phi)));
      }
    }
  }
  cert.mean_residual = std::abs(candidate.cdf.mean() - x0);

  std::ostringstream why;
  why.precision(10);
  if (cert.max_violation > opt.tolerance) {
    why << "Lagrangian positive at x = " << cert.worst.x;
    if (L.two_dimensional()) why << ", y = " << cert.worst.y;
    why << ": " << cert.worst.value;
  } else if (cert.active_set_residual > opt.active_tolerance) {
    why << "Lagrangian not zero on the support at x = "
        << cert.worst_active.x << ", y = " << cert.worst_active.y << ": "
        << cert.worst_active.value;
  } else if (cert.mean_residual > 1e-6) {
    why << "mean differs from x0 by " << cert.mean_residual;
  } else if (cert.doob_residual > 1e-6) {
    why << "Doob residual " << cert.doob_residual;
  }
  cert.failure = why.str();
  cert.passed = cert.failure.empty();
  return cert;
}

// ---- system (dagger) residuals

SystemResiduals system_residuals(const PastRegretSolution& sol,
                                 std::size_t points) {
  const double x0 = sol.spec().x0;
  const double r = sol.r();
  const double K = sol.spec().K;
  const int n = sol.spec().n;
  const double q = 1.0 / (n - 1);
  auto psi = [&](double y) { return sol.psi(y); };
  auto phi = [&](double y) { return sol.phi(y); };
  auto theta = [&](double y) { return sol.theta(y); };

  SystemResiduals out;
  out.points = points;
  for (std::size_t i = 0; i < points; ++i) {
    const double y = x0 + (r - x0) * (static_cast<double>(i) + 0.5) /
                              static_cast<double>(points);
    const double h = std::min(y - x0, r - y) / 10.0;
    const double d1 = numerics::ridders_derivative(psi, y, h, 1);
    const double d2 = numerics::ridders_derivative(psi, y, h, 2);
    const double dphi = numerics::ridders_derivative(phi, y, h, 1);
    const double dtheta = numerics::ridders_derivative(theta, y, h, 1);
    const double ps = sol.psi(y);
    const double ph = sol.phi(y);
    const double th = sol.theta(y);

    out.eq1 = std::max(out.eq1, std::abs(dphi * d1 - (1.0 + K) * dtheta));
    out.eq2 = std::max(out.eq2, std::abs(K * d1 - (y - ph) * d2));
    const double rhs3 =
        (std::pow(ps, q) - 1.0) * std::pow(th, (n - 2) * q) - th;
    out.eq3 = std::max(out.eq3, std::abs((y - ph) * q * dtheta - rhs3));

    const double theta_fd = ps - K / (K + 1.0) * d1 * d1 / d2;
    const double j = sol.trajectory().J_of_u(1.0 - ps);
    out.theta_identity =
        std::max(out.theta_identity, std::abs(theta_fd - std::pow(j, n - 1)));

    // phi = Psi(z) - (K+1)(z - J(1-z)^{n-1}) Psi'(z) at z = psi(y)
    const double phi_a =
        y - (K + 1.0) * (ps - std::pow(j, n - 1)) * sol.Psi_prime(ps);
    const double phi_b = y - K * d1 / d2;
    out.phi_identity = std::max(
        {out.phi_identity, std::abs(ph - phi_a), std::abs(ph - phi_b)});
  }
  return out;
}

double BoundaryCheck::error() const { return std::abs(computed - expected); }

std::vector<BoundaryCheck> boundary_checks(const PastRegretSolution& sol) {
  const double x0 = sol.spec().x0;
  const double r = sol.r();
  const double K = sol.spec().K;
  const double h = 1e-3 * (r - x0);
  auto psi = [&](double y) { return sol.psi(y); };
  // second-order one-sided stencils at r
  const double f0 = psi(r);
  const double f1 = psi(r - h);
  const double f2 = psi(r - 2 * h);
  const double f3 = psi(r - 3 * h);
  const double d1 = (3 * f0 - 4 * f1 + f2) / (2 * h);
  const double d2 = (2 * f0 - 5 * f1 + 4 * f2 - f3) / (h * h);

  const double zs = sol.z_star();
  const double hz = 1e-3 * (1.0 - zs);
  auto Psi = [&](double z) { return sol.Psi(z); };
  const double P2 =
      (2 * Psi(1.0) - 5 * Psi(1.0 - hz) + 4 * Psi(1.0 - 2 * hz) -
       Psi(1.0 - 3 * hz)) /
      (hz * hz);

  return {
      {"psi(r)", f0, 1.0},
      {"psi'(r-)", d1, (K + 1.0) / r},
      {"psi''(r-)", d2, K * (K + 1.0) / (r * r)},
      {"phi(x0)", sol.phi(x0), x0},
      {"phi(r)", sol.phi(r), 0.0},
      {"theta(r)", sol.theta(r), 0.0},
      {"theta(x0)", sol.theta(x0), sol.psi(x0)},
      {"Psi(z*)", sol.Psi(zs), x0},
      {"Psi(1)", sol.Psi(1.0), r},
      {"Psi'(1-)", sol.Psi_prime(1.0), r / (K + 1.0)},
      {"Psi''(1-)", P2, -r * K / ((K + 1.0) * (K + 1.0))},
      {"H(1)", sol.H(1.0), K / (K + 1.0)},
      {"G(0)", sol.cdf(0.0), 0.0},
  };
}

// ---- best response

std::vector<Deviation> beta_deviation_family(double x0) {
  static constexpr double kShapes[20][2] = {
      {0.5, 0.5}, {0.5, 1.0}, {0.5, 2.0}, {1.0, 0.5}, {1.0, 1.0},
      {1.0, 2.0}, {1.0, 4.0}, {2.0, 0.5}, {2.0, 1.0}, {2.0, 2.0},
      {2.0, 5.0}, {3.0, 3.0}, {4.0, 1.0}, {4.0, 8.0}, {5.0, 2.0},
      {6.0, 6.0}, {8.0, 4.0}, {10.0, 10.0}, {0.8, 3.0}, {200.0, 200.0}};
  std::vector<Deviation> out;
  for (const auto& s : kShapes) {
    std::ostringstream name;
    name << "beta(" << s[0] << "," << s[1] << ")";
    out.push_back({name.str(),
                   EquilibriumCdf(std::make_shared<ScaledBetaCdf>(
                       ScaledBetaCdf::with_mean(x0, s[0], s[1])))});
  }
  return out;
}

double deviation_payoff(const Equilibrium& eq, const EquilibriumCdf& dev) {
  const double x0 = eq.spec.x0;
  switch (eq.spec.mode) {
    case RegretMode::None:
      return expected_payoff(eq.spec, JointLaw::stopped_only(dev, x0),
                             eq.cdf);
    case RegretMode::Future:
      return expected_payoff(eq.spec, JointLaw::future_kernel(dev, x0),
                             eq.cdf);
    case RegretMode::All:
      return expected_payoff(eq.spec, JointLaw::whole_path(dev, x0), eq.cdf);
    case RegretMode::Past:
      break;
  }
  auto law = JointLaw::past_map(
      dev, x0, [dev, x0](double x) { return minimal_max(dev, x0, x); },
      [dev, x0](double m) { return minimal_lower(dev, x0, m); });
  return expected_payoff(eq.spec, law, eq.cdf);
}

BestResponseResult best_response_gap(const Equilibrium& eq,
                                     const std::vector<Deviation>& devs) {
  BestResponseResult out;
  out.equilibrium_payoff = expected_payoff(eq.spec, eq.law, eq.cdf);
  out.gap = kNegInf;
  for (const auto& d : devs) {
    const double m = d.cdf.mean();
    if (std::abs(m - eq.spec.x0) > 1e-8 * std::max(1.0, eq.spec.x0)) {
      throw ValidationError("deviation " + d.name + " has mean " +
                            std::to_string(m) + ", not x0");
    }
    const double pay = deviation_payoff(eq, d.cdf);
    out.payoffs.push_back(pay);
    if (pay - out.equilibrium_payoff > out.gap) {
      out.gap = pay - out.equilibrium_payoff;
      out.worst = d.name;
    }
  }
  return out;
}

}  // namespace gamble
