#include "gamble/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gamble/errors.hpp"
#include "gamble/numerics.hpp"

namespace gamble::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// NaN and inf have no JSON spelling; store them as null
nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double parse_field(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad number '" + s + "' on line " +
                          std::to_string(line));
  }
}

// relative error with a unit floor; both NaN or equal infinities count as 0
double mismatch(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return a == b ? 0.0 : kInf;
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<TableRow> solution_table(const Equilibrium& eq,
                                     std::size_t points) {
  if (points < 2) throw ParameterError("table needs at least two points");
  std::vector<double> xs = numerics::linspace(0.0, eq.r(), points);
  xs.push_back(eq.spec.x0);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<TableRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    rows.push_back({x, eq.cdf.eval(x), eq.cdf.density(x), eq.max_of(x)});
  }
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "x,G,g,M\n";
  for (const auto& r : rows) {
    out << format_number(r.x) << ',' << format_number(r.G) << ','
        << format_number(r.g) << ',' << format_number(r.M) << '\n';
  }
}

std::vector<TableRow> read_table_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,G,g,M") {
    throw ValidationError("table must start with the header x,G,g,M");
  }
  std::vector<TableRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 4) {
      throw ValidationError("expected 4 fields on line " + std::to_string(n));
    }
    rows.push_back({parse_field(f[0], n), parse_field(f[1], n),
                    parse_field(f[2], n), parse_field(f[3], n)});
  }
  if (rows.size() < 2) throw ValidationError("table has fewer than two rows");
  return rows;
}

void write_quantile_csv(std::ostream& out, const Equilibrium& eq,
                        std::size_t points) {
  out << "p,x\n";
  for (double p : numerics::linspace(0.0, 1.0, points)) {
    out << format_number(p) << ',' << format_number(eq.cdf.quantile(p)) << '\n';
  }
}

void write_samples_csv(std::ostream& out, const std::vector<PathResult>& rows,
                       std::size_t max_rows) {
  out << "x_tau,m_past,m_future,m_all,steps,truncated\n";
  const std::size_t count = std::min(rows.size(), max_rows);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& r = rows[i];
    out << format_number(r.x_tau) << ',' << format_number(r.m_past) << ','
        << format_number(r.m_future) << ',' << format_number(r.m_all) << ','
        << r.steps << ',' << (r.truncated ? 1 : 0) << '\n';
  }
}

nlohmann::json to_json(const ContestSpec& spec) {
  nlohmann::json j;
  j["mode"] = std::string(to_string(spec.mode));
  j["n"] = spec.n;
  j["x0"] = spec.x0;
  j["K"] = spec.K;
  j["K2"] = spec.K2 ? nlohmann::json(*spec.K2) : nlohmann::json(nullptr);
  return j;
}

ContestSpec spec_from_json(const nlohmann::json& j) {
  try {
    ContestSpec s;
    s.mode = parse_regret_mode(j.at("mode").get<std::string>());
    s.n = j.at("n").get<int>();
    s.x0 = j.at("x0").get<double>();
    s.K = j.at("K").get<double>();
    if (j.contains("K2") && !j["K2"].is_null()) s.K2 = j["K2"].get<double>();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad contest spec: ") + e.what());
  }
}

nlohmann::json solution_header(const Equilibrium& eq) {
  nlohmann::json j;
  j["spec"] = to_json(eq.spec);
  j["r"] = eq.r();
  j["value"] = eq.value;
  j["mean"] = eq.cdf.mean();
  if (eq.closed) {
    j["effective_n"] = eq.closed->effective_n;
    j["lambda"] = eq.closed->lambda();
  }
  if (eq.past) {
    j["z_star"] = eq.past->z_star();
    j["u_star"] = eq.past->u_star();
    j["psi_x0"] = eq.past->psi(eq.spec.x0);
    j["G_x0"] = eq.past->cdf_at_x0();
  }
  return j;
}

nlohmann::json to_json(const LagrangianCertificate& c) {
  nlohmann::json eta = nlohmann::json::array();
  for (const auto& [y, v] : c.multipliers.eta) eta.push_back({y, number(v)});
  auto point = [](const GridPoint& p) {
    return nlohmann::json{{"x", p.x}, {"y", p.y}, {"value", number(p.value)}};
  };
  return {
      {"mode", std::string(to_string(c.mode))},
      {"multipliers",
       {{"lambda", c.multipliers.lambda},
        {"gamma", c.multipliers.gamma},
        {"eta", eta}}},
      {"endpoint", c.endpoint},
      {"value", c.value},
      {"grid_size", c.grid_size},
      {"max_violation", number(c.max_violation)},
      {"worst", point(c.worst)},
      {"active_set_residual", number(c.active_set_residual)},
      {"worst_active", point(c.worst_active)},
      {"mean_residual", number(c.mean_residual)},
      {"doob_residual", number(c.doob_residual)},
      {"passed", c.passed},
      {"failure", c.failure},
  };
}

nlohmann::json to_json(const SimulationReport& r) {
  nlohmann::json players = nlohmann::json::array();
  for (const auto& p : r.players) {
    players.push_back({
        {"rule", p.rule},
        {"win_probability", p.win_probability},
        {"win_se", p.win_se},
        {"mean_payoff", p.mean_payoff},
        {"payoff_se", p.payoff_se},
        {"mean_stop", p.mean_stop},
        {"stop_se", p.stop_se},
        {"ks_distance", number(p.ks_distance)},
        {"off_support", p.off_support},
        {"truncated", p.truncated},
        {"mean_steps", p.mean_steps},
    });
  }
  const auto& c = r.config;
  return {
      {"spec", to_json(r.spec)},
      {"config",
       {{"dt", c.dt},
        {"max_steps", c.max_steps},
        {"seed", c.seed},
        {"scheme", c.scheme == IncrementScheme::Gaussian ? "gaussian"
                                                         : "random-walk"},
        {"bridge", c.bridge},
        {"simulate_future", c.simulate_future},
        {"future_cap", c.future_cap}}},
      {"paths", r.paths},
      {"truncation_rate", r.truncation_rate()},
      {"players", players},
  };
}

SolutionCheck check_solution(const nlohmann::json& header,
                             const std::vector<TableRow>& rows,
                             const CertifyOptions& options,
                             double table_tolerance) {
  SolutionCheck out;
  if (!header.contains("spec") || !header.contains("r")) {
    throw ValidationError("solution header needs spec and r");
  }
  const ContestSpec spec = spec_from_json(header["spec"]);
  const double r = header["r"].get<double>();
  const Equilibrium eq = solve_equilibrium(spec);

  out.endpoint_error = std::abs(r - eq.r()) / eq.r();
  for (const auto& row : rows) {
    // the printed endpoint may round past r
    const double x =
        row.x > eq.r() && row.x <= eq.r() * (1.0 + 1e-10) ? eq.r() : row.x;
    const double e = std::max({mismatch(row.G, eq.cdf.eval(x)),
                               mismatch(row.g, eq.cdf.density(x)),
                               mismatch(row.M, eq.max_of(x))});
    if (!(e <= out.table_error)) {
      out.table_error = e;
      out.worst_row = row;
    }
  }

  CertifyOptions opt = options;
  opt.claimed_endpoint = r;
  out.certificate = certify(eq, opt);

  if (!(out.endpoint_error <= table_tolerance)) {
    out.failure = "stored endpoint r = " + format_number(r) +
                  " differs from the solved r = " + format_number(eq.r());
  } else if (!(out.table_error <= table_tolerance)) {
    out.failure = "table row x = " + format_number(out.worst_row.x) +
                  " is off by " + format_number(out.table_error);
  } else if (!out.certificate.passed) {
    out.failure = out.certificate.failure;
  }
  out.passed = out.failure.empty();
  return out;
}

}  // namespace gamble::io
