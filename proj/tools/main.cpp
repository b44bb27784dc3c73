// gamble: solve, certify, simulate and plot contest equilibria.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "support.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using cli::ContestArgs;
using cli::Failure;
using nlohmann::json;

namespace {

void add_contest_flags(CLI::App& cmd, ContestArgs& a, bool k_list) {
  cmd.add_option("--mode", a.mode, "Regret mode: none, future, past or all")
      ->check(CLI::IsMember({"none", "future", "past", "all"}));
  cmd.add_option("--n", a.n, "Number of players")->check(CLI::Range(2, 1000));
  cmd.add_option("--x0", a.x0, "Common starting value")
      ->check(CLI::PositiveNumber);
  auto* k = cmd.add_option("--K", a.K,
                           k_list ? "Regret penalty; comma list for sweeps"
                                  : "Regret penalty");
  k->delimiter(',')->check(CLI::NonNegativeNumber);
  cmd.add_option("--K2", a.K2,
                 "Penalty when the best opponent ties the maximum "
                 "(negative: K/2)");
}

std::string stem_for(const ContestArgs& a, double k, const std::string& name,
                     bool many) {
  if (!name.empty()) {
    return many ? name + "_K" + cli::short_number(k) : name;
  }
  return a.mode + "_n" + std::to_string(a.n) + "_x0" +
         cli::short_number(a.x0) + "_K" + cli::short_number(k);
}

// ---- solve

struct SolveArgs {
  ContestArgs contest;
  std::size_t points = 1001;
  std::size_t quantiles = 0;
  std::string out = cli::default_out_dir();
  std::string name;
};

int run_solve(const SolveArgs& a) {
  const fs::path dir(a.out);
  for (double k : a.contest.K) {
    cli::Manifest manifest("solve", {{"contest", a.contest.to_json()},
                                     {"K", k},
                                     {"points", a.points},
                                     {"quantiles", a.quantiles}});
    auto eq = cli::solve(a.contest.spec(k));
    const std::string stem =
        stem_for(a.contest, k, a.name, a.contest.K.size() > 1);
    fs::create_directories(dir);

    const fs::path csv = dir / (stem + ".csv");
    cli::check(gamble_export_table(eq.get(), a.points, csv.c_str()), "export");
    manifest.add_output(csv);

    const json header = cli::fetch_json(
        [&](char* b, std::size_t c, std::size_t* n) {
          return gamble_equilibrium_header(eq.get(), b, c, n);
        },
        "header");
    const fs::path hdr = dir / (stem + ".json");
    cli::write_json(hdr, header);
    manifest.add_output(hdr);

    if (a.quantiles > 0) {
      const fs::path q = dir / (stem + "_quantiles.csv");
      cli::check(gamble_export_quantiles(eq.get(), a.quantiles, q.c_str()),
                 "quantiles");
      manifest.add_output(q);
    }
    manifest.write(dir / (stem + ".manifest.json"));

    gamble_info info;
    cli::check(gamble_equilibrium_info(eq.get(), &info), "info");
    std::printf("%s n=%d x0=%g K=%g  r=%.12g  value=%.12g  -> %s\n",
                a.contest.mode.c_str(), a.contest.n, a.contest.x0, k, info.r,
                info.value, csv.c_str());
  }
  return cli::kOk;
}

// ---- verify

struct VerifyArgs {
  ContestArgs contest;
  std::string solution;
  std::string header;
  gamble_certify_options cert = gamble_certify_options_default();
  bool best_response = true;
  double gap_tolerance = 1e-8;
  std::string out = cli::default_out_dir();
  std::string name;
};

json certify_params(const gamble_certify_options& c) {
  return {{"x_points", c.x_points},   {"y_points", c.y_points},
          {"extent", c.extent},       {"tolerance", c.tolerance},
          {"active_tolerance", c.active_tolerance},
          {"claimed_endpoint", c.claimed_endpoint}};
}

json certificate_json(const gamble_certificate* cert) {
  return cli::fetch_json(
      [&](char* b, std::size_t c, std::size_t* n) {
        return gamble_certificate_json(cert, b, c, n);
      },
      "certificate");
}

int run_verify_file(const VerifyArgs& a) {
  const fs::path csv(a.solution);
  fs::path hdr = a.header.empty() ? fs::path(csv).replace_extension(".json")
                                  : fs::path(a.header);
  cli::Manifest manifest("verify", {{"solution", csv.string()},
                                    {"header", hdr.string()},
                                    {"certify", certify_params(a.cert)}});
  gamble_certificate* raw = nullptr;
  cli::check(gamble_verify_solution(csv.c_str(), hdr.c_str(), &a.cert, &raw),
             "verify " + csv.string());
  cli::CertificatePtr cert(raw);
  int passed = 0;
  cli::check(gamble_certificate_passed(cert.get(), &passed), "certificate");
  const json j = certificate_json(cert.get());

  const std::string stem = a.name.empty() ? csv.stem().string() : a.name;
  const fs::path dir(a.out);
  const fs::path out = dir / (stem + ".certificate.json");
  cli::write_json(out, j);
  manifest.add_output(out);
  manifest.write(dir / (stem + ".verify.manifest.json"));

  if (passed) {
    std::printf("PASS %s\n", csv.c_str());
    return cli::kOk;
  }
  std::printf("FAIL %s: %s\n", csv.c_str(),
              j.value("failure", std::string("unknown")).c_str());
  return cli::kFailed;
}

int run_verify(const VerifyArgs& a) {
  if (!a.solution.empty()) return run_verify_file(a);
  const fs::path dir(a.out);
  bool all = true;
  for (double k : a.contest.K) {
    cli::Manifest manifest("verify", {{"contest", a.contest.to_json()},
                                      {"K", k},
                                      {"certify", certify_params(a.cert)},
                                      {"best_response", a.best_response},
                                      {"gap_tolerance", a.gap_tolerance}});
    auto eq = cli::solve(a.contest.spec(k));
    gamble_certificate* raw = nullptr;
    cli::check(gamble_certify(eq.get(), &a.cert, &raw), "certify");
    cli::CertificatePtr cert(raw);
    json j = certificate_json(cert.get());
    bool passed = j.at("passed").get<bool>();
    std::string failure = j.value("failure", std::string());
    if (a.best_response) {
      double gap = 0.0;
      cli::check(gamble_best_response_gap(eq.get(), &gap), "best response");
      j["best_response_gap"] = gap;
      if (!(gap <= a.gap_tolerance)) {
        passed = false;
        failure = "a deviation gains " + cli::short_number(gap);
      }
    }
    j["accepted"] = passed;

    const std::string stem =
        stem_for(a.contest, k, a.name, a.contest.K.size() > 1);
    const fs::path out = dir / (stem + ".certificate.json");
    cli::write_json(out, j);
    manifest.add_output(out);
    manifest.write(dir / (stem + ".verify.manifest.json"));

    std::printf("%s %s n=%d K=%g  max_violation=%.3g  active=%.3g", passed ? "PASS" : "FAIL",
                a.contest.mode.c_str(), a.contest.n, k,
                j["max_violation"].is_null() ? NAN : j["max_violation"].get<double>(),
                j["active_set_residual"].is_null()
                    ? NAN
                    : j["active_set_residual"].get<double>());
    if (a.best_response) {
      std::printf("  gap=%.3g", j["best_response_gap"].get<double>());
    }
    if (!passed) std::printf("  (%s)", failure.c_str());
    std::printf("\n");
    all = all && passed;
  }
  return all ? cli::kOk : cli::kFailed;
}

// ---- simulate

struct SimulateArgs {
  ContestArgs contest;
  gamble_sim_options sim = gamble_sim_options_default();
  std::string scheme = "gaussian";
  bool no_bridge = false;
  std::string rule = "embed";
  std::string deviator;
  std::size_t samples = 0;
  std::string out = cli::default_out_dir();
  std::string name;
};

const std::map<std::string, gamble_rule> kRules{
    {"embed", GAMBLE_RULE_EMBED},         {"azema-yor", GAMBLE_RULE_AZEMA_YOR},
    {"perkins", GAMBLE_RULE_PERKINS},     {"oracle", GAMBLE_RULE_ORACLE},
    {"immediate", GAMBLE_RULE_IMMEDIATE}, {"absorption", GAMBLE_RULE_ABSORPTION}};

int run_simulate(SimulateArgs a) {
  if (a.contest.K.size() != 1) {
    throw Failure(cli::kUsage, "simulate takes a single --K");
  }
  const double k = a.contest.K.front();
  a.sim.random_walk = a.scheme == "walk" ? 1 : 0;
  a.sim.bridge = a.no_bridge ? 0 : 1;
  a.sim.rule = kRules.at(a.rule);
  a.sim.deviator = kRules.at(a.deviator.empty() ? a.rule : a.deviator);
  a.sim.keep_samples = a.samples;

  cli::Manifest manifest(
      "simulate",
      {{"contest", a.contest.to_json()},
       {"K", k},
       {"paths", a.sim.paths},
       {"dt", a.sim.dt},
       {"max_steps", a.sim.max_steps},
       {"scheme", a.scheme},
       {"bridge", !a.no_bridge},
       {"simulate_future", a.sim.simulate_future != 0},
       {"future_cap", a.sim.future_cap},
       {"rule", a.rule},
       {"deviator", a.deviator.empty() ? a.rule : a.deviator},
       {"support_eps", a.sim.support_eps},
       {"samples", a.samples}});
  manifest.set_seed(a.sim.seed);

  auto eq = cli::solve(a.contest.spec(k));
  gamble_report* raw = nullptr;
  cli::check(gamble_simulate(eq.get(), &a.sim, &raw), "simulate");
  cli::ReportPtr report(raw);
  json j = cli::fetch_json(
      [&](char* b, std::size_t c, std::size_t* n) {
        return gamble_report_json(report.get(), b, c, n);
      },
      "report");

  // acceptance: few truncated paths and, when everyone plays the same rule,
  // each win probability within 3 standard errors of 1/n
  const double trunc = j["truncation_rate"].get<double>();
  bool passed = trunc < 1e-3;
  std::string failure = passed ? "" : "truncation rate " + cli::short_number(trunc);
  const bool symmetric = a.sim.rule == a.sim.deviator;
  for (auto& p : j["players"]) {
    const double w = p["win_probability"].get<double>();
    const double se = p["win_se"].get<double>();
    if (symmetric && std::abs(w - 1.0 / a.contest.n) > 3.0 * se) {
      passed = false;
      failure = "win probability " + cli::short_number(w) + " is more than 3 SE from 1/n";
    }
  }
  j["accepted"] = passed;
  j["symmetric"] = symmetric;
  if (!failure.empty()) j["failure"] = failure;

  const std::string stem = stem_for(a.contest, k, a.name, false) + "_seed" +
                           std::to_string(a.sim.seed);
  const fs::path dir(a.out);
  const fs::path out = dir / (stem + ".report.json");
  cli::write_json(out, j);
  manifest.add_output(out);
  if (a.samples > 0) {
    const fs::path s = dir / (stem + ".samples.csv");
    cli::check(gamble_report_samples(report.get(), s.c_str()), "samples");
    manifest.add_output(s);
  }
  manifest.write(dir / (stem + ".simulate.manifest.json"));

  std::size_t i = 0;
  for (const auto& p : j["players"]) {
    std::printf("player %zu (%s): win %.4f +- %.4f  payoff %.4f +- %.4f  KS %s\n", i++,
                p["rule"].get<std::string>().c_str(),
                p["win_probability"].get<double>(), p["win_se"].get<double>(),
                p["mean_payoff"].get<double>(), p["payoff_se"].get<double>(),
                p["ks_distance"].is_null() ? "-" : cli::short_number(p["ks_distance"].get<double>()).c_str());
  }
  std::printf("%s  truncation rate %g  -> %s\n", passed ? "PASS" : "FAIL", trunc,
              out.c_str());
  if (!passed) std::printf("  (%s)\n", failure.c_str());
  return passed ? cli::kOk : cli::kFailed;
}

// ---- plot

struct PlotArgs {
  ContestArgs contest;
  std::size_t points = 801;
  double density_cap = 3.0;
  std::string out = cli::default_out_dir();
  std::string name;
};

int run_plot(const PlotArgs& a) {
  if (a.contest.K.empty()) throw Failure(cli::kUsage, "--K list is empty");
  if (a.points < 10) throw Failure(cli::kUsage, "--points must be at least 10");
  cli::Manifest manifest("plot", {{"contest", a.contest.to_json()},
                                  {"points", a.points},
                                  {"density_cap", a.density_cap}});
  const double x0 = a.contest.x0;
  const double h = 1e-9 * x0;

  std::vector<cli::EquilibriumPtr> eqs;
  std::vector<double> rs;
  for (double k : a.contest.K) {
    eqs.push_back(cli::solve(a.contest.spec(k)));
    gamble_info info;
    cli::check(gamble_equilibrium_info(eqs.back().get(), &info), "info");
    rs.push_back(info.r);
  }
  ContestArgs plain = a.contest;
  plain.mode = "none";
  auto reference = cli::solve(plain.spec(0.0));
  double top = 0.0;
  for (double r : rs) top = std::max(top, r);
  gamble_info ref_info;
  cli::check(gamble_equilibrium_info(reference.get(), &ref_info), "info");
  top = std::max(top, ref_info.r);

  // grid with both one-sided limits at x0 so a jump shows as a step
  std::vector<double> xs;
  for (std::size_t i = 0; i < a.points; ++i) {
    const double x = top * static_cast<double>(i) / static_cast<double>(a.points - 1);
    if (std::abs(x - x0) > 2 * h) xs.push_back(x);
  }
  xs.push_back(x0 - h);
  xs.push_back(x0 + h);
  std::sort(xs.begin(), xs.end());

  auto sample = [&](const gamble_equilibrium* eq, bool density) {
    std::vector<std::pair<double, double>> pts;
    for (double x : xs) {
      double v = 0.0;
      if (density) {
        cli::check(gamble_density(eq, std::max(x, 1e-12 * x0), &v), "density");
      } else {
        cli::check(gamble_cdf(eq, x, &v), "cdf");
      }
      pts.emplace_back(x, density ? std::min(v, a.density_cap) : v);
    }
    return pts;
  };

  std::vector<cli::Series> cdfs, dens;
  json summary = json::array();
  std::string table = "K,r,value,G_x0,g_left,g_right\n";
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const std::string label = "K = " + cli::short_number(a.contest.K[i]);
    cdfs.push_back({label, sample(eqs[i].get(), false)});
    dens.push_back({label, sample(eqs[i].get(), true)});
    gamble_info info;
    cli::check(gamble_equilibrium_info(eqs[i].get(), &info), "info");
    double gl = 0.0, gr = 0.0;
    cli::check(gamble_density(eqs[i].get(), x0 - h, &gl), "density");
    cli::check(gamble_density(eqs[i].get(), x0 + h, &gr), "density");
    char line[256];
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  a.contest.K[i], info.r, info.value, info.cdf_x0, gl, gr);
    table += line;
    std::printf("K=%-8g r=%.10f  g(x0-)=%.6f  g(x0+)=%.6f\n", a.contest.K[i],
                info.r, gl, gr);
  }
  cdfs.push_back({"no regret", sample(reference.get(), false), true});
  dens.push_back({"no regret", sample(reference.get(), true), true});

  const std::string stem =
      a.name.empty() ? a.contest.mode + "_n" + std::to_string(a.contest.n) +
                           "_x0" + cli::short_number(x0)
                     : a.name;
  const fs::path dir(a.out);
  const std::string who = "n = " + std::to_string(a.contest.n) +
                          ", x0 = " + cli::short_number(x0) + ", " +
                          a.contest.mode + " regret";
  const fs::path cdf_svg = dir / (stem + "_cdf.svg");
  cli::write_text(cdf_svg, cli::line_chart("Equilibrium CDF G*(x), " + who,
                                           "x", "G*(x)", cdfs, 0.0, top, 0.0,
                                           1.0));
  const fs::path den_svg = dir / (stem + "_density.svg");
  cli::write_text(den_svg,
                  cli::line_chart("Equilibrium density g*(x), " + who +
                                      " (clipped at " +
                                      cli::short_number(a.density_cap) + ")",
                                  "x", "g*(x)", dens, 0.0, top, 0.0,
                                  a.density_cap));
  const fs::path csv = dir / (stem + "_endpoints.csv");
  cli::write_text(csv, table);
  for (const auto& p : {cdf_svg, den_svg, csv}) manifest.add_output(p);
  manifest.write(dir / (stem + ".plot.manifest.json"));
  std::printf("-> %s, %s\n", cdf_svg.c_str(), den_svg.c_str());
  return cli::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria of n-player Brownian gambling contests with regret"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gamble_version()));

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve for the equilibrium and write its tables");
  add_contest_flags(*s, solve.contest, true);
  s->add_option("--points", solve.points, "Grid points on [0, r]")
      ->check(CLI::Range(2, 10'000'000));
  s->add_option("--quantiles", solve.quantiles, "Rows of the quantile table (0: none)");
  s->add_option("--out", solve.out, "Output directory (default $GAMBLE_OUT_DIR or .)");
  s->add_option("--name", solve.name, "File stem instead of the generated one");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Certify an equilibrium or a stored solution");
  add_contest_flags(*v, verify.contest, true);
  v->add_option("--solution", verify.solution, "Stored x,G,g,M table to check");
  v->add_option("--header", verify.header, "JSON header of the table (default: <solution>.json)");
  v->add_option("--x-points", verify.cert.x_points, "Certificate grid points in x");
  v->add_option("--y-points", verify.cert.y_points, "Certificate grid points in y (past mode)");
  v->add_option("--extent", verify.cert.extent, "Grid reaches this multiple of r");
  v->add_option("--tol", verify.cert.tolerance, "Largest allowed Lagrangian value");
  v->add_option("--active-tol", verify.cert.active_tolerance, "Largest allowed residual on the support");
  v->add_option("--claimed-r", verify.cert.claimed_endpoint, "Certify at this endpoint instead (0: solved r)");
  v->add_flag("!--no-best-response", verify.best_response, "Skip the beta deviation check");
  v->add_option("--gap-tol", verify.gap_tolerance, "Largest allowed deviation gain");
  v->add_option("--out", verify.out, "Output directory (default $GAMBLE_OUT_DIR or .)");
  v->add_option("--name", verify.name, "File stem instead of the generated one");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "Simulate the contest on Brownian paths");
  add_contest_flags(*m, sim.contest, false);
  m->add_option("--paths", sim.sim.paths, "Number of contests")->check(CLI::PositiveNumber);
  m->add_option("--dt", sim.sim.dt, "Time step")->check(CLI::PositiveNumber);
  m->add_option("--seed", sim.sim.seed, "Random seed");
  m->add_option("--max-steps", sim.sim.max_steps, "Steps per path before truncation");
  m->add_option("--scheme", sim.scheme, "Increments: gaussian or walk")
      ->check(CLI::IsMember({"gaussian", "walk"}));
  m->add_flag("--no-bridge", sim.no_bridge, "Turn off Brownian-bridge corrections");
  m->add_flag("--simulate-future", sim.sim.simulate_future,
              "Follow paths after the stop instead of drawing the future maximum");
  m->add_option("--future-cap", sim.sim.future_cap, "Continuation cap as a multiple of the stop");
  m->add_option("--rule", sim.rule, "Stopping rule of players 1..n-1")
      ->check(CLI::IsMember({"embed", "azema-yor", "perkins", "oracle", "immediate", "absorption"}));
  m->add_option("--deviator", sim.deviator, "Stopping rule of player 0 (default: --rule)")
      ->check(CLI::IsMember({"embed", "azema-yor", "perkins", "oracle", "immediate", "absorption"}));
  m->add_option("--support-eps", sim.sim.support_eps, "Off-support tolerance as a fraction of r");
  m->add_option("--samples", sim.samples, "Rows of player 0 samples to dump (max 1e6)")
      ->check(CLI::Range(std::size_t{0}, std::size_t{1'000'000}));
  m->add_option("--out", sim.out, "Output directory (default $GAMBLE_OUT_DIR or .)");
  m->add_option("--name", sim.name, "File stem instead of the generated one");

  PlotArgs plot;
  plot.contest.mode = "past";
  plot.contest.n = 3;
  plot.contest.K = {0.25, 0.5, 1.0, 2.0};
  auto* p = app.add_subcommand("plot", "SVG plots of G* and g* over a list of K");
  add_contest_flags(*p, plot.contest, true);
  p->add_option("--points", plot.points, "Grid points per curve");
  p->add_option("--density-cap", plot.density_cap, "Clip densities at this value")
      ->check(CLI::PositiveNumber);
  p->add_option("--out", plot.out, "Output directory (default $GAMBLE_OUT_DIR or .)");
  p->add_option("--name", plot.name, "File stem instead of the generated one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  try {
    if (*s) return run_solve(solve);
    if (*v) return run_verify(verify);
    if (*m) return run_simulate(sim);
    if (*p) return run_plot(plot);
  } catch (const Failure& e) {
    std::cerr << "gamble: " << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "gamble: " << e.what() << '\n';
    return cli::kNumerical;
  }
  return cli::kUsage;
}
