#include "gamble/gamble.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "gamble/equilibrium.hpp"
#include "gamble/errors.hpp"
#include "gamble/export.hpp"
#include "gamble/payoff.hpp"
#include "gamble/scale.hpp"
#include "gamble/simulation.hpp"
#include "gamble/verification.hpp"

#ifndef GAMBLE_VERSION_STRING
#define GAMBLE_VERSION_STRING "0.0.0"
#endif

struct gamble_equilibrium {
  gamble::Equilibrium eq;
};

struct gamble_certificate {
  bool passed = false;
  nlohmann::json json;
};

struct gamble_report {
  gamble::SimulationReport report;
};

namespace {

using namespace gamble;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

thread_local std::string last_error;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NullError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BufferError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

gamble_status fail(gamble_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
gamble_status guard(F&& f) noexcept {
  try {
    f();
    return GAMBLE_OK;
  } catch (const ParameterError& e) {
    return fail(GAMBLE_ERR_PARAMETER, e.what());
  } catch (const DomainError& e) {
    return fail(GAMBLE_ERR_DOMAIN, e.what());
  } catch (const ValidationError& e) {
    return fail(GAMBLE_ERR_VALIDATION, e.what());
  } catch (const SolverError& e) {
    return fail(GAMBLE_ERR_SOLVER, e.what());
  } catch (const IoError& e) {
    return fail(GAMBLE_ERR_IO, e.what());
  } catch (const NullError& e) {
    return fail(GAMBLE_ERR_NULL, e.what());
  } catch (const BufferError& e) {
    return fail(GAMBLE_ERR_BUFFER, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(GAMBLE_ERR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(GAMBLE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GAMBLE_ERR_INTERNAL, "unknown error");
  }
}

template <class... P>
void need(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullError("null handle or pointer");
}

RegretMode to_mode(gamble_mode m) {
  switch (m) {
    case GAMBLE_MODE_NONE:
      return RegretMode::None;
    case GAMBLE_MODE_FUTURE:
      return RegretMode::Future;
    case GAMBLE_MODE_PAST:
      return RegretMode::Past;
    case GAMBLE_MODE_ALL:
      return RegretMode::All;
  }
  throw ParameterError("unknown regret mode");
}

ContestSpec to_spec(const gamble_spec& s) {
  ContestSpec c;
  c.n = s.n;
  c.x0 = s.x0;
  c.K = s.K;
  if (s.has_K2) c.K2 = s.K2;
  c.mode = to_mode(s.mode);
  c.validate();
  return c;
}

void copy_out(const std::string& text, char* buf, std::size_t cap,
              std::size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buf == nullptr && cap == 0) return;
  if (buf == nullptr || cap < text.size() + 1) {
    throw BufferError("buffer too small for " +
                      std::to_string(text.size() + 1) + " bytes");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
}

std::ofstream open_out(const char* path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(std::string("cannot write ") + path);
  return out;
}

std::ifstream open_in(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot read ") + path);
  return in;
}

CertifyOptions to_options(const gamble_certify_options* o) {
  CertifyOptions c;
  if (!o) return c;
  c.x_points = o->x_points;
  c.y_points = o->y_points;
  c.extent = o->extent;
  c.tolerance = o->tolerance;
  c.active_tolerance = o->active_tolerance;
  if (o->claimed_endpoint > 0.0) c.claimed_endpoint = o->claimed_endpoint;
  return c;
}

StoppingRule make_rule(const Equilibrium& eq, gamble_rule kind) {
  const double x0 = eq.spec.x0;
  auto perkins = [&] {
    if (eq.past) {
      auto past = eq.past;
      return StoppingRule::perkins(eq.cdf, x0,
                                   [past](double m) { return past->phi(m); });
    }
    return StoppingRule::perkins(eq.cdf, x0);
  };
  switch (kind) {
    case GAMBLE_RULE_EMBED:
      if (eq.spec.mode == RegretMode::Past) return perkins();
      return StoppingRule::azema_yor(eq.cdf, x0);
    case GAMBLE_RULE_AZEMA_YOR:
      return StoppingRule::azema_yor(eq.cdf, x0);
    case GAMBLE_RULE_PERKINS:
      return perkins();
    case GAMBLE_RULE_ORACLE:
      return StoppingRule::quantile_oracle(eq.law);
    case GAMBLE_RULE_IMMEDIATE:
      return StoppingRule::immediate();
    case GAMBLE_RULE_ABSORPTION:
      return StoppingRule::run_to_absorption();
  }
  throw ParameterError("unknown stopping rule");
}

}  // namespace

extern "C" {

const char* gamble_version(void) { return GAMBLE_VERSION_STRING; }

const char* gamble_last_error(void) { return last_error.c_str(); }

const char* gamble_status_name(gamble_status status) {
  switch (status) {
    case GAMBLE_OK:
      return "ok";
    case GAMBLE_ERR_PARAMETER:
      return "parameter error";
    case GAMBLE_ERR_DOMAIN:
      return "domain error";
    case GAMBLE_ERR_VALIDATION:
      return "validation error";
    case GAMBLE_ERR_SOLVER:
      return "solver error";
    case GAMBLE_ERR_IO:
      return "i/o error";
    case GAMBLE_ERR_NULL:
      return "null pointer";
    case GAMBLE_ERR_BUFFER:
      return "buffer too small";
    case GAMBLE_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

gamble_spec gamble_spec_default(void) {
  return gamble_spec{2, 1.0, 0.0, 0.0, 0, GAMBLE_MODE_NONE};
}

gamble_status gamble_parse_mode(const char* text, gamble_mode* out) {
  return guard([&] {
    need(text, out);
    switch (parse_regret_mode(text)) {
      case RegretMode::None:
        *out = GAMBLE_MODE_NONE;
        break;
      case RegretMode::Future:
        *out = GAMBLE_MODE_FUTURE;
        break;
      case RegretMode::Past:
        *out = GAMBLE_MODE_PAST;
        break;
      case RegretMode::All:
        *out = GAMBLE_MODE_ALL;
        break;
    }
  });
}

gamble_status gamble_solve(const gamble_spec* spec, gamble_equilibrium** out) {
  return guard([&] {
    need(spec, out);
    *out = nullptr;
    *out = new gamble_equilibrium{solve_equilibrium(to_spec(*spec))};
  });
}

void gamble_equilibrium_free(gamble_equilibrium* eq) { delete eq; }

gamble_status gamble_cdf(const gamble_equilibrium* eq, double x, double* out) {
  return guard([&] {
    need(eq, out);
    *out = eq->eq.cdf.eval(x);
  });
}

gamble_status gamble_density(const gamble_equilibrium* eq, double x,
                             double* out) {
  return guard([&] {
    need(eq, out);
    *out = eq->eq.cdf.density(x);
  });
}

gamble_status gamble_quantile(const gamble_equilibrium* eq, double p,
                              double* out) {
  return guard([&] {
    need(eq, out);
    *out = eq->eq.cdf.quantile(p);
  });
}

gamble_status gamble_max_of(const gamble_equilibrium* eq, double x,
                            double* out) {
  return guard([&] {
    need(eq, out);
    if (x < 0.0) throw DomainError("x must be nonnegative");
    *out = eq->eq.max_of(x);
  });
}

gamble_status gamble_lower_of(const gamble_equilibrium* eq, double m,
                              double* out) {
  return guard([&] {
    need(eq, out);
    *out = eq->eq.law.lower_of(m);
  });
}

gamble_status gamble_equilibrium_info(const gamble_equilibrium* eq,
                                      gamble_info* out) {
  return guard([&] {
    need(eq, out);
    const Equilibrium& e = eq->eq;
    gamble_info info{e.r(), e.value, e.cdf.mean(), kNaN, kNaN, kNaN, kNaN,
                     e.cdf.eval(e.spec.x0)};
    if (e.closed) info.effective_n = e.closed->effective_n;
    if (e.past) {
      info.z_star = e.past->z_star();
      info.u_star = e.past->u_star();
      info.psi_x0 = e.past->psi(e.spec.x0);
      info.cdf_x0 = e.past->cdf_at_x0();
    }
    *out = info;
  });
}

gamble_status gamble_export_table(const gamble_equilibrium* eq,
                                  size_t points, const char* csv_path) {
  return guard([&] {
    need(eq, csv_path);
    auto rows = io::solution_table(eq->eq, points);
    auto out = open_out(csv_path);
    io::write_table_csv(out, rows);
    if (!out) throw IoError(std::string("write failed: ") + csv_path);
  });
}

gamble_status gamble_export_quantiles(const gamble_equilibrium* eq,
                                      size_t points, const char* csv_path) {
  return guard([&] {
    need(eq, csv_path);
    if (points < 2) throw ParameterError("need at least two points");
    auto out = open_out(csv_path);
    io::write_quantile_csv(out, eq->eq, points);
    if (!out) throw IoError(std::string("write failed: ") + csv_path);
  });
}

gamble_status gamble_equilibrium_header(const gamble_equilibrium* eq,
                                        char* buf, size_t cap,
                                        size_t* needed) {
  return guard([&] {
    need(eq);
    copy_out(io::solution_header(eq->eq).dump(2), buf, cap, needed);
  });
}

gamble_status gamble_expected_payoff(const gamble_equilibrium* eq,
                                     double* out) {
  return guard([&] {
    need(eq, out);
    *out = expected_payoff(eq->eq.spec, eq->eq.law, eq->eq.cdf);
  });
}

gamble_status gamble_best_response_gap(const gamble_equilibrium* eq,
                                       double* gap) {
  return guard([&] {
    need(eq, gap);
    *gap = best_response_gap(eq->eq, beta_deviation_family(eq->eq.spec.x0)).gap;
  });
}

gamble_certify_options gamble_certify_options_default(void) {
  const CertifyOptions c;
  return gamble_certify_options{c.x_points,  c.y_points,
                                c.extent,    c.tolerance,
                                c.active_tolerance, 0.0};
}

gamble_status gamble_certify(const gamble_equilibrium* eq,
                             const gamble_certify_options* opt,
                             gamble_certificate** out) {
  return guard([&] {
    need(eq, out);
    *out = nullptr;
    const auto cert = certify(eq->eq, to_options(opt));
    *out = new gamble_certificate{cert.passed, io::to_json(cert)};
  });
}

gamble_status gamble_verify_solution(const char* csv_path,
                                     const char* header_path,
                                     const gamble_certify_options* opt,
                                     gamble_certificate** out) {
  return guard([&] {
    need(csv_path, header_path, out);
    *out = nullptr;
    auto hin = open_in(header_path);
    const auto header = nlohmann::json::parse(hin);
    auto cin = open_in(csv_path);

    nlohmann::json j;
    bool passed = false;
    try {
      const auto rows = io::read_table_csv(cin);
      const auto check = io::check_solution(header, rows, to_options(opt));
      passed = check.passed;
      j = {{"passed", check.passed},
           {"failure", check.failure},
           {"endpoint_error", check.endpoint_error},
           {"table_error", check.table_error},
           {"worst_row", {{"x", check.worst_row.x}, {"G", check.worst_row.G}}},
           {"certificate", io::to_json(check.certificate)}};
    } catch (const ValidationError& e) {
      // unreadable table: a failed check, not an error
      j = {{"passed", false}, {"failure", e.what()}};
    }
    *out = new gamble_certificate{passed, std::move(j)};
  });
}

void gamble_certificate_free(gamble_certificate* cert) { delete cert; }

gamble_status gamble_certificate_passed(const gamble_certificate* cert,
                                        int* passed) {
  return guard([&] {
    need(cert, passed);
    *passed = cert->passed ? 1 : 0;
  });
}

gamble_status gamble_certificate_json(const gamble_certificate* cert,
                                      char* buf, size_t cap, size_t* needed) {
  return guard([&] {
    need(cert);
    copy_out(cert->json.dump(2), buf, cap, needed);
  });
}

gamble_sim_options gamble_sim_options_default(void) {
  const PathConfig p;
  const ContestOptions c;
  gamble_sim_options o;
  o.paths = c.paths;
  o.dt = p.dt;
  o.max_steps = p.max_steps;
  o.seed = p.seed;
  o.random_walk = p.scheme == IncrementScheme::RandomWalk ? 1 : 0;
  o.bridge = p.bridge ? 1 : 0;
  o.simulate_future = p.simulate_future ? 1 : 0;
  o.future_cap = p.future_cap;
  o.rule = GAMBLE_RULE_EMBED;
  o.deviator = GAMBLE_RULE_EMBED;
  o.support_eps = c.support_eps;
  o.keep_samples = 0;
  return o;
}

gamble_status gamble_simulate(const gamble_equilibrium* eq,
                              const gamble_sim_options* opt,
                              gamble_report** out) {
  return guard([&] {
    need(eq, opt, out);
    *out = nullptr;
    const Equilibrium& e = eq->eq;
    ContestOptions c;
    c.paths = opt->paths;
    c.path.dt = opt->dt;
    c.path.max_steps = opt->max_steps;
    c.path.seed = opt->seed;
    c.path.scheme = opt->random_walk ? IncrementScheme::RandomWalk
                                     : IncrementScheme::Gaussian;
    c.path.bridge = opt->bridge != 0;
    c.path.simulate_future = opt->simulate_future != 0;
    c.path.future_cap = opt->future_cap;
    c.support_eps = opt->support_eps;
    c.keep_samples = opt->keep_samples;
    if (e.spec.mode == RegretMode::Past) c.support_law = e.law;

    std::vector<StoppingRule> rules;
    rules.push_back(make_rule(e, opt->deviator));
    const StoppingRule others = opt->rule == opt->deviator
                                    ? rules.front()
                                    : make_rule(e, opt->rule);
    for (int i = 1; i < e.spec.n; ++i) rules.push_back(others);
    *out = new gamble_report{run_contest(e.spec, rules, c)};
  });
}

void gamble_report_free(gamble_report* report) { delete report; }

gamble_status gamble_report_json(const gamble_report* report, char* buf,
                                 size_t cap, size_t* needed) {
  return guard([&] {
    need(report);
    copy_out(io::to_json(report->report).dump(2), buf, cap, needed);
  });
}

gamble_status gamble_report_player(const gamble_report* report,
                                   size_t player, double* win_probability,
                                   double* win_se, double* mean_payoff,
                                   double* payoff_se) {
  return guard([&] {
    need(report);
    const auto& players = report->report.players;
    if (player >= players.size()) throw DomainError("no such player");
    const auto& p = players[player];
    if (win_probability) *win_probability = p.win_probability;
    if (win_se) *win_se = p.win_se;
    if (mean_payoff) *mean_payoff = p.mean_payoff;
    if (payoff_se) *payoff_se = p.payoff_se;
  });
}

gamble_status gamble_report_samples(const gamble_report* report,
                                    const char* csv_path) {
  return guard([&] {
    need(report, csv_path);
    auto out = open_out(csv_path);
    io::write_samples_csv(out, report->report.samples);
    if (!out) throw IoError(std::string("write failed: ") + csv_path);
  });
}

gamble_status gamble_realized_payoff(const gamble_spec* spec, double own_stop,
                                     double own_max, const double* opponents,
                                     size_t count, double* out) {
  return guard([&] {
    need(spec, opponents, out);
    *out = realized_payoff(to_spec(*spec), own_stop, own_max,
                           std::span<const double>(opponents, count));
  });
}

gamble_status gamble_scale(gamble_scale_kind kind, double a, double b,
                           double y, int forward, double* out) {
  return guard([&] {
    need(out);
    ScaleFunction sf = ScaleFunction::identity();
    switch (kind) {
      case GAMBLE_SCALE_IDENTITY:
        break;
      case GAMBLE_SCALE_EXPONENTIAL_BM:
        sf = ScaleFunction::exponential_bm(a, b);
        break;
      case GAMBLE_SCALE_DRIFTING_BM:
        sf = ScaleFunction::drifting_bm(a, b);
        break;
      default:
        throw ParameterError("unknown scale function");
    }
    *out = forward ? sf.forward(y) : sf.inverse(y);
  });
}

}  // extern "C"
