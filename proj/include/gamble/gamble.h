/* C interface to the contest library. All handles are opaque; every call
 * returns a gamble_status and leaves a message in gamble_last_error() on
 * failure. Handles are not thread-safe, distinct handles are. */
#ifndef GAMBLE_GAMBLE_H
#define GAMBLE_GAMBLE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GAMBLE_API __declspec(dllexport)
#else
#define GAMBLE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gamble_status {
  GAMBLE_OK = 0,
  GAMBLE_ERR_PARAMETER = 1,  /* contest or option out of range */
  GAMBLE_ERR_DOMAIN = 2,     /* evaluation outside a function's domain */
  GAMBLE_ERR_VALIDATION = 3, /* input failed a consistency check */
  GAMBLE_ERR_SOLVER = 4,     /* numerical failure */
  GAMBLE_ERR_IO = 5,
  GAMBLE_ERR_NULL = 6,       /* null handle or output pointer */
  GAMBLE_ERR_BUFFER = 7,     /* caller buffer too small */
  GAMBLE_ERR_INTERNAL = 8
} gamble_status;

typedef enum gamble_mode {
  GAMBLE_MODE_NONE = 0,
  GAMBLE_MODE_FUTURE = 1,
  GAMBLE_MODE_PAST = 2,
  GAMBLE_MODE_ALL = 3
} gamble_mode;

typedef struct gamble_spec {
  int n;
  double x0;
  double K;
  double K2; /* tie-at-maximum penalty, used when has_K2 != 0 */
  int has_K2;
  gamble_mode mode;
} gamble_spec;

typedef struct gamble_equilibrium gamble_equilibrium;
typedef struct gamble_certificate gamble_certificate;
typedef struct gamble_report gamble_report;

GAMBLE_API const char* gamble_version(void);
/* Message of the last failed call on this thread, "" if none. */
GAMBLE_API const char* gamble_last_error(void);
GAMBLE_API const char* gamble_status_name(gamble_status status);

/* n = 2, x0 = 1, K = 0, mode none. */
GAMBLE_API gamble_spec gamble_spec_default(void);
/* "none", "future", "past", "all". */
GAMBLE_API gamble_status gamble_parse_mode(const char* text, gamble_mode* out);

/* ---- equilibria */

GAMBLE_API gamble_status gamble_solve(const gamble_spec* spec,
                                      gamble_equilibrium** out);
GAMBLE_API void gamble_equilibrium_free(gamble_equilibrium* eq);

GAMBLE_API gamble_status gamble_cdf(const gamble_equilibrium* eq, double x,
                                    double* out);
GAMBLE_API gamble_status gamble_density(const gamble_equilibrium* eq, double x,
                                        double* out);
GAMBLE_API gamble_status gamble_quantile(const gamble_equilibrium* eq,
                                         double p, double* out);
/* Running maximum as a function of the stopped value; NaN outside past
 * mode. */
GAMBLE_API gamble_status gamble_max_of(const gamble_equilibrium* eq, double x,
                                       double* out);
/* Lower boundary phi(m) of the past-mode support. */
GAMBLE_API gamble_status gamble_lower_of(const gamble_equilibrium* eq,
                                         double m, double* out);

typedef struct gamble_info {
  double r;          /* right end of the support */
  double value;      /* equilibrium payoff */
  double mean;
  double effective_n;/* N of the closed form, NaN in past mode */
  double z_star;     /* past mode only, else NaN */
  double u_star;
  double psi_x0;
  double cdf_x0;
} gamble_info;

GAMBLE_API gamble_status gamble_equilibrium_info(const gamble_equilibrium* eq,
                                                 gamble_info* out);

/* Writes the x,G,g,M table: points on [0, r] plus x0. */
GAMBLE_API gamble_status gamble_export_table(const gamble_equilibrium* eq,
                                             size_t points,
                                             const char* csv_path);
GAMBLE_API gamble_status gamble_export_quantiles(const gamble_equilibrium* eq,
                                                 size_t points,
                                                 const char* csv_path);

/* JSON text is copied into buf (NUL terminated). *needed receives the size
 * including the terminator; a small buffer gives GAMBLE_ERR_BUFFER. */
GAMBLE_API gamble_status gamble_equilibrium_header(const gamble_equilibrium* eq,
                                                   char* buf, size_t cap,
                                                   size_t* needed);

/* Expected payoff of a player using the equilibrium against equilibrium
 * opponents, by quadrature. */
GAMBLE_API gamble_status gamble_expected_payoff(const gamble_equilibrium* eq,
                                                double* out);
/* Largest payoff gain of the 20 beta deviations. */
GAMBLE_API gamble_status gamble_best_response_gap(const gamble_equilibrium* eq,
                                                  double* gap);

/* ---- certificates */

typedef struct gamble_certify_options {
  size_t x_points;
  size_t y_points;
  double extent;
  double tolerance;
  double active_tolerance;
  double claimed_endpoint; /* <= 0: the solved r */
} gamble_certify_options;

GAMBLE_API gamble_certify_options gamble_certify_options_default(void);

GAMBLE_API gamble_status gamble_certify(const gamble_equilibrium* eq,
                                        const gamble_certify_options* opt,
                                        gamble_certificate** out);
/* Checks a stored table and header against a fresh solve, then certifies
 * at the stored endpoint. A bad file yields a failed certificate, not an
 * error, as long as the header names a valid contest. */
GAMBLE_API gamble_status gamble_verify_solution(
    const char* csv_path, const char* header_path,
    const gamble_certify_options* opt, gamble_certificate** out);
GAMBLE_API void gamble_certificate_free(gamble_certificate* cert);

GAMBLE_API gamble_status gamble_certificate_passed(
    const gamble_certificate* cert, int* passed);
GAMBLE_API gamble_status gamble_certificate_json(
    const gamble_certificate* cert, char* buf, size_t cap, size_t* needed);

/* ---- simulation */

typedef enum gamble_rule {
  GAMBLE_RULE_EMBED = 0,     /* Perkins in past mode, Azema-Yor otherwise */
  GAMBLE_RULE_AZEMA_YOR = 1,
  GAMBLE_RULE_PERKINS = 2,
  GAMBLE_RULE_ORACLE = 3,    /* direct draws from the law */
  GAMBLE_RULE_IMMEDIATE = 4,
  GAMBLE_RULE_ABSORPTION = 5
} gamble_rule;

typedef struct gamble_sim_options {
  uint64_t paths;
  double dt;
  uint64_t max_steps;
  uint64_t seed;
  int random_walk;      /* scaled +-1 steps instead of Gaussian */
  int bridge;           /* Brownian-bridge corrections */
  int simulate_future;  /* follow the path after the stop */
  double future_cap;
  gamble_rule rule;     /* players 1 to n-1 */
  gamble_rule deviator; /* player 0 */
  double support_eps;   /* off-support tolerance as a fraction of r */
  size_t keep_samples;  /* player 0 samples kept for export */
} gamble_sim_options;

GAMBLE_API gamble_sim_options gamble_sim_options_default(void);

GAMBLE_API gamble_status gamble_simulate(const gamble_equilibrium* eq,
                                         const gamble_sim_options* opt,
                                         gamble_report** out);
GAMBLE_API void gamble_report_free(gamble_report* report);
GAMBLE_API gamble_status gamble_report_json(const gamble_report* report,
                                            char* buf, size_t cap,
                                            size_t* needed);
GAMBLE_API gamble_status gamble_report_player(const gamble_report* report,
                                              size_t player,
                                              double* win_probability,
                                              double* win_se,
                                              double* mean_payoff,
                                              double* payoff_se);
GAMBLE_API gamble_status gamble_report_samples(const gamble_report* report,
                                               const char* csv_path);

/* ---- payoffs and scale functions */

/* Realized payoff of one player. Ties are counted among the opponents. */
GAMBLE_API gamble_status gamble_realized_payoff(const gamble_spec* spec,
                                                double own_stop,
                                                double own_max,
                                                const double* opponents,
                                                size_t count, double* out);

typedef enum gamble_scale_kind {
  GAMBLE_SCALE_IDENTITY = 0,
  GAMBLE_SCALE_EXPONENTIAL_BM = 1, /* dY = bY dt + aY dW */
  GAMBLE_SCALE_DRIFTING_BM = 2     /* dY = b dt + a dW */
} gamble_scale_kind;

/* s(y) for forward != 0, s^{-1}(y) otherwise. */
GAMBLE_API gamble_status gamble_scale(gamble_scale_kind kind, double a,
                                      double b, double y, int forward,
                                      double* out);

#ifdef __cplusplus
}
#endif

#endif
