// Exercises the shared library through its C header only.
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "gamble/gamble.h"

namespace fs = std::filesystem;

namespace {

struct Eq {
  gamble_equilibrium* h = nullptr;
  explicit Eq(const gamble_spec& s) { REQUIRE(gamble_solve(&s, &h) == GAMBLE_OK); }
  ~Eq() { gamble_equilibrium_free(h); }
};

gamble_spec spec(int n, double K, gamble_mode mode) {
  gamble_spec s = gamble_spec_default();
  s.n = n;
  s.K = K;
  s.mode = mode;
  return s;
}

fs::path scratch(const char* name) {
  const auto dir = fs::temp_directory_path() / "gamble_capi_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("status and version") {
    CHECK(std::string(gamble_version()).size() > 0);
    CHECK(std::string(gamble_status_name(GAMBLE_ERR_BUFFER)) == "buffer too small");
    gamble_mode m;
    CHECK(gamble_parse_mode("past", &m) == GAMBLE_OK);
    CHECK(m == GAMBLE_MODE_PAST);
    CHECK(gamble_parse_mode("often", &m) == GAMBLE_ERR_PARAMETER);
    CHECK(std::string(gamble_last_error()).find("often") != std::string::npos);
    CHECK(gamble_parse_mode(nullptr, &m) == GAMBLE_ERR_NULL);
  }

  TEST_CASE("solve and evaluate") {
    Eq none(spec(2, 0.0, GAMBLE_MODE_NONE));
    double v = 0.0;
    CHECK(gamble_cdf(none.h, 1.0, &v) == GAMBLE_OK);
    CHECK(v == doctest::Approx(0.5));
    CHECK(gamble_quantile(none.h, 0.25, &v) == GAMBLE_OK);
    CHECK(v == doctest::Approx(0.5));
    CHECK(gamble_density(none.h, 0.3, &v) == GAMBLE_OK);
    CHECK(v == doctest::Approx(0.5));
    CHECK(gamble_quantile(none.h, 2.0, &v) == GAMBLE_ERR_DOMAIN);
    CHECK(gamble_lower_of(none.h, 1.5, &v) == GAMBLE_ERR_DOMAIN);

    const double K = 1.0;
    Eq past(spec(2, K, GAMBLE_MODE_PAST));
    gamble_info info;
    CHECK(gamble_equilibrium_info(past.h, &info) == GAMBLE_OK);
    const double r2 = K * K / ((K + 1.0) * (K - std::log(1.0 + K)));
    CHECK(info.r == doctest::Approx(r2).epsilon(1e-10));
    CHECK(info.mean == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(info.value == doctest::Approx(info.psi_x0));
    CHECK(std::isnan(info.effective_n));
    double m = 0.0, back = 0.0;
    CHECK(gamble_max_of(past.h, 0.4, &m) == GAMBLE_OK);
    CHECK(gamble_lower_of(past.h, m, &back) == GAMBLE_OK);
    CHECK(back == doctest::Approx(0.4).epsilon(1e-10));
    double pay = 0.0;
    CHECK(gamble_expected_payoff(past.h, &pay) == GAMBLE_OK);
    CHECK(pay == doctest::Approx(info.value).epsilon(1e-8));
    double gap = 1.0;
    CHECK(gamble_best_response_gap(past.h, &gap) == GAMBLE_OK);
    CHECK(gap <= 1e-8);
  }

  TEST_CASE("bad input") {
    gamble_equilibrium* eq = nullptr;
    auto s = spec(1, 0.0, GAMBLE_MODE_NONE);
    CHECK(gamble_solve(&s, &eq) == GAMBLE_ERR_PARAMETER);
    CHECK(eq == nullptr);
    CHECK(gamble_solve(nullptr, &eq) == GAMBLE_ERR_NULL);
    double v;
    CHECK(gamble_cdf(nullptr, 1.0, &v) == GAMBLE_ERR_NULL);
    gamble_equilibrium_free(nullptr);
  }

  TEST_CASE("buffer protocol") {
    Eq e(spec(3, 1.0, GAMBLE_MODE_PAST));
    size_t needed = 0;
    CHECK(gamble_equilibrium_header(e.h, nullptr, 0, &needed) == GAMBLE_OK);
    REQUIRE(needed > 10);
    std::string small(4, '\0');
    CHECK(gamble_equilibrium_header(e.h, small.data(), small.size(), &needed) ==
          GAMBLE_ERR_BUFFER);
    std::string buf(needed, '\0');
    CHECK(gamble_equilibrium_header(e.h, buf.data(), buf.size(), &needed) == GAMBLE_OK);
    CHECK(buf.find("\"z_star\"") != std::string::npos);
  }

  TEST_CASE("certificates") {
    Eq e(spec(3, 1.0, GAMBLE_MODE_PAST));
    auto opt = gamble_certify_options_default();
    opt.x_points = 1000;
    opt.y_points = 150;
    gamble_certificate* cert = nullptr;
    REQUIRE(gamble_certify(e.h, &opt, &cert) == GAMBLE_OK);
    int passed = 0;
    CHECK(gamble_certificate_passed(cert, &passed) == GAMBLE_OK);
    CHECK(passed == 1);
    gamble_certificate_free(cert);

    gamble_info info;
    REQUIRE(gamble_equilibrium_info(e.h, &info) == GAMBLE_OK);
    opt.claimed_endpoint = 1.01 * info.r;
    REQUIRE(gamble_certify(e.h, &opt, &cert) == GAMBLE_OK);
    CHECK(gamble_certificate_passed(cert, &passed) == GAMBLE_OK);
    CHECK(passed == 0);
    size_t needed = 0;
    CHECK(gamble_certificate_json(cert, nullptr, 0, &needed) == GAMBLE_OK);
    CHECK(needed > 0);
    gamble_certificate_free(cert);
  }

  TEST_CASE("stored solutions") {
    Eq e(spec(3, 1.0, GAMBLE_MODE_PAST));
    const auto csv = scratch("past.csv");
    const auto header = scratch("past.json");
    REQUIRE(gamble_export_table(e.h, 301, csv.c_str()) == GAMBLE_OK);
    size_t needed = 0;
    REQUIRE(gamble_equilibrium_header(e.h, nullptr, 0, &needed) == GAMBLE_OK);
    std::string buf(needed, '\0');
    REQUIRE(gamble_equilibrium_header(e.h, buf.data(), buf.size(), &needed) == GAMBLE_OK);
    std::ofstream(header) << buf.c_str();

    auto opt = gamble_certify_options_default();
    opt.x_points = 1000;
    opt.y_points = 150;
    gamble_certificate* cert = nullptr;
    REQUIRE(gamble_verify_solution(csv.c_str(), header.c_str(), &opt, &cert) == GAMBLE_OK);
    int passed = 0;
    gamble_certificate_passed(cert, &passed);
    CHECK(passed == 1);
    gamble_certificate_free(cert);

    std::ofstream(csv) << "x,G,g,M\n0,0,1,1\n";
    REQUIRE(gamble_verify_solution(csv.c_str(), header.c_str(), &opt, &cert) == GAMBLE_OK);
    gamble_certificate_passed(cert, &passed);
    CHECK(passed == 0);
    gamble_certificate_free(cert);

    CHECK(gamble_verify_solution(scratch("missing.csv").c_str(), header.c_str(),
                                 &opt, &cert) == GAMBLE_ERR_IO);
    CHECK(gamble_export_quantiles(e.h, 11, scratch("q.csv").c_str()) == GAMBLE_OK);
  }

  TEST_CASE("simulation") {
    Eq e(spec(2, 0.0, GAMBLE_MODE_NONE));
    auto opt = gamble_sim_options_default();
    opt.paths = 4000;
    opt.dt = 1e-3;
    opt.keep_samples = 100;
    gamble_report* rep = nullptr;
    REQUIRE(gamble_simulate(e.h, &opt, &rep) == GAMBLE_OK);
    double w, wse, p, pse;
    CHECK(gamble_report_player(rep, 1, &w, &wse, &p, &pse) == GAMBLE_OK);
    CHECK(std::abs(w - 0.5) < 4 * wse);
    CHECK(gamble_report_player(rep, 2, &w, &wse, &p, &pse) == GAMBLE_ERR_DOMAIN);
    CHECK(gamble_report_samples(rep, scratch("samples.csv").c_str()) == GAMBLE_OK);
    size_t needed = 0;
    CHECK(gamble_report_json(rep, nullptr, 0, &needed) == GAMBLE_OK);
    gamble_report_free(rep);

    opt.dt = -1.0;
    CHECK(gamble_simulate(e.h, &opt, &rep) == GAMBLE_ERR_PARAMETER);
    opt.dt = 1e-3;
    opt.rule = GAMBLE_RULE_PERKINS;
    opt.paths = 10;
    CHECK(gamble_simulate(e.h, &opt, &rep) == GAMBLE_OK);
    gamble_report_free(rep);
  }

  TEST_CASE("payoff and scale") {
    auto s = spec(3, 2.0, GAMBLE_MODE_PAST);
    const double opp[] = {1.0, 1.0};
    double v = 0.0;
    CHECK(gamble_realized_payoff(&s, 1.0, 1.0, opp, 2, &v) == GAMBLE_OK);
    CHECK(v == doctest::Approx(1.0 / 3.0));
    CHECK(gamble_realized_payoff(&s, 0.5, 2.0, opp, 2, &v) == GAMBLE_OK);
    CHECK(v == -2.0);
    CHECK(gamble_realized_payoff(&s, 0.5, 2.0, opp, 0, &v) == GAMBLE_ERR_DOMAIN);

    CHECK(gamble_scale(GAMBLE_SCALE_EXPONENTIAL_BM, 1.0, 0.25, 4.0, 1, &v) == GAMBLE_OK);
    CHECK(v == doctest::Approx(2.0));
    CHECK(gamble_scale(GAMBLE_SCALE_EXPONENTIAL_BM, 1.0, 0.25, 2.0, 0, &v) == GAMBLE_OK);
    CHECK(v == doctest::Approx(4.0));
    CHECK(gamble_scale(GAMBLE_SCALE_DRIFTING_BM, 1.0, 0.5, 1.0, 1, &v) == GAMBLE_ERR_PARAMETER);
  }
}
