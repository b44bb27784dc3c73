#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "gamble/errors.hpp"
#include "gamble/export.hpp"

using namespace gamble;

namespace {

Equilibrium solve(int n, double K, RegretMode mode) {
  ContestSpec s;
  s.n = n;
  s.K = K;
  s.mode = mode;
  return solve_equilibrium(s);
}

CertifyOptions light() {
  CertifyOptions o;
  o.x_points = 1000;
  o.y_points = 150;
  return o;
}

}  // namespace

TEST_SUITE("export") {
  TEST_CASE("number formatting") {
    CHECK(io::format_number(0.5) == "0.5");
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(io::format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(io::format_number(std::nan("")) == "nan");
  }

  TEST_CASE("solution table") {
    const auto eq = solve(3, 1.0, RegretMode::Past);
    const auto rows = io::solution_table(eq, 101);
    CHECK(rows.front().x == 0.0);
    CHECK(rows.back().x == eq.r());
    CHECK(rows.back().G == 1.0);
    bool has_x0 = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].x > rows[i - 1].x);
      REQUIRE(rows[i].G >= rows[i - 1].G);
      if (rows[i].x == 1.0) has_x0 = true;
    }
    CHECK(has_x0);

    const auto fut = io::solution_table(solve(2, 1.0, RegretMode::Future), 11);
    CHECK(std::isnan(fut[3].M));
  }

  TEST_CASE("csv round trip") {
    const auto eq = solve(2, 0.0, RegretMode::None);
    const auto rows = io::solution_table(eq, 21);
    std::stringstream ss;
    io::write_table_csv(ss, rows);
    CHECK(ss.str().rfind("x,G,g,M\n", 0) == 0);
    const auto back = io::read_table_csv(ss);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      REQUIRE(back[i].x == doctest::Approx(rows[i].x).epsilon(1e-11));
      REQUIRE(back[i].G == doctest::Approx(rows[i].G).epsilon(1e-11));
    }
    std::stringstream bad1("x,G,g,M\n0,0,0.5\n");
    CHECK_THROWS_AS(io::read_table_csv(bad1), ValidationError);
    std::stringstream bad2("a,b\n1,2\n");
    CHECK_THROWS_AS(io::read_table_csv(bad2), ValidationError);
    std::stringstream bad3("x,G,g,M\n0,zero,0.5,0\n");
    CHECK_THROWS_AS(io::read_table_csv(bad3), ValidationError);
  }

  TEST_CASE("quantile and sample csv") {
    const auto eq = solve(2, 0.0, RegretMode::None);
    std::stringstream q;
    io::write_quantile_csv(q, eq, 5);
    CHECK(q.str() == "p,x\n0,0\n0.25,0.5\n0.5,1\n0.75,1.5\n1,2\n");

    std::vector<PathResult> rows(3);
    rows[1].x_tau = 2.0;
    rows[2].truncated = true;
    std::stringstream s;
    io::write_samples_csv(s, rows, 2);
    std::string line;
    int count = 0;
    while (std::getline(s, line)) ++count;
    CHECK(count == 3);
  }

  TEST_CASE("spec json round trip") {
    ContestSpec s;
    s.n = 4;
    s.x0 = 2.5;
    s.K = 1.5;
    s.K2 = 0.5;
    s.mode = RegretMode::Past;
    const auto back = io::spec_from_json(io::to_json(s));
    CHECK(back.n == 4);
    CHECK(back.x0 == 2.5);
    CHECK(back.K == 1.5);
    CHECK(back.K2 == 0.5);
    CHECK(back.mode == RegretMode::Past);
    auto j = io::to_json(s);
    j["n"] = 1;
    CHECK_THROWS_AS(io::spec_from_json(j), ParameterError);
    j.erase("x0");
    CHECK_THROWS_AS(io::spec_from_json(j), ValidationError);
  }

  TEST_CASE("headers") {
    const auto past = io::solution_header(solve(3, 1.0, RegretMode::Past));
    CHECK(past.contains("z_star"));
    CHECK(past["psi_x0"].get<double>() == doctest::Approx(past["value"].get<double>()));
    const auto fut = io::solution_header(solve(2, 1.0, RegretMode::Future));
    CHECK(fut["effective_n"].get<double>() == doctest::Approx(3.0));
    CHECK_FALSE(fut.contains("z_star"));
  }

  TEST_CASE("stored solutions are checked against a fresh solve") {
    for (auto mode : {RegretMode::None, RegretMode::Past}) {
      const auto eq = solve(3, 1.0, mode);
      const auto header = io::solution_header(eq);
      // go through text, as a stored file would
      std::stringstream ss;
      io::write_table_csv(ss, io::solution_table(eq, 201));
      auto rows = io::read_table_csv(ss);
      const auto ok = io::check_solution(header, rows, light());
      CHECK(ok.passed);
      CHECK(ok.table_error < 1e-9);

      auto bent = rows;
      bent[50].G += 1e-4;
      const auto bad = io::check_solution(header, bent, light());
      CHECK_FALSE(bad.passed);
      CHECK(bad.worst_row.x == doctest::Approx(rows[50].x));

      auto inflated = header;
      inflated["r"] = eq.r() * 1.01;
      const auto bad_r = io::check_solution(inflated, rows, light());
      CHECK_FALSE(bad_r.passed);
      CHECK_FALSE(bad_r.failure.empty());
    }
  }

  TEST_CASE("report json") {
    const auto eq = solve(2, 0.0, RegretMode::None);
    const auto im = StoppingRule::immediate();
    ContestOptions opt;
    opt.paths = 10;
    const auto rep = run_contest(eq.spec, {im, im}, opt);
    const auto j = io::to_json(rep);
    CHECK(j["paths"] == 10);
    CHECK(j["players"].size() == 2);
    CHECK(j["players"][0]["ks_distance"].is_null());
    CHECK(j["players"][0]["win_probability"].get<double>() == doctest::Approx(0.5));
  }
}
