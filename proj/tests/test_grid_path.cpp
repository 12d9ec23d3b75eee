#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "roughsde/error.hpp"
#include "roughsde/grid_path.hpp"
#include "roughsde/rng.hpp"

using namespace roughsde;

TEST_CASE("format_double round-trips and stays short") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(rng.normal(), static_cast<int>(rng.below(200)) - 100);
    CHECK(parse_double(format_double(v)) == v);
  }
}

TEST_CASE("parse_double rejects garbage") {
  CHECK(parse_double(" +3.5 ") == 3.5);
  CHECK_THROWS_AS(parse_double("3.5x"), Error);
  CHECK_THROWS_AS(parse_double(""), Error);
}

TEST_CASE("constructor validates shape and grid") {
  CHECK_THROWS_AS(GridPath(0.0, 0.0, 1, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(GridPath(0.0, 0.1, 2, {0.0, 1.0, 2.0}), Error);
  CHECK_THROWS_AS(GridPath(0.0, 0.1, 1, {0.0, std::numeric_limits<double>::quiet_NaN()}), Error);
  const GridPath p(1.0, 0.5, 2, {0, 1, 2, 3, 4, 5});
  CHECK(p.size() == 3);
  CHECK(p.steps() == 2);
  CHECK(p.horizon() == doctest::Approx(2.0));
  CHECK(p(2, 1) == 5.0);
  CHECK(p.component_values(0) == std::vector<double>{0, 2, 4});
}

TEST_CASE("arithmetic, shift and subsample") {
  const GridPath a = GridPath::scalar(0.0, 0.25, {0, 1, 2, 3, 4});
  const GridPath b = GridPath::scalar(0.0, 0.25, {1, 1, 1, 1, 1});
  CHECK((a - b)(4) == 3.0);
  CHECK((a + b)(0) == 1.0);
  const double c[] = {10.0};
  CHECK(shifted(a, c)(2) == 12.0);
  const GridPath s = subsample(a, 2);
  CHECK(s.size() == 3);
  CHECK(s.dt() == 0.5);
  CHECK(s(2) == 4.0);
  CHECK_THROWS_AS(subsample(a, 3), Error);
  CHECK(sup_distance(a, b) == 3.0);
  CHECK_THROWS_AS(a + GridPath::scalar(0.0, 0.5, {0, 1, 2, 3, 4}), Error);
}

TEST_CASE("CSV round trip for one and several paths") {
  const std::vector<GridPath> one{GridPath(0.0, 0.125, 2, {0, 0.1, 1, -2, 3, 1e-9})};
  std::stringstream s1;
  write_paths_csv(s1, one);
  CHECK(s1.str().rfind("t,x1,x2\n", 0) == 0);
  const auto back1 = read_paths_csv(s1);
  REQUIRE(back1.size() == 1);
  CHECK(back1[0].values().size() == 6);
  CHECK(sup_distance(back1[0], one[0]) == 0.0);

  Rng rng(9);
  std::vector<GridPath> many;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> v(11);
    for (auto& x : v) x = rng.normal();
    many.push_back(GridPath::scalar(0.0, 0.1, v));
  }
  std::stringstream s2;
  write_paths_csv(s2, many);
  CHECK(s2.str().rfind("path,t,x1\n", 0) == 0);
  const auto back2 = read_paths_csv(s2);
  REQUIRE(back2.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(sup_distance(back2[k], many[k]) == 0.0);
}

TEST_CASE("CSV reader rejects malformed input") {
  std::stringstream bad_header("time,x\n0,1\n1,2\n");
  CHECK_THROWS_AS(read_paths_csv(bad_header), Error);
  std::stringstream ragged("t,x1\n0,1\n1\n");
  CHECK_THROWS_AS(read_paths_csv(ragged), Error);
  std::stringstream uneven("t,x1\n0,1\n1,2\n3,3\n");
  CHECK_THROWS_AS(read_paths_csv(uneven), Error);
  try {
    read_paths_csv(std::string("/nonexistent/file.csv"));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io_error);
  }
}

TEST_CASE("plot CSV is long format") {
  const std::vector<GridPath> p{GridPath(0.0, 1.0, 2, {0, 1, 2, 3})};
  std::stringstream s;
  write_plot_csv(s, p);
  CHECK(s.str() == "path,t,component,value\n0,0,1,0\n0,0,2,1\n0,1,1,2\n0,1,2,3\n");
}
