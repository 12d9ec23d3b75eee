#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "roughsde/error.hpp"
#include "roughsde/fields.hpp"
#include "roughsde/rng.hpp"

using namespace roughsde;

namespace {

DriftField sample_field() {
  Series1D s;
  s.poly = {1.0, 2.0, -0.5};
  s.modes = {{3.0, 0.5, 0.1}, {1.0, -1.0, 0.0}};
  return DriftField::scalar(s);
}

double sample_value(double x) {
  return 1.0 + 2.0 * x - 0.5 * x * x + 0.5 * std::cos(3 * x + 0.1) - std::cos(x);
}

// E f(x + sqrt(eps) Z) by Simpson on [-12, 12].
template <typename F>
double gauss_smooth(F f, double x, double eps) {
  const int n = 4000;
  const double a = -12, h = 24.0 / n;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    const double z = a + i * h;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * f(x + std::sqrt(eps) * z) * std::exp(-z * z / 2);
  }
  return s * h / 3 / std::sqrt(2 * M_PI);
}

GridPath wiggle(std::size_t n) {
  return GridPath::sample(0.0, 1.0 / n, n, [](double t) { return std::sin(5 * t) + t * t; });
}

}  // namespace

TEST_CASE("closed-form evaluation and jacobian") {
  const DriftField f = sample_field();
  for (double x : {-1.3, 0.0, 0.7, 2.1}) {
    CHECK(f.eval(x) == doctest::Approx(sample_value(x)));
    const double xv[] = {x};
    double jac[1];
    f.jacobian(xv, 0.0, jac);
    const double h = 1e-6;
    CHECK(jac[0] == doctest::Approx((sample_value(x + h) - sample_value(x - h)) / (2 * h)).epsilon(1e-6));
  }
  const DriftField g = DriftField::affine(2, 0.5, -2.0);
  const double x[] = {1.0, 3.0};
  double out[2];
  g.eval(x, 0.0, out);
  CHECK(out[0] == -1.5);
  CHECK(out[1] == -5.5);
}

TEST_CASE("time modulation is a separable factor") {
  DriftField f = sample_field();
  f.set_modulation({0.5, 2.0, 0.0});
  CHECK(f.eval(0.3, 0.4) == doctest::Approx(sample_value(0.3) * (1 + 0.5 * std::sin(0.8))));
}

TEST_CASE("mollification equals Gaussian convolution") {
  const DriftField f = sample_field();
  for (double eps : {0.01, 0.2}) {
    const DriftField m = f.mollify(eps);
    CHECK(m.eps() == eps);
    for (double x : {-0.5, 0.4, 1.9})
      CHECK(m.eval(x) == doctest::Approx(gauss_smooth(sample_value, x, eps)).epsilon(1e-9));
  }
  // Single mode: amplitude exp(-eps/2).
  Series1D c;
  c.modes = {{1.0, 1.0, 0.0}};
  CHECK(DriftField::scalar(c).mollify(0.3).eval(0.2) == doctest::Approx(std::exp(-0.15) * std::cos(0.2)));
}

TEST_CASE("mollification is a semigroup") {
  const DriftField f = synthesize_field(0.4, 3, 6);
  const DriftField a = f.mollify(0.01).mollify(0.02), b = f.mollify(0.03);
  for (double x : {-1.0, 0.3, 2.5}) CHECK(a.eval(x) == doctest::Approx(b.eval(x)).epsilon(1e-13));
}

TEST_CASE("synthesized fields") {
  const DriftField f = synthesize_field(0.3, 42, 8);
  const Series1D& s = f.term(0, 0);
  REQUIRE(s.modes.size() == 9);
  for (int j = 0; j <= 8; ++j) {
    CHECK(s.modes[j].freq == std::ldexp(1.0, j));
    CHECK(s.modes[j].amp == doctest::Approx(std::pow(2.0, -0.3 * j)));
  }
  const DriftField g = synthesize_field(0.3, 42, 8);
  CHECK(g.eval(0.77) == f.eval(0.77));
  CHECK(synthesize_field(0.3, 43, 8).eval(0.77) != f.eval(0.77));
  CHECK(synthesize_field(0.3, 1, 0).term(0, 0).modes.size() == 1);
}

TEST_CASE("measured Hoelder exponent tracks the target") {
  for (double alpha : {0.3, 0.6}) {
    const DriftField f = synthesize_field(alpha, 5, 14);
    std::vector<double> scales;
    for (int k = 4; k <= 10; ++k) scales.push_back(std::ldexp(1.0, -k));
    const ScalingFit fit = measure_holder_exponent(f, 0.0, 2 * M_PI, scales);
    CHECK(fit.fit.slope == doctest::Approx(alpha).epsilon(0.1 / alpha));
  }
}

TEST_CASE("distributional fields are only evaluable after smoothing") {
  const DriftField f = synthesize_field(-0.2, 1, 6);
  CHECK_FALSE(f.evaluable());
  try {
    f.eval(0.1);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::contract_violation);
  }
  CHECK(std::isfinite(f.mollify(0.01).eval(0.1)));
}

TEST_CASE("frequency truncation splits exactly") {
  const DriftField f = synthesize_field(0.5, 9, 7);
  for (int level : {0, 3, 7, 9}) {
    const auto [low, high] = frequency_truncate(f, level);
    for (double x : {-0.4, 1.1}) CHECK(low.eval(x) + high.eval(x) == doctest::Approx(f.eval(x)));
    if (level == 0) {
      CHECK(low.term(0, 0).modes.size() == 1);
    }
    if (level >= 7) {
      CHECK(high.eval(0.3) == 0.0);
    }
  }
}

TEST_CASE("field algebra") {
  const DriftField f = sample_field();
  const double c[] = {0.25};
  CHECK(f.shifted(c).eval(1.0) == doctest::Approx(sample_value(1.25)));
  CHECK(f.scaled(-2.0).eval(0.5) == doctest::Approx(-2 * sample_value(0.5)));
  CHECK((f - f).eval(0.9) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK((f + f).eval(0.9) == doctest::Approx(2 * sample_value(0.9)));
}

TEST_CASE("JSON round trip") {
  DriftField f = synthesize_field(0.4, 3, 5).mollify(0.01);
  f.set_modulation({0.2, 1.0, 0.5});
  const nlohmann::json j = f;
  const DriftField g = j.get<DriftField>();
  CHECK(g.eps() == f.eps());
  for (double x : {-1.0, 0.0, 2.0}) CHECK(g.eval(x, 0.3) == f.eval(x, 0.3));
  nlohmann::json s = {{"synthesize", {{"target_alpha", 0.4}, {"seed", 3}, {"bandwidth", 5}}}};
  CHECK(s.get<DriftField>().eval(0.5) == synthesize_field(0.4, 3, 5).eval(0.5));
  CHECK_THROWS_AS((nlohmann::json{{"mode", "bogus"}}.get<DriftField>()), Error);
}

TEST_CASE("averaged field: constant and linear fields") {
  const GridPath w = wiggle(64);
  const std::vector<double> xs{-1.0, 0.0, 2.0};
  Series1D one;
  one.poly = {1.0};
  const AveragedField a = averaged_field(w, DriftField::scalar(one), xs);
  for (std::size_t n = 0; n < w.size(); ++n) CHECK(a(n, 1) == doctest::Approx(w.time(n)));
  // f(x) = x: int_0^t w_r dr + t x; the trapezoid rule is exact for the
  // piecewise-linear interpolant of w.
  const AveragedField b = averaged_field(w, DriftField::affine(1, 0.0, 1.0), xs);
  double integral = 0.0;
  for (std::size_t n = 1; n < w.size(); ++n) {
    integral += 0.5 * (w(n - 1) + w(n)) * w.dt();
    for (std::size_t j = 0; j < xs.size(); ++j)
      CHECK(b(n, j) == doctest::Approx(integral + w.time(n) * xs[j]).epsilon(1e-12));
  }
}

TEST_CASE("averaged field quadrature is second order") {
  const DriftField f = sample_field();
  const std::vector<double> xs{0.3};
  auto terminal = [&](std::size_t n) {
    const AveragedField a = averaged_field(wiggle(n), f, xs);
    return a(n, 0);
  };
  const double ref = terminal(1 << 14);
  const double e1 = std::abs(terminal(64) - ref), e2 = std::abs(terminal(128) - ref);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("averaged field invariants") {
  const DriftField f = synthesize_field(0.5, 2, 6);
  const DriftField g = sample_field();
  const GridPath w = wiggle(200);
  const std::vector<double> xs{-0.5, 0.25, 1.0};
  const AveragedField tf = averaged_field(w, f, xs), tg = averaged_field(w, g, xs);
  const AveragedField lin = averaged_field(w, f.scaled(2.0) + g.scaled(-3.0), xs);
  for (std::size_t n = 0; n < w.size(); n += 17)
    for (std::size_t j = 0; j < xs.size(); ++j)
      CHECK(lin(n, j) == doctest::Approx(2 * tf(n, j) - 3 * tg(n, j)).epsilon(1e-12));

  // Window quadrature equals the difference of cumulative values.
  double out[1];
  const double x1[] = {0.25};
  averaged_increment(w, f, 40, 150, x1, out);
  CHECK(out[0] == doctest::Approx(tf(150, 1) - tf(40, 1)).epsilon(1e-12));

  // Translation: T^{w}f(x) = T^{w+c}f(x-c).
  const double c[] = {0.75};
  const std::vector<double> xc{-1.25, -0.5, 0.25};
  const AveragedField tc = averaged_field(shifted(w, c), f, xc);
  for (std::size_t j = 0; j < xs.size(); ++j)
    CHECK(tc(200, j) == doctest::Approx(tf(200, j)).epsilon(1e-12));

  // The spectral terminal evaluation matches the last row.
  const auto term = averaged_field_terminal(w, f, xs);
  for (std::size_t j = 0; j < xs.size(); ++j) CHECK(term[j] == doctest::Approx(tf(200, j)).epsilon(1e-11));
}

TEST_CASE("averaged field rejects distributions") {
  const std::vector<double> xs{0.0};
  CHECK_THROWS_AS(averaged_field(wiggle(10), synthesize_field(-0.1, 1, 4), xs), Error);
}

TEST_CASE("double differences") {
  CHECK(double_difference_check(DriftField::affine(1, 1.0, 2.0), 0.5, 0.5, 2000, 1).max_ratio ==
        doctest::Approx(0.0).epsilon(1e-9));
  Series1D cst;
  cst.poly = {3.0};
  CHECK(double_difference_check(DriftField::scalar(cst), 0.5, 0.5, 2000, 1).max_ratio == 0.0);
  Series1D c;
  c.modes = {{1.0, 1.0, 0.0}};
  const DriftField cosf = DriftField::scalar(c);
  const double small = double_difference_check(cosf, 0.5, 0.5, 2000, 3).constant;
  const double large = double_difference_check(cosf, 0.5, 0.5, 50000, 3).constant;
  CHECK(small > 0.0);
  CHECK(std::isfinite(large));
  CHECK(large < 2.0 * small);
}

TEST_CASE("heat-kernel smoothing estimate is stable across the ladder") {
  const double gamma = 0.3;
  const DriftField f = synthesize_field(gamma, 4, 12);
  const double base = measured_holder_norm(f, gamma, 4000, 1, M_PI);
  std::vector<double> ratios;
  for (int k = 4; k <= 10; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const double c1 = measured_holder_norm(f.mollify(eps), 1.0, 4000, 1, M_PI);
    ratios.push_back(c1 * std::pow(eps, (1 - gamma) / 2) / base);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo < 4.0);
}

TEST_CASE("field distance") {
  const DriftField f = synthesize_field(0.3, 2, 8);
  CHECK(field_distance(f, f, -0.7, M_PI) == 0.0);
  Series1D a, b;
  a.modes = {{4.0, 1.0, 0.0}};
  b.modes = {{4.0, 0.5, 0.0}};
  // One mode in block j = 2, coefficient difference 0.5, weight 2^{2s}.
  CHECK(field_distance(DriftField::scalar(a), DriftField::scalar(b), -1.0, M_PI) ==
        doctest::Approx(0.5 * 0.25));
  Series1D p;
  p.poly = {0.0, 1.0};
  CHECK(field_distance(DriftField::scalar(p), DriftField::zero(1), 0.0, 2.0) == doctest::Approx(2.0));
}
