#include <doctest.h>

#include <cmath>
#include <string>

#include "roughsde/error.hpp"
#include "roughsde/fbm.hpp"
#include "roughsde/stats.hpp"

using namespace roughsde;

namespace {

FbmSpec spec(double h, std::size_t steps, FbmMethod m, std::uint64_t seed = 1) {
  FbmSpec s;
  s.hurst = h;
  s.steps = steps;
  s.method = m;
  s.seed = seed;
  return s;
}

template <typename G>
double simpson(G g, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("hurst validation message") {
  try {
    check_hurst(1.5);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "Hurst index must lie in (0,1)");
    CHECK(e.kind() == ErrorKind::invalid_parameter);
  }
  CHECK_THROWS_AS(check_hurst(0.0), Error);
  CHECK_NOTHROW(check_hurst(0.01));
}

TEST_CASE("covariance formula") {
  CHECK(fbm_covariance(0.3, 0.7, 0.5) == doctest::Approx(0.3));
  CHECK(fbm_covariance(0.7, 0.7, 0.25) == doctest::Approx(std::sqrt(0.7)));
  // Increments of H = 0.75 are positively correlated.
  const double c = fbm_covariance(1, 2, 0.75) - fbm_covariance(1, 1, 0.75);
  CHECK(c > 0.0);
}

TEST_CASE("Mandelbrot-Van Ness kernel variance") {
  // With c_H = 1/Gamma(H+1/2) the representation has variance
  // t^{2H} / (Gamma(2H+1) sin(pi H)).
  for (double h : {0.3, 0.5, 0.7}) {
    const double t = 0.8;
    auto sq = [&](double r) {
      const double k = mandelbrot_kernel(t, r, h);
      return k * k;
    };
    // (0,t): r = t - v^2.  (-inf,0): r = -(v/(1-v))^2.
    const double pos = simpson([&](double v) { return 2 * v * sq(t - v * v); }, 0.0,
                               std::sqrt(t), 4000);
    const double neg = simpson(
        [&](double v) {
          if (v <= 0.0 || v >= 1.0) return 0.0;
          const double u = v / (1 - v);
          return sq(-u * u) * 2 * v / std::pow(1 - v, 3);
        },
        0.0, 1.0, 40000);
    const double want = std::pow(t, 2 * h) / (std::tgamma(2 * h + 1) * std::sin(M_PI * h));
    CHECK(pos + neg == doctest::Approx(want).epsilon(2e-3));
  }
}

TEST_CASE("conditional variance is the Volterra part") {
  for (double h : {0.3, 0.5, 0.7}) {
    const double s = 0.2, t = 0.9;
    const double c = mandelbrot_constant(h);
    CHECK(conditional_variance(s, t, h) ==
          doctest::Approx(c * c / (2 * h) * std::pow(t - s, 2 * h)));
    // Never exceeds the variance of the full representation.
    const double full = std::pow(t - s, 2 * h) / (std::tgamma(2 * h + 1) * std::sin(M_PI * h));
    CHECK(conditional_variance(s, t, h) <= full * (1 + 1e-12));
  }
  CHECK(conditional_variance(0.1, 0.6, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("samples are deterministic in seed and replica") {
  FbmSampler a(spec(0.3, 64, FbmMethod::circulant, 5));
  FbmSampler b(spec(0.3, 64, FbmMethod::circulant, 5));
  CHECK(sup_distance(a.sample(3), b.sample(3)) == 0.0);
  CHECK(sup_distance(a.sample(3), a.sample(4)) > 0.0);
  const auto batch1 = sample_fbm(spec(0.3, 64, FbmMethod::cholesky, 9), 6, 1);
  const auto batch4 = sample_fbm(spec(0.3, 64, FbmMethod::cholesky, 9), 6, 4);
  for (int i = 0; i < 6; ++i) CHECK(sup_distance(batch1[i], batch4[i]) == 0.0);
  CHECK(batch1[0](0) == 0.0);
}

TEST_CASE("method selection and limits") {
  CHECK(FbmSampler(spec(0.3, 100, FbmMethod::automatic)).method() == FbmMethod::cholesky);
  CHECK(FbmSampler(spec(0.3, 5000, FbmMethod::automatic)).method() == FbmMethod::circulant);
  CHECK_THROWS_AS(FbmSampler(spec(0.3, 5000, FbmMethod::cholesky)), Error);
  CHECK(parse_fbm_method("circulant") == FbmMethod::circulant);
  CHECK_THROWS_AS(parse_fbm_method("spectral"), Error);
}

TEST_CASE("empirical covariance matches on a small grid") {
  for (auto m : {FbmMethod::cholesky, FbmMethod::circulant}) {
    for (double h : {0.25, 0.75}) {
      FbmSampler s(spec(h, 8, m, 13));
      const int n = 20000;
      std::vector<double> a(n), b(n);
      for (int r = 0; r < n; ++r) {
        const GridPath p = s.sample(r);
        a[r] = p(3);
        b[r] = p(8);
      }
      double cov = 0, cov2 = 0;
      for (int r = 0; r < n; ++r) {
        cov += a[r] * b[r];
        cov2 += a[r] * a[r] * b[r] * b[r];
      }
      cov /= n;
      const double se = std::sqrt((cov2 / n - cov * cov) / n);
      CHECK(std::abs(cov - fbm_covariance(3.0 / 8, 1.0, h)) < 4 * se);
    }
  }
}

TEST_CASE("multi-dimensional components are independent") {
  FbmSpec sp = spec(0.5, 4, FbmMethod::cholesky, 3);
  sp.dim = 2;
  FbmSampler s(sp);
  double c = 0;
  const int n = 20000;
  for (int r = 0; r < n; ++r) {
    const GridPath p = s.sample(r);
    c += p(4, 0) * p(4, 1);
  }
  CHECK(std::abs(c / n) < 4.0 / std::sqrt(n));
}
