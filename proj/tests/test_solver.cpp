#include <doctest.h>

#include <cmath>

#include "roughsde/error.hpp"
#include "roughsde/fbm.hpp"
#include "roughsde/paths.hpp"
#include "roughsde/perturbed.hpp"
#include "roughsde/solver.hpp"

using namespace roughsde;

namespace {

GridPath fbm_path(double h, std::size_t n, std::uint64_t seed, std::size_t dim = 1) {
  FbmSpec s;
  s.hurst = h;
  s.steps = n;
  s.seed = seed;
  s.dim = dim;
  return FbmSampler(s).sample(0);
}

DriftField smooth_field() {
  Series1D s;
  s.poly = {0.0, -0.25};
  s.modes = {{1.0, 1.0, -M_PI / 2}, {2.0, 0.5, 0.0}};
  return DriftField::scalar(s);
}

SolveSpec base(GammaKind g, Scheme sc) {
  SolveSpec s;
  s.x0 = {0.5};
  s.gamma = g;
  s.domain = Domain::unit(1);
  s.perturb = {{0.3}, {-0.4}};
  s.field = smooth_field();
  s.path = fbm_path(0.75, 512, 3);
  s.scheme = sc;
  return s;
}

}  // namespace

TEST_CASE("names parse") {
  CHECK(parse_gamma_kind("skorokhod") == GammaKind::skorokhod);
  CHECK(to_string(Scheme::picard_young) == "picard_young");
  CHECK_THROWS_AS(parse_scheme("rk4"), Error);
}

TEST_CASE("zero drift: the solution is Gamma(x0 + w - w0) for both schemes") {
  for (auto g : {GammaKind::identity, GammaKind::skorokhod, GammaKind::perturbed}) {
    SolveSpec s = base(g, Scheme::euler_split);
    s.field = DriftField::zero(1);
    const SolveResult e = solve(s);
    s.scheme = Scheme::picard_young;
    const SolveResult p = solve(s);
    CHECK(sup_distance(e.x, p.x) == 0.0);
    CHECK(cross_scheme_check(s) == 0.0);
    if (g == GammaKind::identity) {
      for (std::size_t n = 0; n < s.path.size(); ++n)
        CHECK(e.x(n) == doctest::Approx(0.5 + s.path(n) - s.path(0)));
    }
  }
}

TEST_CASE("deterministic affine ODE: both schemes converge at first order") {
  // x' = 1 - x, x(0) = 0.5, w = 0: x(t) = 1 - 0.5 e^{-t}.
  const double exact = 1.0 - 0.5 * std::exp(-1.0);
  for (auto sc : {Scheme::euler_split, Scheme::picard_young}) {
    double prev = 0.0;
    for (std::size_t n : {128, 256, 512}) {
      SolveSpec s;
      s.x0 = {0.5};
      s.field = DriftField::affine(1, 1.0, -1.0);
      s.path = GridPath::sample(0.0, 1.0 / n, n, [](double) { return 0.0; });
      s.scheme = sc;
      const SolveResult r = solve(s);
      const double err = std::abs(r.x(n) - exact);
      CHECK(err < 1.0 / n);
      if (prev > 0.0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.05));
      prev = err;
    }
  }
}

TEST_CASE("constraints hold on the solution") {
  const SolveResult r = solve(base(GammaKind::skorokhod, Scheme::picard_young));
  for (std::size_t n = 0; n < r.x.size(); ++n) {
    CHECK(r.x(n) >= 0.0);
    CHECK(r.x(n) <= 1.0);
  }
  CHECK(sup_distance(r.theta, r.x - base(GammaKind::skorokhod, Scheme::picard_young).path) == 0.0);
  const SolveResult p = solve(base(GammaKind::perturbed, Scheme::picard_young));
  CHECK(p.residual < 1e-9);
}

TEST_CASE("picard diagnostics") {
  const SolveResult r = solve(base(GammaKind::skorokhod, Scheme::picard_young));
  const SolveDiagnostics& d = r.diagnostics;
  REQUIRE(d.available);
  CHECK(d.q == 1.9);
  CHECK(d.envelope_holds);
  CHECK(d.theta_qvar <= d.gronwall_envelope);
  CHECK(d.K > 0.0);
  CHECK_FALSE(d.updates.empty());
  CHECK(d.updates.back() <= 1e-10);
  CHECK(d.window_lo < 0.0);
  CHECK(d.window_hi > 1.0);
}

TEST_CASE("schemes agree to grid accuracy on a smooth drift") {
  for (auto g : {GammaKind::identity, GammaKind::skorokhod, GammaKind::perturbed}) {
    const double coarse = cross_scheme_check(base(g, Scheme::picard_young));
    CHECK(coarse < 0.01);
  }
}

TEST_CASE("two-dimensional solve") {
  SolveSpec s;
  s.x0 = {0.2, 0.8};
  s.gamma = GammaKind::skorokhod;
  s.domain = Domain::unit(2);
  s.field = DriftField::affine(2, 0.5, -1.0);
  s.path = fbm_path(0.6, 256, 9, 2);
  s.scheme = Scheme::picard_young;
  const SolveResult p = solve(s);
  s.scheme = Scheme::euler_split;
  const SolveResult e = solve(s);
  CHECK(sup_distance(p.x, e.x) < 0.02);
  for (std::size_t n = 0; n < p.x.size(); ++n) CHECK(Domain::unit(2).contains(p.x.node(n)));
}

TEST_CASE("invalid problems") {
  SolveSpec s = base(GammaKind::skorokhod, Scheme::euler_split);
  s.x0 = {1.5};
  try {
    solve(s);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_initial_condition);
  }
  s = base(GammaKind::identity, Scheme::euler_split);
  s.field = synthesize_field(-0.2, 1, 5);
  try {
    solve(s);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::contract_violation);
  }
  s = base(GammaKind::identity, Scheme::picard_young);
  s.max_iter = 1;
  CHECK_THROWS_AS(solve(s), Error);
}

TEST_CASE("stability experiment") {
  StabilityOptions o;
  o.noise.hurst = 0.6;
  o.noise.steps = 128;
  o.noise.seed = 4;
  o.samples = 20;
  o.threads = 2;
  SolveSpec a = base(GammaKind::identity, Scheme::euler_split);
  CHECK(stability_experiment(a, a, o).lhs == 0.0);

  // x0 ladder with a Lipschitz drift: lhs / |dx0| stays bounded.
  std::vector<double> ratios;
  for (double dx : {0.1, 0.01, 0.001}) {
    SolveSpec b = a;
    b.x0 = {a.x0[0] + dx};
    const StabilityResult r = stability_experiment(a, b, o);
    CHECK(r.rhs_scale == doctest::Approx(dx));
    ratios.push_back(r.lhs / dx);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo < 1.5);
  o.samples = 1;
  CHECK_THROWS_AS(stability_experiment(a, a, o), Error);
}

TEST_CASE("linear decay without noise matches exp(-t)") {
  constexpr std::size_t n = 1 << 12;
  for (auto sc : {Scheme::euler_split, Scheme::picard_young}) {
    SolveSpec s;
    s.x0 = {1.0};
    s.field = DriftField::affine(1, 0.0, -1.0);
    s.path = GridPath::sample(0.0, 1.0 / n, n, [](double) { return 0.0; });
    s.scheme = sc;
    const SolveResult r = solve(s);
    double err = 0.0;
    for (std::size_t i = 0; i <= n; ++i) err = std::max(err, std::abs(r.x(i) - std::exp(-r.x.time(i))));
    CHECK(err < 1e-4);
  }
}
