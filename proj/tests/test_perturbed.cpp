#include <doctest.h>

#include <cmath>

#include "roughsde/error.hpp"
#include "roughsde/paths.hpp"
#include "roughsde/perturbed.hpp"
#include "roughsde/rng.hpp"

using namespace roughsde;

namespace {

GridPath walk(Rng& rng, std::size_t n, double start = 0.0) {
  std::vector<double> v(n + 1);
  v[0] = start;
  for (std::size_t i = 1; i <= n; ++i) v[i] = v[i - 1] + rng.normal() / std::sqrt(double(n));
  return GridPath::scalar(0.0, 1.0 / n, std::move(v));
}

}  // namespace

TEST_CASE("rho and parameter validation") {
  CHECK(rho(0.5, -0.5) == doctest::Approx(0.25 / (0.5 * 1.5)));
  CHECK(rho(0.0, 0.7) == 0.0);
  CHECK_THROWS_AS((PerturbParams{{1.0}, {0.0}}.validate()), Error);
  CHECK_THROWS_AS((PerturbParams{{0.9}, {-9.0}}.validate()), Error);  // rho = 8.1/1 > 1
  CHECK_NOTHROW((PerturbParams{{0.5}, {-0.5}}.validate()));
}

TEST_CASE("zero weights give the identity map") {
  Rng rng(1);
  const GridPath w = walk(rng, 200, 0.3);
  const PerturbResult r = perturb(w, {{0.0}, {0.0}});
  CHECK(sup_distance(r.f, w) < 1e-15);
}

TEST_CASE("only a running max: closed form f = w + a/(1-a) max w") {
  // With beta = 0 and w(0) = 0 the fixed point is explicit.
  Rng rng(2);
  const GridPath w = walk(rng, 300);
  const double a = 0.4;
  const PerturbResult r = perturb(w, {{a}, {0.0}});
  const GridPath m = running_max(w);
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(r.f(i) == doctest::Approx(w(i) + a / (1 - a) * m(i)).epsilon(1e-12));
}

TEST_CASE("fixed point satisfies its defining relation") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    double a, b;
    do {
      a = rng.uniform(-3.0, 1.0);
      b = rng.uniform(-3.0, 1.0);
    } while (rho(a, b) >= 0.9);
    const GridPath w = walk(rng, 256, rng.normal());
    PerturbOptions o;
    o.cross_check = true;
    const PerturbResult r = perturb(w, {{a}, {b}}, o);
    CHECK(r.residual <= 1e-10);
    CHECK(perturb_residual(w, r.f, {{a}, {b}}) == r.residual);
    CHECK(sup_distance(running_max(r.f), r.running_max) < 1e-9);
    CHECK(r.cross_check_distance < 1e-8);
    // The iteration and the forward recursion agree.
    CHECK(sup_distance(r.f, perturb_forward(w, {{a}, {b}})) < 1e-9);
    CHECK(r.log[0].max_contraction <= rho(a, b) + 0.05);
  }
}

TEST_CASE("perturb_step solves the one-node equation") {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double lo = rng.uniform(-2, 0), hi = lo + rng.uniform(0, 2);
    const double a = rng.uniform(-2, 0.9), b = rng.uniform(-2, 0.9);
    const double y = rng.uniform(-4, 4);
    const double x = perturb_step(y, hi, lo, a, b);
    CHECK(x == doctest::Approx(y + a * std::max(hi, x) + b * std::min(lo, x)).epsilon(1e-12));
  }
}

TEST_CASE("multi-component paths are handled per component") {
  Rng rng(5);
  const GridPath a = walk(rng, 100), b = walk(rng, 100);
  std::vector<double> v;
  for (std::size_t i = 0; i < a.size(); ++i) {
    v.push_back(a(i));
    v.push_back(b(i));
  }
  const GridPath w(0.0, a.dt(), 2, v);
  const PerturbParams p{{0.3, -0.5}, {-0.2, 0.4}};
  const PerturbResult r = perturb(w, p);
  CHECK(sup_distance(r.f.component(0), perturb(a, {{0.3}, {-0.2}}).f) < 1e-12);
  CHECK(sup_distance(r.f.component(1), perturb(b, {{-0.5}, {0.4}}).f) < 1e-12);
}

TEST_CASE("running-sup map is 1-Lipschitz in p-variation") {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const GridPath w1 = walk(rng, 60), w2 = walk(rng, 60);
    for (double p : {1.0, 1.5, 2.0}) {
      const LipschitzCheck c = running_sup_lipschitz_check(w1, w2, p);
      CHECK(c.holds);
      CHECK(c.lhs <= c.rhs * (1 + 1e-12));
    }
  }
}

TEST_CASE("non-convergence is reported") {
  Rng rng(7);
  const GridPath w = walk(rng, 200);
  PerturbOptions o;
  o.max_iter = 1;
  CHECK_THROWS_AS(perturb(w, {{0.8}, {-3.0}}, o), Error);
}

TEST_CASE("Lipschitz constant of the full map") {
  CHECK(perturb_lipschitz_constant(0.0, 0.0) == 1.0);
  CHECK(perturb_lipschitz_constant(0.5, -0.5) > 1.0);
  CHECK_THROWS_AS(perturb_lipschitz_constant(0.9, -9.0), Error);
}
