// Acceptance runner: `acceptance [n]` checks criterion n (1-11), or all of
// them, and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "roughsde/error.hpp"
#include "roughsde/experiments.hpp"
#include "roughsde/fbm.hpp"
#include "roughsde/paths.hpp"
#include "roughsde/perturbed.hpp"
#include "roughsde/rng.hpp"
#include "roughsde/skorokhod.hpp"
#include "roughsde/stats.hpp"
#include "roughsde/young.hpp"

using namespace roughsde;

namespace {

constexpr std::uint64_t kSeed = 20261016;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  KonevarConfig c;
  c.steps = 1 << 12;
  c.samples = 10000;
  c.sharpness_n = {};
  const KonevarReport r = run_konevar_campaign(c, {kSeed, 0, 0.0});
  const double elapsed = seconds_since(t0);
  bool ok = elapsed <= 300.0 && !r.budget_cut;
  std::string d;
  for (const KonevarHurst& h : r.by_hurst) {
    ok = ok && h.samples == 10000 && h.violations == 0;
    d += fmt("H=%.2f violations=%zu/%zu max_ratio=%.4f; ", h.hurst, h.violations, h.samples,
             h.max_ratio);
  }
  return {ok, d + fmt("runtime=%.1fs", elapsed)};
}

Outcome c2() {
  KonevarConfig c;
  c.hursts = {0.5};
  c.samples = 1;
  c.steps = 16;
  c.sharpness_n = {4, 8, 16, 32};
  c.sharpness_steps = 1 << 14;
  const KonevarReport r = run_konevar_campaign(c, {kSeed, 0, 0.0});
  std::string d;
  bool ok = r.sharpness.size() == 4 && r.sharpness_spread <= 0.10;
  for (const SharpnessPoint& p : r.sharpness) {
    ok = ok && p.holds;
    d += fmt("N=%d |K|/N=%.6f; ", p.n, p.per_n);
  }
  return {ok, d + fmt("spread=%.2e", r.sharpness_spread)};
}

// Random walk from 0 with Gaussian steps of scale s.
GridPath walk(Rng& rng, std::size_t n, double s) {
  std::vector<double> v(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) v[i] = v[i - 1] + s * rng.normal();
  return GridPath::scalar(0.0, 1.0 / n, std::move(v));
}

Outcome c3() {
  Rng rng(kSeed, 3);
  std::size_t checked = 0, failures = 0;
  double worst = 0.0;
  for (int pair = 0; pair < 1000; ++pair) {
    const std::size_t n = 8 + rng.below(250);
    const GridPath w1 = walk(rng, n, 1.0);
    // Alternate between independent pairs and small perturbations.
    const GridPath w2 = pair % 2 ? walk(rng, n, 1.0) : w1 + walk(rng, n, 0.05);
    for (double p : {1.0, 1.5, 2.0}) {
      const LipschitzCheck l = running_sup_lipschitz_check(w1, w2, p);
      ++checked;
      failures += !l.holds;
      if (l.rhs > 0.0) worst = std::max(worst, l.lhs / l.rhs);
    }
  }
  return {failures == 0, fmt("checks=%zu failures=%zu max lhs/rhs=%.6f", checked, failures, worst)};
}

Outcome c4() {
  ContractionConfig c;
  c.instances = 100;
  const ContractionReport r = run_contraction_campaign(c, {kSeed, 0, 0.0});
  double max_rho = 0.0;
  for (const ContractionInstance& i : r.instances) max_rho = std::max(max_rho, i.rho);
  const bool ok = r.holds && r.instances.size() == 100 && max_rho < 0.9 &&
                  r.worst_excess <= 0.05 && r.worst_residual <= 1e-10;
  return {ok, fmt("instances=%zu max rho=%.3f worst factor-rho=%.4f worst residual=%.2e",
                  r.instances.size(), max_rho, r.worst_excess, r.worst_residual)};
}

// Pooled variance of normalized increments (W_{t+dt} - W_t) / dt^H.
double pooled_increment_variance(const std::vector<GridPath>& paths, double hurst) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const GridPath& w : paths) {
    const double scale = std::pow(w.dt(), -hurst);
    for (std::size_t i = 0; i < w.steps(); ++i) {
      const double z = (w(i + 1) - w(i)) * scale;
      sum += z * z;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

Outcome c5() {
  constexpr std::size_t samples = 100000, steps = 16;
  bool ok = true;
  std::string d;
  for (double h : {0.25, 0.5, 0.75}) {
    FbmSpec s;
    s.hurst = h;
    s.steps = steps;
    s.seed = kSeed;
    const std::vector<GridPath> paths = sample_fbm(s, samples, 0);
    // Entrywise mean of products against the exact covariance, in units of
    // the Monte Carlo standard error of that mean.
    double worst_z = 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
      for (std::size_t j = i; j <= steps; ++j) {
        double m = 0.0, m2 = 0.0;
        for (const GridPath& w : paths) {
          const double x = w(i) * w(j);
          m += x;
          m2 += x * x;
        }
        m /= samples;
        const double var = m2 / samples - m * m;
        const double se = std::sqrt(var / samples);
        const double exact = fbm_covariance(paths[0].time(i), paths[0].time(j), h);
        worst_z = std::max(worst_z, std::abs(m - exact) / se);
      }
    }
    s.method = FbmMethod::cholesky;
    const double vc = pooled_increment_variance(sample_fbm(s, samples, 0), h);
    s.method = FbmMethod::circulant;
    const double vf = pooled_increment_variance(sample_fbm(s, samples, 0), h);
    const double rel = std::abs(vc - vf) / vf;
    ok = ok && worst_z <= 3.0 && rel < 0.01;
    d += fmt("H=%.2f max|err|/se=%.2f chol/circ var rel=%.2e; ", h, worst_z, rel);
  }
  return {ok, d};
}

// Supremum over all subsequences of at least two nodes.
double brute_force_pvar(const std::vector<double>& v, double p) {
  const std::size_t n = v.size();
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int prev = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (prev >= 0) sum += std::pow(std::abs(v[i] - v[prev]), p);
      prev = static_cast<int>(i);
    }
    best = std::max(best, sum);
  }
  return std::pow(best, 1.0 / p);
}

Outcome c6() {
  Rng rng(kSeed, 6);
  std::size_t checked = 0, mismatches = 0;
  double worst = 0.0;
  for (int draw = 0; draw < 10000; ++draw) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<double> v(n);
    for (double& x : v) x = static_cast<double>(rng.below(5)) - 2.0;
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double dp = p_variation(v, p);
      const double bf = brute_force_pvar(v, p);
      const double err = std::abs(dp - bf) / std::max(1.0, bf);
      worst = std::max(worst, err);
      mismatches += err > 1e-12;
      ++checked;
    }
  }
  return {mismatches == 0, fmt("cases=%zu mismatches=%zu max rel err=%.2e", checked, mismatches, worst)};
}

struct ClosedFormCase {
  const char* name;
  std::function<double(double)> g, dg, h, theta;
  double exact;
};

Outcome c7() {
  const std::vector<ClosedFormCase> cases = {
      {"x^2 d t along t", [](double x) { return x * x; }, [](double x) { return 2 * x; },
       [](double t) { return t; }, [](double t) { return t; }, 1.0 / 3.0},
      {"sin x d t^2 along t", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
       [](double t) { return t * t; }, [](double t) { return t; },
       2.0 * (std::sin(1.0) - std::cos(1.0))},
      {"x^2 d t along cos 3t", [](double x) { return x * x; }, [](double x) { return 2 * x; },
       [](double t) { return t; }, [](double t) { return std::cos(3 * t); },
       0.5 + std::sin(6.0) / 12.0},
  };
  bool ok = true;
  std::string d;
  for (const ClosedFormCase& c : cases) {
    std::vector<double> logn, logerr;
    for (std::size_t n = 256; n <= 4096; n *= 2) {
      const GridPath h = GridPath::sample(0.0, 1.0 / n, n, c.h);
      const GridPath theta = GridPath::sample(0.0, 1.0 / n, n, c.theta);
      const YoungResult r = nonlinear_young_integral(Germ::separable(h, c.g, c.dg), theta);
      logn.push_back(std::log(static_cast<double>(n)));
      logerr.push_back(std::log(std::abs(r.path(n) - c.exact)));
    }
    const double order = -fit_line(logn, logerr).slope;
    ok = ok && order >= 1.9;
    d += fmt("%s order=%.3f; ", c.name, order);
  }

  constexpr std::size_t n = 1024;
  const GridPath h = GridPath::sample(0.0, 1.0 / n, n, [](double t) { return t; });
  const std::vector<std::pair<GridPath, GridPath>> pairs = {
      {h, GridPath::sample(0.0, 1.0 / n, n, [](double) { return 0.0; })},
      {GridPath::sample(0.0, 1.0 / n, n, [](double t) { return std::sin(4 * t); }),
       GridPath::sample(0.0, 1.0 / n, n, [](double t) { return std::cos(t); })},
  };
  double worst = 0.0;
  for (const ClosedFormCase& c : cases) {
    const Germ A = Germ::separable(GridPath::sample(0.0, 1.0 / n, n, c.h), c.g, c.dg);
    for (const auto& [theta, bar] : pairs) {
      const GridPath lhs =
          nonlinear_young_integral(A, theta).path - nonlinear_young_integral(A, bar).path;
      const GridPath rhs = matrix_young_integral(linearize_difference(A, theta, bar), theta - bar);
      worst = std::max(worst, sup_distance(lhs, rhs));
    }
  }
  ok = ok && worst <= 1e-6;
  return {ok, d + fmt("linearization max defect=%.2e", worst)};
}

Outcome c8() {
  TailConfig c;
  c.hurst = 0.25;
  c.samples = 100000;
  const TailReport r = run_tail_campaign(c, {kSeed, 0, 0.0});
  std::string d = fmt("H=0.25 samples=%zu exponent=%.3f 90%% CI=[%.3f, %.3f] target=%.2f; ",
                      r.samples, r.fit.exponent, r.fit.interval.lo, r.fit.interval.hi, r.target);
  bool calibrated = true;
  for (double kappa : {0.8, 1.5, 3.0}) {
    Rng rng(kSeed, static_cast<std::uint64_t>(kappa * 100));
    std::vector<double> v(100000);
    for (double& x : v) x = std::pow(-std::log(1.0 - rng.uniform()), 1.0 / kappa);
    TailOptions o;
    o.resamples = 100;
    const TailFit f = fit_weibull_tail(v, o);
    const double rel = std::abs(f.exponent - kappa) / kappa;
    calibrated = calibrated && rel <= 0.05;
    d += fmt("synthetic %.1f -> %.3f; ", kappa, f.exponent);
  }
  return {r.contains_target && r.samples == 100000 && calibrated, d};
}

Outcome c9() {
  RegularityConfig c;
  const RegularityReport none = run_regularity_campaign(c, {kSeed, 0, 0.0});
  c.perturbation = Perturbation::reflected;
  const RegularityReport refl = run_regularity_campaign(c, {kSeed, 0, 0.0});
  const double gap = std::abs(none.fit.slope - refl.fit.slope);
  const bool ok = none.fit.slope >= 0.85 && none.fit.r2 >= 0.9 && refl.fit.r2 >= 0.9 && gap <= 0.15;
  return {ok, fmt("unperturbed slope=%.3f R2=%.5f; reflected slope=%.3f R2=%.5f; gap=%.3f",
                  none.fit.slope, none.fit.r2, refl.fit.slope, refl.fit.r2, gap)};
}

Outcome c10() {
  StabilityConfig c;
  c.samples = 1000;
  c.moments = {1, 2};
  const StabilityReport r = run_stability_campaign(c, {kSeed, 0, 0.0});
  bool ok = r.fits.size() == 2 && !r.budget_cut;
  std::string d;
  for (std::size_t m = 0; m < r.fits.size(); ++m) {
    const double slope = r.fits[m].slope;
    ok = ok && slope >= 0.8 && slope <= 1.2;
    d += fmt("m=%d slope=%.3f R2=%.4f; ", c.moments[m], slope, r.fits[m].r2);
  }
  return {ok, d + fmt("identical specs give 0: %s", r.identical_zero ? "yes" : "no")};
}

Outcome c11() {
  const CrossSchemeReport r = run_cross_scheme_campaign(CrossSchemeConfig{}, {kSeed, 0, 0.0});
  bool ok = r.series.size() == 2;
  std::string d;
  for (const CrossSchemeSeries& s : r.series) {
    const double order = s.fit.slope;
    ok = ok && order >= 0.9 && s.zero_drift_distance == 0.0;
    d += fmt("%s order=%.3f zero-drift distance=%.1e; ", std::string(to_string(s.gamma)).c_str(),
             order, s.zero_drift_distance);
  }
  return {ok, d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {c1, c2, c3, c4,  c5, c6,
                                                          c7, c8, c9, c10, c11};
  std::vector<int> which;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
      return 2;
    }
    which.push_back(n);
  } else {
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) which.push_back(n);
  }
  int failed = 0;
  for (int n : which) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("C%d %s %s(%.1fs)\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
