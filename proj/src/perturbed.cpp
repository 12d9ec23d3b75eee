#include "roughsde/perturbed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roughsde/error.hpp"
#include "roughsde/paths.hpp"

namespace roughsde {

double rho(double alpha, double beta) {
  require(std::isfinite(alpha) && std::isfinite(beta) && alpha < 1.0 && beta < 1.0,
          ErrorKind::invalid_parameter, "perturbation weights must be below 1");
  return std::abs(alpha * beta) / ((1.0 - alpha) * (1.0 - beta));
}

std::vector<double> PerturbParams::rates() const {
  std::vector<double> r;
  for (std::size_t i = 0; i < alpha.size(); ++i) r.push_back(rho(alpha[i], beta[i]));
  return r;
}

void PerturbParams::validate() const {
  require(!alpha.empty() && alpha.size() == beta.size(), ErrorKind::invalid_parameter,
          "alpha and beta must be non-empty and of equal length");
  for (double r : rates())
    require(r < 1.0, ErrorKind::invalid_parameter, "perturbation is not contractive (rho >= 1)");
}

namespace {

using Vec = std::vector<double>;

double sup_diff(const Vec& a, const Vec& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// phi+(w,m)(t) = 1/(1-a) sup_{s<=t} ( w(s) - b/(1-b) sup_{u<=s} (-w(u) - a m(u)) ).
void phi_plus(const Vec& w, const Vec& m, double a, double b, Vec& out) {
  double inner = -std::numeric_limits<double>::infinity();
  double outer = -std::numeric_limits<double>::infinity();
  const double cb = b / (1.0 - b);
  for (std::size_t i = 0; i < w.size(); ++i) {
    inner = std::max(inner, -w[i] - a * m[i]);
    outer = std::max(outer, w[i] - cb * inner);
    out[i] = outer / (1.0 - a);
  }
}

// phi-(w,m)(t) = 1/(1-b) inf_{s<=t} ( w(s) + a/(1-a) sup_{u<=s} (w(u) + b m(u)) ).
void phi_minus(const Vec& w, const Vec& m, double a, double b, Vec& out) {
  double inner = -std::numeric_limits<double>::infinity();
  double outer = std::numeric_limits<double>::infinity();
  const double ca = a / (1.0 - a);
  for (std::size_t i = 0; i < w.size(); ++i) {
    inner = std::max(inner, w[i] + b * m[i]);
    outer = std::min(outer, w[i] + ca * inner);
    out[i] = outer / (1.0 - b);
  }
}

// Running min from the converged running max: m- = -1/(1-b) sup (-w - a M).
Vec running_min_from_max(const Vec& w, const Vec& hi, double a, double b) {
  Vec lo(w.size());
  double inner = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    inner = std::max(inner, -w[i] - a * hi[i]);
    lo[i] = -inner / (1.0 - b);
  }
  return lo;
}

struct Fixed {
  Vec hi;
  PerturbComponentLog log;
};

// Iterates hi <- map(hi) until the update drops to `target`, the budget of
// max_iter total iterations runs out, or the updates stop shrinking.
template <typename Map>
void iterate(Fixed& fx, const Vec& w, double r, double target, std::size_t max_iter, Map&& map) {
  if (fx.hi.empty()) fx.hi.assign(w.size(), 0.0);
  Vec next(w.size());
  while (fx.log.iterations < max_iter) {
    map(fx.hi, next);
    const double u = sup_diff(next, fx.hi);
    fx.hi.swap(next);
    fx.log.updates.push_back(u);
    ++fx.log.iterations;
    const std::size_t k = fx.log.updates.size();
    if (k == 1) {
      if (r <= 0.0 || u <= target) {
        fx.log.budget = 2;
      } else {
        const double b = std::ceil(std::log((1.0 - r) * target / u) / std::log(r));
        fx.log.budget = static_cast<std::size_t>(std::max(0.0, b)) + 2;
      }
    } else {
      const double prev = fx.log.updates[k - 2];
      // Ratios of round-off sized updates carry no information.
      if (prev > 1e3 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fx.hi.back())))
        fx.log.max_contraction = std::max(fx.log.max_contraction, u / prev);
      if (u == 0.0 || (u >= prev && prev <= 1e3 * std::numeric_limits<double>::epsilon() *
                                                   (1.0 + std::abs(fx.hi.back()))))
        return;
    }
    // With rho = 0 the map ignores its argument, so one pass is exact.
    if (r == 0.0 || u <= (1.0 - r) * target) return;
  }
}

}  // namespace

double perturb_step(double y, double hi, double lo, double alpha, double beta) {
  const double x = y + alpha * hi + beta * lo;
  if (x > hi) return (y + beta * lo) / (1.0 - alpha);
  if (x < lo) return (y + alpha * hi) / (1.0 - beta);
  return x;
}

GridPath perturb_forward(const GridPath& w, const PerturbParams& params) {
  params.validate();
  require(params.dim() == w.dim(), ErrorKind::invalid_input,
          "parameter and path dimensions differ");
  const std::size_t d = w.dim();
  std::vector<double> f(w.values().begin(), w.values().end());
  for (std::size_t c = 0; c < d; ++c) {
    const double a = params.alpha[c], b = params.beta[c];
    double hi = w(0, c) / (1.0 - a - b), lo = hi;
    f[c] = hi;
    for (std::size_t i = 1; i < w.size(); ++i) {
      const double x = perturb_step(w(i, c), hi, lo, a, b);
      f[i * d + c] = x;
      hi = std::max(hi, x);
      lo = std::min(lo, x);
    }
  }
  return w.with_values(std::move(f));
}

double perturb_residual(const GridPath& w, const GridPath& f, const PerturbParams& params) {
  require(w.same_grid(f) && w.dim() == f.dim() && params.dim() == w.dim(),
          ErrorKind::invalid_input, "paths and parameters do not match");
  const GridPath hi = running_max(f), lo = running_min(f);
  double r = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n)
    for (std::size_t i = 0; i < w.dim(); ++i)
      r = std::max(r, std::abs(f(n, i) - w(n, i) - params.alpha[i] * hi(n, i) -
                               params.beta[i] * lo(n, i)));
  return r;
}

PerturbResult perturb(const GridPath& w, const PerturbParams& params, PerturbOptions options) {
  params.validate();
  require(params.dim() == w.dim(), ErrorKind::invalid_input,
          "parameter and path dimensions differ");
  require(options.tol > 0.0, ErrorKind::invalid_parameter, "tolerance must be positive");
  require(options.max_iter >= 1, ErrorKind::invalid_parameter, "max_iter must be at least 1");
  const std::size_t d = w.dim(), n = w.size();
  std::vector<double> f(n * d), hi_all(n * d), lo_all(n * d);
  PerturbResult result{w, w, w, 0, 0.0, {}, 0.0};

  for (std::size_t c = 0; c < d; ++c) {
    const double a = params.alpha[c], b = params.beta[c];
    const double r = rho(a, b);
    const double w0 = w(0, c);
    const double f0 = w0 / (1.0 - a - b);
    Vec wc(n);
    for (std::size_t i = 0; i < n; ++i) wc[i] = w(i, c) - w0;

    auto plus = [&](const Vec& m, Vec& out) { phi_plus(wc, m, a, b, out); };
    Fixed fx;
    Vec lo, fc(n);
    // Tighten the update target until the reconstructed relation holds.
    double last = std::numeric_limits<double>::infinity();
    for (double target = options.tol;; target *= 0.0625) {
      iterate(fx, wc, r, target, options.max_iter, plus);
      lo = running_min_from_max(wc, fx.hi, a, b);
      for (std::size_t i = 0; i < n; ++i) fc[i] = wc[i] + a * fx.hi[i] + b * lo[i];
      const GridPath trial = GridPath::scalar(0.0, 1.0, fc);
      const double res = perturb_residual(GridPath::scalar(0.0, 1.0, wc), trial,
                                          PerturbParams{{a}, {b}});
      if (res <= options.tol || fx.log.iterations >= options.max_iter ||
          res >= last || r == 0.0)
        break;
      last = res;
    }
    for (std::size_t i = 0; i < n; ++i) {
      f[i * d + c] = fc[i] + f0;
      hi_all[i * d + c] = fx.hi[i] + f0;
      lo_all[i * d + c] = lo[i] + f0;
    }
    if (options.cross_check) {
      Fixed fm;
      iterate(fm, wc, r, options.tol, options.max_iter,
              [&](const Vec& m, Vec& out) { phi_minus(wc, m, a, b, out); });
      result.cross_check_distance = std::max(result.cross_check_distance, sup_diff(fm.hi, lo));
    }
    result.iterations = std::max(result.iterations, fx.log.iterations);
    result.log.push_back(std::move(fx.log));
  }
  result.f = w.with_values(std::move(f));
  result.running_max = w.with_values(std::move(hi_all));
  result.running_min = w.with_values(std::move(lo_all));
  result.residual = perturb_residual(w, result.f, params);
  require(result.residual <= options.tol, ErrorKind::non_convergence,
          "perturbed fixed point did not converge: residual " + format_double(result.residual) +
              " after " + std::to_string(result.iterations) + " iterations");
  return result;
}

double perturb_lipschitz_constant(double alpha, double beta) {
  const double r = rho(alpha, beta);
  require(r < 1.0, ErrorKind::invalid_parameter, "perturbation is not contractive (rho >= 1)");
  const double cplus = (1.0 + std::abs(beta) / (1.0 - beta)) / (1.0 - alpha);
  const double cminus = (1.0 + std::abs(alpha) / (1.0 - alpha)) / (1.0 - beta);
  return 1.0 + (std::abs(alpha) * cplus + std::abs(beta) * cminus) / (1.0 - r);
}

LipschitzCheck running_sup_lipschitz_check(const GridPath& w1, const GridPath& w2, double p) {
  require(w1.same_grid(w2) && w1.dim() == w2.dim(), ErrorKind::invalid_input,
          "paths do not share a grid");
  require(w1.dim() == 1, ErrorKind::invalid_input, "running-sup check takes scalar paths");
  require(w1(0) == 0.0 && w2(0) == 0.0, ErrorKind::invalid_input, "paths must start at 0");
  LipschitzCheck out;
  out.lhs = p_variation(running_max(w1) - running_max(w2), p);
  out.rhs = p_variation(w1 - w2, p);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

}  // namespace roughsde
