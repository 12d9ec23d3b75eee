#include "roughsde/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roughsde/error.hpp"
#include "roughsde/parallel.hpp"
#include "roughsde/paths.hpp"

namespace roughsde {

Domain Domain::unit(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

Domain Domain::half_line(std::size_t dim) {
  return {std::vector<double>(dim, 0.0),
          std::vector<double>(dim, std::numeric_limits<double>::infinity())};
}

void Domain::validate() const {
  require(!lower.empty() && lower.size() == upper.size(), ErrorKind::invalid_parameter,
          "domain bounds must be non-empty and of equal length");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    require(!std::isnan(lower[i]) && !std::isnan(upper[i]), ErrorKind::invalid_parameter,
            "domain bounds must not be NaN");
    require(lower[i] < upper[i] && lower[i] != std::numeric_limits<double>::infinity() &&
                upper[i] != -std::numeric_limits<double>::infinity(),
            ErrorKind::invalid_parameter, "domain needs lower < upper in every coordinate");
  }
}

bool Domain::contains(std::span<const double> x) const noexcept {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  return true;
}

bool Domain::unit_width() const noexcept {
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(std::abs(upper[i] - lower[i] - 1.0) <= 1e-12)) return false;
  return true;
}

namespace {

ReflectionResult finish(const GridPath& shape, std::vector<double> x, std::vector<double> k) {
  ReflectionResult r{shape.with_values(std::move(x)), shape.with_values(std::move(k)), 0.0, {}};
  r.k_onevar = p_variation(r.k, 1.0);
  for (std::size_t i = 0; i < shape.dim(); ++i)
    r.k_onevar_component.push_back(p_variation(r.k, 1.0, {}, i));
  return r;
}

// Runs the clamp recursion from x[0..d) using the increments of `driver`.
void clamp_recursion(const GridPath& driver, const Domain& domain, std::vector<double>& x,
                     std::vector<double>& k) {
  const std::size_t d = driver.dim();
  for (std::size_t n = 0; n + 1 < driver.size(); ++n) {
    for (std::size_t i = 0; i < d; ++i) {
      const double free = x[n * d + i] + (driver(n + 1, i) - driver(n, i));
      const double next = std::clamp(free, domain.lower[i], domain.upper[i]);
      x[(n + 1) * d + i] = next;
      k[(n + 1) * d + i] = k[n * d + i] + (next - free);
    }
  }
}

}  // namespace

ReflectionResult reflect(const GridPath& path, const Domain& domain, ReflectOptions options) {
  domain.validate();
  require(domain.dim() == path.dim(), ErrorKind::invalid_input,
          "domain and path dimensions differ");
  const std::size_t d = path.dim();
  std::vector<double> x(path.values().size()), k(path.values().size(), 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const double start = path(0, i);
    if (!options.project_initial)
      require(start >= domain.lower[i] && start <= domain.upper[i],
              ErrorKind::invalid_initial_condition, "path starts outside the domain");
    x[i] = std::clamp(start, domain.lower[i], domain.upper[i]);
    k[i] = x[i] - start;
  }
  clamp_recursion(path, domain, x, k);
  return finish(path, std::move(x), std::move(k));
}

ReflectionResult reflect_increments(std::span<const double> x0, const GridPath& driver,
                                    const Domain& domain) {
  domain.validate();
  require(domain.dim() == driver.dim() && x0.size() == driver.dim(), ErrorKind::invalid_input,
          "domain, start and driver dimensions differ");
  require(domain.contains(x0), ErrorKind::invalid_initial_condition,
          "starting point lies outside the domain");
  std::vector<double> x(driver.values().size()), k(driver.values().size(), 0.0);
  std::copy(x0.begin(), x0.end(), x.begin());
  clamp_recursion(driver, domain, x, k);
  return finish(driver, std::move(x), std::move(k));
}

bool sign_condition_holds(const ReflectionResult& result, const Domain& domain) {
  const GridPath& x = result.reflected;
  const GridPath& k = result.k;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double width = domain.upper[i] - domain.lower[i];
    const double scale = std::isfinite(width)
                             ? width
                             : std::max(1.0, std::isfinite(domain.lower[i])
                                                 ? std::abs(domain.lower[i])
                                                 : std::abs(domain.upper[i]));
    const double tol = 1e-12 * scale;
    for (std::size_t n = 1; n < x.size(); ++n) {
      const double dk = k(n, i) - k(n - 1, i);
      if (dk > 0.0 && !(x(n, i) <= domain.lower[i] + tol)) return false;
      if (dk < 0.0 && !(x(n, i) >= domain.upper[i] - tol)) return false;
    }
  }
  return true;
}

OneVarBound reflection_onevar_bound_check(const GridPath& path, const Domain& domain,
                                          ReflectOptions options) {
  domain.validate();
  require(domain.unit_width(), ErrorKind::invalid_parameter,
          "the bound is stated for unit-width domains; rescale first");
  const ReflectionResult r = reflect(path, domain, options);
  OneVarBound out;
  for (std::size_t i = 0; i < path.dim(); ++i) {
    const double lhs = r.k_onevar_component[i];
    const double rhs = static_cast<double>(oscillation_count(path, 1.0, i).count) + 1.0;
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    if (!(lhs <= rhs * (1.0 + 1e-12))) out.holds = false;
  }
  return out;
}

namespace {

double tail_slope(std::span<const double> data) {
  std::vector<double> v(data.begin(), data.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const auto start = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(n)));
  std::vector<double> lx, ly;
  for (std::size_t i = start; i < n; ++i) {
    if (!(v[i] > 0.0)) continue;
    const double s = (static_cast<double>(n - i) - 0.5) / static_cast<double>(n);
    lx.push_back(std::log(v[i]));
    ly.push_back(std::log(-std::log(s)));
  }
  return fit_line(lx, ly).slope;
}

}  // namespace

TailFit fit_weibull_tail(std::span<const double> data, const TailOptions& options) {
  require(data.size() >= options.min_samples, ErrorKind::insufficient_data,
          "tail fit needs at least " + std::to_string(options.min_samples) + " samples");
  std::size_t positive_tail = 0;
  {
    std::vector<double> v(data.begin(), data.end());
    std::sort(v.begin(), v.end());
    const auto start = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(v.size())));
    for (std::size_t i = start; i < v.size(); ++i) positive_tail += v[i] > 0.0;
  }
  require(positive_tail >= 10, ErrorKind::insufficient_data,
          "too few positive samples in the upper decile");
  TailFit fit;
  fit.samples = data.size();
  fit.tail_points = positive_tail;
  fit.exponent = tail_slope(data);
  fit.interval = bootstrap_interval(data, tail_slope, options.resamples, options.level,
                                    options.bootstrap_seed);
  return fit;
}

TailExperiment tail_exponent_experiment(const FbmSpec& spec, const Domain& domain,
                                        std::size_t samples, const TailOptions& options,
                                        std::size_t threads) {
  require(spec.hurst < 0.5, ErrorKind::invalid_parameter,
          "tail exponent experiment is defined for H < 1/2");
  domain.validate();
  require(domain.dim() == spec.dim, ErrorKind::invalid_input, "domain and fBm dimensions differ");
  FbmSampler sampler(spec);
  TailExperiment out;
  out.k_onevar.resize(samples);
  parallel_for(samples, threads, [&](std::size_t r) {
    GridPath w = sampler.sample(r);
    std::vector<double> x0(domain.dim());
    for (std::size_t i = 0; i < domain.dim(); ++i)
      x0[i] = std::clamp(0.0, domain.lower[i], domain.upper[i]);
    out.k_onevar[r] = reflect_increments(x0, w, domain).k_onevar_component[0];
  });
  out.fit = fit_weibull_tail(out.k_onevar, options);
  return out;
}

}  // namespace roughsde
