#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace roughsde {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y ~ intercept + slope*x. Needs at least two
// distinct abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
// Unbiased sample variance.
double variance(std::span<const double> v);
// Linear interpolation between order statistics, q in [0,1].
double quantile(std::vector<double> v, double q);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

// Percentile bootstrap interval of `statistic` over resamples of `data`.
Interval bootstrap_interval(std::span<const double> data,
                            const std::function<double(std::span<const double>)>& statistic,
                            std::size_t resamples, double level, std::uint64_t seed);

}  // namespace roughsde
