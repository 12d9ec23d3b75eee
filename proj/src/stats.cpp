#include "roughsde/stats.hpp"

#include <algorithm>
#include <cmath>

#include "roughsde/error.hpp"
#include "roughsde/rng.hpp"

namespace roughsde {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::invalid_input, "regression inputs differ in length");
  require(x.size() >= 2, ErrorKind::insufficient_data, "regression needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, ErrorKind::insufficient_data, "regression abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

double mean(std::span<const double> v) {
  require(!v.empty(), ErrorKind::insufficient_data, "mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  require(v.size() >= 2, ErrorKind::insufficient_data, "variance needs two samples");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double quantile(std::vector<double> v, double q) {
  require(!v.empty(), ErrorKind::insufficient_data, "quantile of empty sample");
  require(q >= 0.0 && q <= 1.0, ErrorKind::invalid_parameter, "quantile level outside [0,1]");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

Interval bootstrap_interval(std::span<const double> data,
                            const std::function<double(std::span<const double>)>& statistic,
                            std::size_t resamples, double level, std::uint64_t seed) {
  require(!data.empty(), ErrorKind::insufficient_data, "bootstrap of empty sample");
  require(resamples >= 2, ErrorKind::invalid_parameter, "bootstrap needs at least two resamples");
  require(level > 0.0 && level < 1.0, ErrorKind::invalid_parameter,
          "bootstrap level must lie in (0,1)");
  Rng rng(seed, 0xb0075);
  std::vector<double> draw(data.size());
  std::vector<double> stats;
  stats.reserve(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    for (auto& d : draw) d = data[rng.below(data.size())];
    stats.push_back(statistic(draw));
  }
  const double tail = 0.5 * (1.0 - level);
  return {quantile(stats, tail), quantile(stats, 1.0 - tail)};
}

}  // namespace roughsde
