#include "roughsde/paths.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "roughsde/error.hpp"

namespace roughsde {

namespace {

IndexWindow resolve(const GridPath& path, std::optional<IndexWindow> window) {
  IndexWindow w = window.value_or(IndexWindow{0, path.steps()});
  require(w.first <= w.last && w.last < path.size(), ErrorKind::invalid_window,
          "window [" + std::to_string(w.first) + "," + std::to_string(w.last) +
              "] is empty or outside the grid");
  return w;
}

void check_component(const GridPath& path, ComponentSelect component) {
  if (component)
    require(*component < path.dim(), ErrorKind::invalid_parameter, "component index out of range");
}

double increment(const GridPath& path, std::size_t i, std::size_t j, ComponentSelect component) {
  if (component) return std::abs(path(j, *component) - path(i, *component));
  if (path.dim() == 1) return std::abs(path(j) - path(i));
  double s = 0.0;
  for (std::size_t k = 0; k < path.dim(); ++k) {
    const double d = path(j, k) - path(i, k);
    s += d * d;
  }
  return std::sqrt(s);
}

// Drops interior nodes through which the sequence is monotone; for p >= 1
// they never enlarge the sum, since (a+b)^p >= a^p + b^p for a,b >= 0.
std::vector<double> turning_points(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    if (!out.empty() && x == out.back()) continue;
    if (out.size() >= 2) {
      const double a = out[out.size() - 2], b = out.back();
      if ((b - a) * (x - b) > 0.0) out.back() = x;
      else out.push_back(x);
    } else {
      out.push_back(x);
    }
  }
  return out;
}

double power(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

template <typename Dist>
double subsequence_dp(std::size_t n, double p, Dist&& dist) {
  if (n < 2) return 0.0;
  std::vector<double> best(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    double b = 0.0;
    for (std::size_t i = 0; i < j; ++i) b = std::max(b, best[i] + power(dist(i, j), p));
    best[j] = b;
  }
  return best[n - 1];
}

}  // namespace

double p_variation(std::span<const double> values, double p) {
  require(p >= 1.0 && std::isfinite(p), ErrorKind::invalid_parameter, "p must be at least 1");
  if (values.size() < 2) return 0.0;
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) s += std::abs(values[i] - values[i - 1]);
    return s;
  }
  const auto v = turning_points(values);
  const double sum = subsequence_dp(v.size(), p, [&](std::size_t i, std::size_t j) {
    return std::abs(v[j] - v[i]);
  });
  return std::pow(sum, 1.0 / p);
}

double p_variation(const GridPath& path, double p, std::optional<IndexWindow> window,
                   ComponentSelect component) {
  require(p >= 1.0 && std::isfinite(p), ErrorKind::invalid_parameter, "p must be at least 1");
  const IndexWindow w = resolve(path, window);
  check_component(path, component);
  if (component || path.dim() == 1) {
    const std::size_t k = component.value_or(0);
    std::vector<double> v;
    v.reserve(w.last - w.first + 1);
    for (std::size_t i = w.first; i <= w.last; ++i) v.push_back(path(i, k));
    return p_variation(v, p);
  }
  const std::size_t n = w.last - w.first + 1;
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t i = w.first; i < w.last; ++i) s += increment(path, i, i + 1, {});
    return s;
  }
  const double sum = subsequence_dp(n, p, [&](std::size_t i, std::size_t j) {
    return increment(path, w.first + i, w.first + j, {});
  });
  return std::pow(sum, 1.0 / p);
}

double holder_norm(const GridPath& path, double gamma, std::optional<IndexWindow> window,
                   ComponentSelect component) {
  require(gamma > 0.0 && gamma <= 1.0, ErrorKind::invalid_parameter,
          "Hoelder exponent must lie in (0,1]");
  const IndexWindow w = resolve(path, window);
  check_component(path, component);
  const std::size_t n = w.last - w.first + 1;
  std::vector<double> inv_lag(n);
  for (std::size_t l = 1; l < n; ++l)
    inv_lag[l] = 1.0 / std::pow(static_cast<double>(l) * path.dt(), gamma);
  double best = 0.0;
  for (std::size_t i = w.first; i <= w.last; ++i)
    for (std::size_t j = i + 1; j <= w.last; ++j)
      best = std::max(best, increment(path, i, j, component) * inv_lag[j - i]);
  return best;
}

OscillationResult oscillation_count(const GridPath& path, double delta, ComponentSelect component) {
  require(delta > 0.0 && std::isfinite(delta), ErrorKind::invalid_parameter,
          "oscillation level must be positive");
  require(component || path.dim() == 1, ErrorKind::invalid_parameter,
          "oscillation count needs a scalar path or a selected component");
  check_component(path, component);
  const std::size_t k = component.value_or(0);
  const double slack = 1e-12 * delta;
  const double T = path.horizon();

  OscillationResult out;
  double hi = path(0, k), lo = path(0, k);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    double a = path(i, k);
    const double b = path(i + 1, k);
    double frac0 = 0.0;  // position within the step of the current segment start
    while (true) {
      // Level at which the next stopping time fires on this segment.
      double level;
      if (b > a) level = lo + delta;
      else if (b < a) level = hi - delta;
      else break;
      const bool hit = b > a ? b >= level - slack : b <= level + slack;
      if (!hit) break;
      double frac = frac0 + (1.0 - frac0) * (level - a) / (b - a);
      double value = level;
      if (frac >= 1.0 - 1e-12 || std::abs(b - level) <= slack) {
        frac = 1.0;
        value = b;
      }
      const double tau = frac >= 1.0 ? path.time(i + 1) : path.time(i) + frac * path.dt();
      out.stop_times.push_back(tau);
      if (tau < T) ++out.count;
      hi = lo = value;
      a = value;
      frac0 = frac;
      if (frac >= 1.0) break;
    }
    hi = std::max(hi, b);
    lo = std::min(lo, b);
  }
  return out;
}

GridPath running_max(const GridPath& path) {
  std::vector<double> v(path.values().begin(), path.values().end());
  const std::size_t d = path.dim();
  for (std::size_t i = d; i < v.size(); ++i) v[i] = std::max(v[i], v[i - d]);
  return path.with_values(std::move(v));
}

GridPath running_min(const GridPath& path) {
  std::vector<double> v(path.values().begin(), path.values().end());
  const std::size_t d = path.dim();
  for (std::size_t i = d; i < v.size(); ++i) v[i] = std::min(v[i], v[i - d]);
  return path.with_values(std::move(v));
}

struct Control::Cache {
  std::mutex mutex;
  // rows[i][j-i] = eval(i,j) for the prefix computed so far.
  std::vector<std::vector<double>> rows;
};

Control::Control(std::size_t nodes, double q, Distance dist)
    : nodes_(nodes), q_(q), dist_(std::move(dist)), cache_(std::make_shared<Cache>()) {
  require(q >= 1.0 && std::isfinite(q), ErrorKind::invalid_parameter,
          "control exponent must be at least 1");
  require(nodes >= 1, ErrorKind::invalid_input, "control needs at least one node");
  cache_->rows.resize(nodes);
}

double Control::eval(std::size_t i, std::size_t j) const {
  require(i <= j && j < nodes_, ErrorKind::invalid_window, "control indices out of order or range");
  if (i == j) return 0.0;
  std::lock_guard lock(cache_->mutex);
  auto& row = cache_->rows[i];
  if (row.empty()) row.push_back(0.0);
  while (row.size() <= j - i) {
    const std::size_t t = i + row.size();
    double b = 0.0;
    for (std::size_t s = i; s < t; ++s) b = std::max(b, row[s - i] + power(dist_(s, t), q_));
    row.push_back(b);
  }
  return row[j - i];
}

double Control::norm(std::size_t i, std::size_t j) const {
  return std::pow(eval(i, j), 1.0 / q_);
}

Control control_from_path(const GridPath& path, double q, ComponentSelect component) {
  check_component(path, component);
  auto shared = std::make_shared<const GridPath>(path);
  return Control(path.size(), q, [shared, component](std::size_t i, std::size_t j) {
    return increment(*shared, i, j, component);
  });
}

}  // namespace roughsde
