#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "roughsde/fbm.hpp"
#include "roughsde/grid_path.hpp"
#include "roughsde/stats.hpp"

namespace roughsde {

// Box prod [lower_i, upper_i]; faces may be infinite.
struct Domain {
  std::vector<double> lower;
  std::vector<double> upper;

  static Domain unit(std::size_t dim);
  static Domain half_line(std::size_t dim);  // [0, inf)^d

  std::size_t dim() const noexcept { return lower.size(); }
  void validate() const;
  bool contains(std::span<const double> x) const noexcept;
  bool unit_width() const noexcept;
};

struct ReflectOptions {
  // Clamp a starting point outside the domain into it instead of failing.
  // The initial jump is stored in k(0) and excluded from k_onevar.
  bool project_initial = false;
};

struct ReflectionResult {
  GridPath reflected;
  GridPath k;
  double k_onevar = 0.0;                  // 1-variation of k (Euclidean)
  std::vector<double> k_onevar_component; // 1-variation of each k^i
};

// Skorokhod map of the linear interpolant: x_{n+1} = clamp(x_n + dw_n),
// k_{n+1} = k_n + x_{n+1} - (x_n + dw_n).
ReflectionResult reflect(const GridPath& path, const Domain& domain, ReflectOptions options = {});

// Reflection of x0 + (driver - driver(0)). Only the increments of driver
// enter, so a caller that already works in increment form gets the same
// floating-point result as the recursion above.
ReflectionResult reflect_increments(std::span<const double> x0, const GridPath& driver,
                                    const Domain& domain);

// Checks that k^i increases only on the lower face and decreases only on the
// upper face, within 1e-12 of the domain width.
bool sign_condition_holds(const ReflectionResult& result, const Domain& domain);

struct OneVarBound {
  std::vector<double> lhs;  // ||K^i||_{1-var}
  std::vector<double> rhs;  // N_{1,T}(W^i) + 1
  bool holds = true;
};

// ||K||_{1-var} <= N_{1,T}(W) + 1 per component, for unit-width domains.
OneVarBound reflection_onevar_bound_check(const GridPath& path, const Domain& domain,
                                          ReflectOptions options = {});

struct TailFit {
  double exponent = 0.0;
  Interval interval;
  std::size_t samples = 0;
  std::size_t tail_points = 0;
};

struct TailOptions {
  std::size_t resamples = 500;
  double level = 0.9;
  std::uint64_t bootstrap_seed = 1;
  std::size_t min_samples = 10000;
};

// Weibull-type tail exponent: regress log(-log S(x)) on log x over the upper
// decile, S the empirical survival function with plotting position
// (n - i - 1/2)/n, and bootstrap the slope.
TailFit fit_weibull_tail(std::span<const double> data, const TailOptions& options);

struct TailExperiment {
  TailFit fit;
  std::vector<double> k_onevar;  // per sample, replica order
};

// Samples ||K||_{1-var} for reflected fBm (first component) and fits its tail.
TailExperiment tail_exponent_experiment(const FbmSpec& spec, const Domain& domain,
                                        std::size_t samples, const TailOptions& options,
                                        std::size_t threads = 1);

}  // namespace roughsde
