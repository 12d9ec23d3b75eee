#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "roughsde/grid_path.hpp"

namespace roughsde {

enum class FbmMethod { automatic, cholesky, circulant };

FbmMethod parse_fbm_method(std::string_view name);
std::string_view to_string(FbmMethod method);

struct FbmSpec {
  double hurst = 0.5;
  double horizon = 1.0;
  std::size_t steps = 1;
  std::size_t dim = 1;
  FbmMethod method = FbmMethod::automatic;
  std::uint64_t seed = 0;
  // Largest grid the Cholesky sampler accepts.
  std::size_t cholesky_cap = 1024;
};

// Throws invalid-parameter unless 0 < H < 1.
void check_hurst(double hurst);

// E[W_s W_t] = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(double s, double t, double hurst);
// c_H = 1 / Gamma(H + 1/2).
double mandelbrot_constant(double hurst);
// c_H ((t-r)_+^{H-1/2} - (-r)_+^{H-1/2}), with x_+^a = 0 for x <= 0.
double mandelbrot_kernel(double t, double r, double hurst);
// c_H^2 / (2H) (t-s)^{2H}.
double conditional_variance(double s, double t, double hurst);

// Exact Gaussian sampler for fBm on a uniform grid. Setup (Cholesky factor
// or circulant eigenvalues) happens once; sample() is safe to call from
// several threads and depends only on (seed, replica).
class FbmSampler {
 public:
  explicit FbmSampler(const FbmSpec& spec);
  ~FbmSampler();
  FbmSampler(FbmSampler&&) noexcept;
  FbmSampler& operator=(FbmSampler&&) noexcept;

  const FbmSpec& spec() const noexcept { return spec_; }
  FbmMethod method() const noexcept { return method_; }
  GridPath sample(std::uint64_t replica) const;

 private:
  struct Impl;
  FbmSpec spec_;
  FbmMethod method_;
  std::unique_ptr<Impl> impl_;
};

// Replicas first_replica .. first_replica+count-1, in replica order.
std::vector<GridPath> sample_fbm(const FbmSpec& spec, std::size_t count,
                                 std::size_t threads = 1, std::uint64_t first_replica = 0);

}  // namespace roughsde
