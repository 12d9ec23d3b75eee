#include "roughsde/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <mutex>
#include <optional>

#include "roughsde/error.hpp"
#include "roughsde/parallel.hpp"
#include "roughsde/rng.hpp"

namespace roughsde {

namespace {

// FFTW's planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    require(data != nullptr, ErrorKind::resource_error, "FFT buffer allocation failed");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// Autocovariance of unit-step fractional Gaussian noise.
double fgn_autocovariance(std::size_t k, double hurst) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
}

}  // namespace

FbmMethod parse_fbm_method(std::string_view name) {
  if (name == "auto") return FbmMethod::automatic;
  if (name == "cholesky") return FbmMethod::cholesky;
  if (name == "circulant") return FbmMethod::circulant;
  fail(ErrorKind::invalid_parameter, "unknown fBm method '" + std::string(name) + "'");
}

std::string_view to_string(FbmMethod method) {
  switch (method) {
    case FbmMethod::automatic: return "auto";
    case FbmMethod::cholesky: return "cholesky";
    case FbmMethod::circulant: return "circulant";
  }
  return "auto";
}

void check_hurst(double hurst) {
  require(hurst > 0.0 && hurst < 1.0, ErrorKind::invalid_parameter,
          "Hurst index must lie in (0,1)");
}

double fbm_covariance(double s, double t, double hurst) {
  check_hurst(hurst);
  require(s >= 0.0 && t >= 0.0, ErrorKind::invalid_parameter, "times must be nonnegative");
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

double mandelbrot_constant(double hurst) {
  check_hurst(hurst);
  return 1.0 / std::tgamma(hurst + 0.5);
}

double mandelbrot_kernel(double t, double r, double hurst) {
  const double c = mandelbrot_constant(hurst);
  const double a = hurst - 0.5;
  auto pos_pow = [a](double x) { return x > 0.0 ? std::pow(x, a) : 0.0; };
  return c * (pos_pow(t - r) - pos_pow(-r));
}

double conditional_variance(double s, double t, double hurst) {
  require(s <= t, ErrorKind::invalid_parameter, "conditional variance needs s <= t");
  const double c = mandelbrot_constant(hurst);
  return c * c / (2.0 * hurst) * std::pow(t - s, 2.0 * hurst);
}

struct FbmSampler::Impl {
  Eigen::MatrixXd lower;      // Cholesky factor of the node covariance
  std::vector<double> scale;  // sqrt(lambda_k / m) for the circulant sampler
  fftw_plan plan = nullptr;

  ~Impl() {
    if (plan) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FbmSampler::FbmSampler(const FbmSpec& spec) : spec_(spec), impl_(std::make_unique<Impl>()) {
  check_hurst(spec.hurst);
  require(spec.horizon > 0.0 && std::isfinite(spec.horizon), ErrorKind::invalid_parameter,
          "horizon must be positive");
  require(spec.steps >= 1, ErrorKind::invalid_parameter, "number of steps must be at least 1");
  require(spec.dim >= 1, ErrorKind::invalid_parameter, "dimension must be at least 1");
  const std::size_t n = spec.steps;
  method_ = spec.method;
  if (method_ == FbmMethod::automatic)
    method_ = n <= spec.cholesky_cap ? FbmMethod::cholesky : FbmMethod::circulant;
  const double dt = spec.horizon / static_cast<double>(n);

  if (method_ == FbmMethod::cholesky) {
    require(n <= spec.cholesky_cap, ErrorKind::resource_error,
            "grid of " + std::to_string(n) + " steps exceeds the Cholesky cap of " +
                std::to_string(spec.cholesky_cap) + "; use the circulant method");
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        cov(i, j) = cov(j, i) = fbm_covariance(static_cast<double>(i + 1) * dt,
                                               static_cast<double>(j + 1) * dt, spec.hurst);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    require(llt.info() == Eigen::Success, ErrorKind::internal_error,
            "fBm covariance is not positive definite");
    impl_->lower = llt.matrixL();
    return;
  }

  // Circulant embedding of the increment autocovariance, size m = 2n.
  const std::size_t m = 2 * n;
  FftwBuffer buf(m);
  {
    std::lock_guard lock(planner_mutex());
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(m), buf.data, buf.data, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
  }
  require(impl_->plan != nullptr, ErrorKind::resource_error, "FFT plan creation failed");
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t lag = k <= n ? k : m - k;
    buf.data[k][0] = fgn_autocovariance(lag, spec.hurst);
    buf.data[k][1] = 0.0;
  }
  fftw_execute_dft(impl_->plan, buf.data, buf.data);
  double lmax = 0.0;
  for (std::size_t k = 0; k < m; ++k) lmax = std::max(lmax, buf.data[k][0]);
  impl_->scale.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    double lambda = buf.data[k][0];
    require(lambda >= -1e-10 * lmax, ErrorKind::internal_error,
            "circulant embedding has a negative eigenvalue");
    lambda = std::max(lambda, 0.0);
    impl_->scale[k] = std::sqrt(lambda / static_cast<double>(m));
  }
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;

GridPath FbmSampler::sample(std::uint64_t replica) const {
  Rng rng(spec_.seed, replica);
  const std::size_t n = spec_.steps;
  const std::size_t d = spec_.dim;
  const double dt = spec_.horizon / static_cast<double>(n);
  std::vector<double> values((n + 1) * d, 0.0);

  if (method_ == FbmMethod::cholesky) {
    Eigen::VectorXd z(n);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < n; ++i) z(i) = rng.normal();
      const Eigen::VectorXd x = impl_->lower.triangularView<Eigen::Lower>() * z;
      for (std::size_t i = 0; i < n; ++i) values[(i + 1) * d + k] = x(i);
    }
    return GridPath(0.0, dt, d, std::move(values));
  }

  const std::size_t m = 2 * n;
  const double unit = std::pow(dt, spec_.hurst);
  FftwBuffer buf(m);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      buf.data[j][0] = impl_->scale[j] * re;
      buf.data[j][1] = impl_->scale[j] * im;
    }
    fftw_execute_dft(impl_->plan, buf.data, buf.data);
    double x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x += unit * buf.data[i][0];
      values[(i + 1) * d + k] = x;
    }
  }
  return GridPath(0.0, dt, d, std::move(values));
}

std::vector<GridPath> sample_fbm(const FbmSpec& spec, std::size_t count, std::size_t threads,
                                 std::uint64_t first_replica) {
  FbmSampler sampler(spec);
  std::vector<std::optional<GridPath>> slots(count);
  parallel_for(count, threads, [&](std::size_t i) { slots[i] = sampler.sample(first_replica + i); });
  std::vector<GridPath> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace roughsde
