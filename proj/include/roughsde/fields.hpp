#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "roughsde/grid_path.hpp"
#include "roughsde/stats.hpp"

namespace roughsde {

// amp * cos(freq * x + phase)
struct FourierMode {
  double freq = 0.0;
  double amp = 0.0;
  double phase = 0.0;
};

// One-dimensional building block: polynomial (coefficients of 1, x, x^2,
// ...) plus a cosine series.
struct Series1D {
  std::vector<double> poly;
  std::vector<FourierMode> modes;
};

// m(r) = 1 + amplitude * sin(omega * r + phase).
struct TimeModulation {
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double operator()(double r) const noexcept;
  bool constant() const noexcept { return amplitude == 0.0; }
};

enum class FieldMode { closed_form, fourier_series };

// Drift f: R^d -> R^d with f^i(x) = m(r) * sum_k S_ik(x_k). The stored
// series are the unsmoothed ones; `eps` is the accumulated Gaussian
// mollification variance, applied at evaluation time.
class DriftField {
 public:
  DriftField() = default;
  DriftField(std::size_t dim, std::vector<Series1D> terms, FieldMode mode = FieldMode::closed_form);

  static DriftField zero(std::size_t dim);
  // Scalar field from one series.
  static DriftField scalar(Series1D series, FieldMode mode = FieldMode::closed_form);
  // f(x) = a + b x componentwise (f^i depends on x_i only).
  static DriftField affine(std::size_t dim, double a, double b);

  std::size_t dim() const noexcept { return dim_; }
  FieldMode mode() const noexcept { return mode_; }
  const Series1D& term(std::size_t i, std::size_t k) const { return terms_[i * dim_ + k]; }
  double target_alpha() const noexcept { return target_alpha_; }
  double eps() const noexcept { return eps_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int bandwidth() const noexcept { return bandwidth_; }
  const TimeModulation& modulation() const noexcept { return modulation_; }

  void set_target_alpha(double a) { target_alpha_ = a; }
  void set_origin(std::uint64_t seed, int bandwidth) {
    seed_ = seed;
    bandwidth_ = bandwidth;
  }
  void set_modulation(TimeModulation m) { modulation_ = m; }

  // Pointwise values exist only for target_alpha > 0 or after mollification.
  bool evaluable() const noexcept { return target_alpha_ > 0.0 || eps_ > 0.0; }
  void require_evaluable() const;

  // out[i] = f^i_r(x).
  void eval(std::span<const double> x, double r, std::span<double> out) const;
  double eval(double x, double r = 0.0) const;  // scalar fields
  // out[i*d + k] = d f^i / d x_k.
  void jacobian(std::span<const double> x, double r, std::span<double> out) const;

  // Modes and polynomial with the mollification applied.
  Series1D effective(std::size_t i, std::size_t k) const;
  // Largest frequency with non-negligible effective amplitude (>= 1).
  double effective_bandwidth(double rel = 1e-16) const;

  // Gaussian smoothing of variance eps, exact in spectral form.
  DriftField mollify(double eps) const;
  DriftField scaled(double c) const;
  // Spatial shift: result(x) = f(x + c).
  DriftField shifted(std::span<const double> c) const;
  DriftField operator+(const DriftField& other) const;
  DriftField operator-(const DriftField& other) const { return *this + other.scaled(-1.0); }

 private:
  std::size_t dim_ = 0;
  FieldMode mode_ = FieldMode::closed_form;
  std::vector<Series1D> terms_;  // terms_[i*dim + k]
  double target_alpha_ = 1.0;
  double eps_ = 0.0;
  std::uint64_t seed_ = 0;
  int bandwidth_ = 0;
  TimeModulation modulation_;
  std::vector<Series1D> eff_;  // terms_ with the mollification applied

  void refresh();
};

// Lacunary series sum_{j=0..bandwidth} 2^{-j alpha} cos(2^j x + phase_j)
// with uniform random phases; one independent series per (i,k) pair.
DriftField synthesize_field(double target_alpha, std::uint64_t seed, int bandwidth,
                            std::size_t dim = 1);

DriftField mollify(const DriftField& field, double eps);

// Splits at frequency 2^level: low keeps freq <= 2^level and the
// polynomial part, high the rest. low + high == field.
std::pair<DriftField, DriftField> frequency_truncate(const DriftField& field, int level);

void to_json(nlohmann::json& j, const DriftField& field);
void from_json(const nlohmann::json& j, DriftField& field);

// T^w f_t(x) on the path grid for a set of spatial points.
struct AveragedField {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t nodes = 0;
  std::size_t dim = 1;
  std::vector<double> x_grid;  // point-major, x_grid[j*dim + k]
  std::vector<double> values;  // values[(n*points + j)*dim + i]

  std::size_t points() const noexcept { return x_grid.size() / dim; }
  double operator()(std::size_t n, std::size_t j, std::size_t i = 0) const noexcept {
    return values[(n * points() + j) * dim + i];
  }
  // Component i at spatial point j as a path in t.
  GridPath at_point(std::size_t j, std::size_t i = 0) const;
};

// Composite trapezoid of r -> f_r(w_r + x) on the grid of w.
AveragedField averaged_field(const GridPath& w, const DriftField& field,
                             std::span<const double> x_grid, std::size_t threads = 1);

// Only the terminal value T^w f_T(x), by per-mode complex sums; cost is
// O(nodes * modes + points * modes). Scalar fields only.
std::vector<double> averaged_field_terminal(const GridPath& w, const DriftField& field,
                                            std::span<const double> x_grid);

// Window quadrature of f_r(w_r + x) over nodes [first, last].
void averaged_increment(const GridPath& w, const DriftField& field, std::size_t first,
                        std::size_t last, std::span<const double> x, std::span<double> out);

struct ScalingFit {
  LineFit fit;
  std::vector<double> scales;
  std::vector<double> increments;
};

// Regresses log sup_x |g(x+h) - g(x)| on log h over the given scales, where
// g is sampled on a uniform grid of spacing `step` (scales are multiples).
ScalingFit increment_scaling(std::span<const double> values, double step,
                             std::span<const std::size_t> lags);

// Measured Hoelder exponent of component (i,k) of the field on [a,b].
ScalingFit measure_holder_exponent(const DriftField& field, double a, double b,
                                   std::span<const double> scales);

struct DoubleDifference {
  double max_ratio = 0.0;  // sup |f(x-a)-f(x-b)-f(y-a)+f(y-b)| / (|x-y|^zeta |a-b|^eta)
  double norm = 0.0;       // measured C^{zeta+eta} norm
  double constant = 0.0;   // max_ratio / norm (0 when norm is 0)
};

DoubleDifference double_difference_check(const DriftField& field, double zeta, double eta,
                                         std::size_t samples, std::uint64_t seed,
                                         double window = 3.14159265358979323846);

// Measured C^s norm on [-window, window]: sup|g| + Hoelder seminorm of order
// s (of g' when s > 1) over random pairs.
double measured_holder_norm(const DriftField& field, double s, std::size_t samples,
                            std::uint64_t seed, double window);

// Block norm sup_j 2^{js} || Delta_j (f - g) ||_inf over dyadic frequency
// blocks, plus the sup of the polynomial difference on [-window, window].
double field_distance(const DriftField& f, const DriftField& g, double s, double window);

}  // namespace roughsde
