#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "roughsde/grid_path.hpp"
#include "roughsde/paths.hpp"

namespace roughsde {

// Claimed regularity of a germ: |A_st(x) - A_st(y)| <= lipschitz * |t-s|^{1/q} |x-y|.
struct GermMetadata {
  double q = 1.5;
  double lipschitz = 1.0;
};

// Two-parameter field A_st(x) on the node pairs of a grid, R^d -> R^d.
class Germ {
 public:
  using Eval = std::function<void(std::size_t i, std::size_t j, std::span<const double> x,
                                  std::span<double> out)>;
  // jac[r*d + c] = d A^r / d x_c
  using Gradient = std::function<void(std::size_t i, std::size_t j, std::span<const double> x,
                                      std::span<double> jac)>;

  Germ(std::size_t nodes, std::size_t dim, double t0, double dt, Eval eval,
       GermMetadata metadata = {});

  // Germs of the form A_st(x) = g(x)(h(t) - h(s)) for scalar g, h.
  static Germ separable(const GridPath& h, std::function<double(double)> g,
                        std::function<double(double)> dg = {}, GermMetadata metadata = {});

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t dim() const noexcept { return dim_; }
  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  const GermMetadata& metadata() const noexcept { return metadata_; }

  void eval(std::size_t i, std::size_t j, std::span<const double> x, std::span<double> out) const;

  Germ& with_gradient(Gradient grad);
  // Allows central differences with step 1e-6 * scale when no analytic
  // gradient is supplied.
  Germ& with_numeric_gradient(double scale = 1.0);
  bool differentiable() const noexcept { return static_cast<bool>(grad_) || numeric_scale_ > 0.0; }
  void gradient(std::size_t i, std::size_t j, std::span<const double> x,
                std::span<double> jac) const;

 private:
  std::size_t nodes_;
  std::size_t dim_;
  double t0_;
  double dt_;
  Eval eval_;
  GermMetadata metadata_;
  Gradient grad_;
  double numeric_scale_ = 0.0;
};

struct YoungResult {
  GridPath path;
  double error_estimate = 0.0;          // last inter-level sup distance
  std::vector<int> levels;              // dyadic levels evaluated, coarse to fine
  std::vector<double> level_distances;  // sup distance between consecutive levels
  bool divergence_warning = false;
};

// Dyadic partition of node indices [0, steps] at level k: floor(i * steps / 2^k).
std::vector<std::size_t> dyadic_points(std::size_t steps, int level);
// Level at which the dyadic partition contains every node.
int finest_level(std::size_t steps);

// Left-point sums sum_{[u,v]} A_uv(theta_u) over dyadic partitions of the
// grid, at most `levels` deep; the last `compare` levels are evaluated to
// estimate the error. The returned path is the one at the finest level.
YoungResult nonlinear_young_integral(const Germ& A, const GridPath& theta, int levels = 64,
                                     int compare = 6);

// Left-point sums sum B_u (W_v - W_u), componentwise; B may be scalar.
GridPath linear_young_integral(const GridPath& B, const GridPath& W);

// V_t = sum_{[u,v] <= t} int_0^1 grad A_uv(theta_u + x (theta_bar_u - theta_u)) dx,
// with Gauss-Legendre in x. Values are d x d matrices, row-major.
GridPath linearize_difference(const Germ& A, const GridPath& theta, const GridPath& theta_bar,
                              int gauss_nodes = 8);
// Left-point integral sum (V_v - V_u) y_u for matrix-valued V.
GridPath matrix_young_integral(const GridPath& V, const GridPath& y);

struct SewingCheck {
  double max_ratio = 0.0;  // max lhs / rhs over subintervals with rhs > 0
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  std::size_t intervals = 0;
  bool holds = true;
};

// 2^theta zeta(theta) with theta = 2/q.
double sewing_constant(double q);

// On every dyadic subinterval [s,t] checks
// |I_t - I_s - A_st(theta_s)| <= 2 C L (t-s)^{1/q} ||theta||_{q-var,[s,t]}
// with q, L taken from the germ metadata.
SewingCheck sewing_bound_check(const Germ& A, const GridPath& theta, const YoungResult& result);

struct GronwallConstants {
  double c1 = 2.0;
  double c2 = 2.0;
  double eps = 0.01;
};

// C1 exp(C2 ||A||^{q(1+eps)}) (|y0| + K).
double gronwall_bound(double a_norm, double q, double K, double y0, GronwallConstants c = {});
double gronwall_bound(const Control& a_control, double q, double K, double y0,
                      GronwallConstants c = {});

}  // namespace roughsde
