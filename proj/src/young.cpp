#include "roughsde/young.hpp"

#include <algorithm>
#include <cmath>

#include "roughsde/error.hpp"

namespace roughsde {

Germ::Germ(std::size_t nodes, std::size_t dim, double t0, double dt, Eval eval,
           GermMetadata metadata)
    : nodes_(nodes), dim_(dim), t0_(t0), dt_(dt), eval_(std::move(eval)), metadata_(metadata) {
  require(nodes_ >= 2 && dim_ >= 1 && dt_ > 0.0, ErrorKind::invalid_input, "invalid germ grid");
  require(static_cast<bool>(eval_), ErrorKind::invalid_input, "germ needs an evaluator");
}

Germ Germ::separable(const GridPath& h, std::function<double(double)> g,
                     std::function<double(double)> dg, GermMetadata metadata) {
  require(h.dim() == 1, ErrorKind::invalid_input, "separable germ needs a scalar h");
  auto hv = std::make_shared<const GridPath>(h);
  Germ A(h.size(), 1, h.t0(), h.dt(),
         [hv, g](std::size_t i, std::size_t j, std::span<const double> x, std::span<double> out) {
           out[0] = g(x[0]) * ((*hv)(j) - (*hv)(i));
         },
         metadata);
  if (dg)
    A.with_gradient([hv, dg](std::size_t i, std::size_t j, std::span<const double> x,
                             std::span<double> jac) { jac[0] = dg(x[0]) * ((*hv)(j) - (*hv)(i)); });
  return A;
}

void Germ::eval(std::size_t i, std::size_t j, std::span<const double> x,
                std::span<double> out) const {
  if (i == j) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  eval_(i, j, x, out);
}

Germ& Germ::with_gradient(Gradient grad) {
  grad_ = std::move(grad);
  return *this;
}

Germ& Germ::with_numeric_gradient(double scale) {
  require(scale > 0.0, ErrorKind::invalid_parameter, "spatial scale must be positive");
  numeric_scale_ = scale;
  return *this;
}

void Germ::gradient(std::size_t i, std::size_t j, std::span<const double> x,
                    std::span<double> jac) const {
  require(differentiable(), ErrorKind::contract_violation, "germ has no spatial derivative");
  if (grad_) {
    grad_(i, j, x, jac);
    return;
  }
  const double h = 1e-6 * numeric_scale_;
  std::vector<double> xp(x.begin(), x.end()), up(dim_), um(dim_);
  for (std::size_t c = 0; c < dim_; ++c) {
    xp[c] = x[c] + h;
    eval(i, j, xp, up);
    xp[c] = x[c] - h;
    eval(i, j, xp, um);
    xp[c] = x[c];
    for (std::size_t r = 0; r < dim_; ++r) jac[r * dim_ + c] = (up[r] - um[r]) / (2.0 * h);
  }
}

int finest_level(std::size_t steps) {
  int k = 0;
  while ((std::size_t{1} << k) < steps) ++k;
  return k;
}

std::vector<std::size_t> dyadic_points(std::size_t steps, int level) {
  require(level >= 0 && level < 63, ErrorKind::invalid_parameter, "dyadic level out of range");
  const std::size_t parts = std::size_t{1} << level;
  std::vector<std::size_t> pts;
  pts.reserve(std::min(parts, steps) + 1);
  for (std::size_t i = 0; i <= parts; ++i) {
    const auto p = static_cast<std::size_t>(
        (static_cast<unsigned __int128>(i) * steps) / parts);
    if (pts.empty() || p != pts.back()) pts.push_back(p);
  }
  return pts;
}

namespace {

void check_theta(const Germ& A, const GridPath& theta) {
  require(theta.size() == A.nodes() && theta.dim() == A.dim(), ErrorKind::invalid_input,
          "germ and path grids differ");
}

// Integral path at one dyadic level, including the partial last interval.
std::vector<double> level_path(const Germ& A, const GridPath& theta, int level) {
  const std::size_t d = A.dim(), n = theta.size();
  const auto pts = dyadic_points(n - 1, level);
  std::vector<double> out(n * d, 0.0), sum(d, 0.0), a(d);
  std::size_t u = 0, next = 1;
  for (std::size_t t = 1; t < n; ++t) {
    A.eval(u, t, theta.node(u), a);
    for (std::size_t r = 0; r < d; ++r) out[t * d + r] = sum[r] + a[r];
    if (next < pts.size() && t == pts[next]) {
      for (std::size_t r = 0; r < d; ++r) sum[r] += a[r];
      u = t;
      ++next;
    }
  }
  return out;
}

}  // namespace

YoungResult nonlinear_young_integral(const Germ& A, const GridPath& theta, int levels,
                                     int compare) {
  check_theta(A, theta);
  require(levels >= 0 && compare >= 1, ErrorKind::invalid_parameter, "invalid level counts");
  const int top = std::min(levels, finest_level(theta.steps()));
  const int bottom = std::max(0, top - compare + 1);
  YoungResult res{theta, 0.0, {}, {}, false};
  std::vector<double> prev;
  for (int k = bottom; k <= top; ++k) {
    std::vector<double> cur = level_path(A, theta, k);
    if (!prev.empty()) {
      double dist = 0.0;
      for (std::size_t i = 0; i < cur.size(); ++i) dist = std::max(dist, std::abs(cur[i] - prev[i]));
      res.level_distances.push_back(dist);
    }
    res.levels.push_back(k);
    prev.swap(cur);
  }
  res.path = theta.with_values(std::move(prev));
  if (!res.level_distances.empty()) res.error_estimate = res.level_distances.back();
  double scale = 0.0;
  for (double v : res.path.values()) scale = std::max(scale, std::abs(v));
  const auto& ld = res.level_distances;
  for (std::size_t i = 2; i < ld.size(); ++i)
    if (ld[i - 2] > 1e-13 * (1.0 + scale) && ld[i - 1] >= ld[i - 2] && ld[i] >= ld[i - 1])
      res.divergence_warning = true;
  return res;
}

GridPath linear_young_integral(const GridPath& B, const GridPath& W) {
  require(B.size() == W.size() && B.t0() == W.t0() && B.dt() == W.dt(), ErrorKind::invalid_input,
          "integrand and integrator grids differ");
  require(B.dim() == W.dim() || B.dim() == 1, ErrorKind::invalid_input,
          "integrand must be scalar or match the integrator dimension");
  const std::size_t d = W.dim();
  std::vector<double> out(W.size() * d, 0.0);
  for (std::size_t n = 1; n < W.size(); ++n)
    for (std::size_t r = 0; r < d; ++r) {
      const double b = B(n - 1, B.dim() == 1 ? 0 : r);
      out[n * d + r] = out[(n - 1) * d + r] + b * (W(n, r) - W(n - 1, r));
    }
  return W.with_values(std::move(out));
}

namespace {

// Gauss-Legendre nodes and weights on [0,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

GridPath linearize_difference(const Germ& A, const GridPath& theta, const GridPath& theta_bar,
                              int gauss_nodes) {
  check_theta(A, theta);
  check_theta(A, theta_bar);
  require(A.differentiable(), ErrorKind::contract_violation,
          "linearisation needs a spatial derivative of the germ");
  require(gauss_nodes >= 1 && gauss_nodes <= 64, ErrorKind::invalid_parameter,
          "Gauss-Legendre order must lie in [1,64]");
  const std::size_t d = A.dim(), dd = d * d, n = theta.size();
  std::vector<double> gx, gw;
  gauss_legendre(gauss_nodes, gx, gw);
  std::vector<double> V(n * dd, 0.0), jac(dd), pt(d);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t c = 0; c < dd; ++c) V[t * dd + c] = V[(t - 1) * dd + c];
    for (int q = 0; q < gauss_nodes; ++q) {
      for (std::size_t k = 0; k < d; ++k)
        pt[k] = theta(t - 1, k) + gx[q] * (theta_bar(t - 1, k) - theta(t - 1, k));
      A.gradient(t - 1, t, pt, jac);
      for (std::size_t c = 0; c < dd; ++c) V[t * dd + c] += gw[q] * jac[c];
    }
  }
  return GridPath(theta.t0(), theta.dt(), dd, std::move(V));
}

GridPath matrix_young_integral(const GridPath& V, const GridPath& y) {
  const std::size_t d = y.dim();
  require(V.size() == y.size() && V.dim() == d * d, ErrorKind::invalid_input,
          "matrix integrator does not match the integrand");
  std::vector<double> out(y.size() * d, 0.0);
  for (std::size_t t = 1; t < y.size(); ++t)
    for (std::size_t r = 0; r < d; ++r) {
      double s = out[(t - 1) * d + r];
      for (std::size_t c = 0; c < d; ++c)
        s += (V(t, r * d + c) - V(t - 1, r * d + c)) * y(t - 1, c);
      out[t * d + r] = s;
    }
  return y.with_values(std::move(out));
}

double sewing_constant(double q) {
  require(q >= 1.0 && q < 2.0, ErrorKind::invalid_parameter, "sewing needs 1 <= q < 2");
  const double theta = 2.0 / q;
  return std::pow(2.0, theta) * std::riemann_zeta(theta);
}

SewingCheck sewing_bound_check(const Germ& A, const GridPath& theta, const YoungResult& result) {
  check_theta(A, theta);
  require(result.path.size() == theta.size() && result.path.dim() == A.dim(),
          ErrorKind::invalid_input, "integral result does not match the germ");
  const double q = A.metadata().q;
  const double C = sewing_constant(q);
  const double L = A.metadata().lipschitz;
  const Control omega = control_from_path(theta, q);
  const std::size_t d = A.dim(), steps = theta.steps();
  std::vector<double> a(d);
  SewingCheck out;
  for (int k = 0; k <= finest_level(steps); ++k) {
    const auto pts = dyadic_points(steps, k);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const std::size_t s = pts[i], t = pts[i + 1];
      A.eval(s, t, theta.node(s), a);
      double lhs = 0.0;
      for (std::size_t r = 0; r < d; ++r) {
        const double v = result.path(t, r) - result.path(s, r) - a[r];
        lhs += v * v;
      }
      lhs = std::sqrt(lhs);
      const double rhs = 2.0 * C * L * std::pow(theta.time(t) - theta.time(s), 1.0 / q) *
                         omega.norm(s, t);
      ++out.intervals;
      const double slack = 1e-12 * (1.0 + std::abs(result.path(t, 0)));
      if (lhs > rhs + slack) out.holds = false;
      if (rhs > 0.0 && lhs / rhs > out.max_ratio) {
        out.max_ratio = lhs / rhs;
        out.worst_lhs = lhs;
        out.worst_rhs = rhs;
      }
    }
  }
  return out;
}

double gronwall_bound(double a_norm, double q, double K, double y0, GronwallConstants c) {
  require(q >= 1.0 && q < 2.0, ErrorKind::invalid_parameter, "Gronwall bound needs 1 <= q < 2");
  require(a_norm >= 0.0 && K >= 0.0, ErrorKind::invalid_parameter,
          "norms in the Gronwall bound must be nonnegative");
  return c.c1 * std::exp(c.c2 * std::pow(a_norm, q * (1.0 + c.eps))) * (std::abs(y0) + K);
}

double gronwall_bound(const Control& a_control, double q, double K, double y0,
                      GronwallConstants c) {
  return gronwall_bound(a_control.norm(0, a_control.size() - 1), q, K, y0, c);
}

}  // namespace roughsde
