#include "roughsde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "roughsde/error.hpp"
#include "roughsde/parallel.hpp"
#include "roughsde/paths.hpp"
#include "roughsde/young.hpp"

namespace roughsde {

GammaKind parse_gamma_kind(std::string_view name) {
  if (name == "identity") return GammaKind::identity;
  if (name == "skorokhod") return GammaKind::skorokhod;
  if (name == "perturbed") return GammaKind::perturbed;
  fail(ErrorKind::invalid_parameter, "unknown gamma kind '" + std::string(name) + "'");
}

std::string_view to_string(GammaKind kind) {
  switch (kind) {
    case GammaKind::identity: return "identity";
    case GammaKind::skorokhod: return "skorokhod";
    case GammaKind::perturbed: return "perturbed";
  }
  return "identity";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "picard_young") return Scheme::picard_young;
  if (name == "euler_split") return Scheme::euler_split;
  fail(ErrorKind::invalid_parameter, "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::picard_young ? "picard_young" : "euler_split";
}

namespace {

void validate(const SolveSpec& spec) {
  const std::size_t d = spec.path.dim();
  require(spec.x0.size() == d, ErrorKind::invalid_input, "x0 and noise dimensions differ");
  require(spec.field.dim() == d, ErrorKind::invalid_input, "field and noise dimensions differ");
  spec.field.require_evaluable();
  require(spec.tol > 0.0, ErrorKind::invalid_parameter, "tolerance must be positive");
  for (double v : spec.x0)
    require(std::isfinite(v), ErrorKind::invalid_initial_condition, "x0 must be finite");
  if (spec.gamma == GammaKind::skorokhod) {
    spec.domain.validate();
    require(spec.domain.dim() == d, ErrorKind::invalid_input, "domain dimension differs");
    require(spec.domain.contains(spec.x0), ErrorKind::invalid_initial_condition,
            "x0 lies outside the domain");
  }
  if (spec.gamma == GammaKind::perturbed) {
    spec.perturb.validate();
    require(spec.perturb.dim() == d, ErrorKind::invalid_input,
            "perturbation parameters have the wrong dimension");
  }
}

struct GammaOutput {
  GridPath x;
  GridPath k;  // x - (x0 + z - z0)
};

// Gamma applied to x0 + (z - z(0)), written in increment form.
GammaOutput apply_gamma(const SolveSpec& spec, const GridPath& z) {
  const std::size_t d = z.dim();
  std::vector<double> y(z.values().size());
  for (std::size_t n = 0; n < z.size(); ++n)
    for (std::size_t i = 0; i < d; ++i) y[n * d + i] = spec.x0[i] + (z(n, i) - z(0, i));
  GridPath Y = z.with_values(std::move(y));
  switch (spec.gamma) {
    case GammaKind::identity:
      return {Y, z.with_values(std::vector<double>(Y.values().size(), 0.0))};
    case GammaKind::skorokhod: {
      ReflectionResult r = reflect_increments(spec.x0, z, spec.domain);
      return {std::move(r.reflected), std::move(r.k)};
    }
    case GammaKind::perturbed: {
      // Same forward recursion as the Euler scheme, so the two schemes
      // differ only in how the drift enters.
      GridPath f = perturb_forward(Y, spec.perturb);
      GridPath k = f - Y;
      return {std::move(f), std::move(k)};
    }
  }
  fail(ErrorKind::internal_error, "unhandled gamma kind");
}

// Cumulative averaged field T_n(x_g) on a uniform spatial grid, with local
// cubic interpolation in x.
class FieldTable {
 public:
  FieldTable(const GridPath& w, const DriftField& f, double lo, double hi, double dx)
      : lo_(lo), dx_(dx) {
    const auto pts = static_cast<std::size_t>(std::ceil((hi - lo) / dx)) + 1;
    pts_ = std::max<std::size_t>(pts, 4);
    std::vector<double> xs(pts_);
    for (std::size_t g = 0; g < pts_; ++g) xs[g] = lo + static_cast<double>(g) * dx;
    table_ = averaged_field(w, f, xs);
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return lo_ + static_cast<double>(pts_ - 1) * dx_; }
  double dx() const noexcept { return dx_; }
  std::size_t points() const noexcept { return pts_; }
  bool covers(double x) const noexcept { return x >= lo_ + dx_ && x <= hi() - dx_; }
  double at(std::size_t n, std::size_t g) const noexcept { return table_(n, g); }

  // T_v(x) - T_u(x).
  double increment(std::size_t u, std::size_t v, double x) const {
    const double s = (x - lo_) / dx_;
    auto base = static_cast<std::ptrdiff_t>(std::floor(s)) - 1;
    base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(pts_) - 4);
    const double r = s - static_cast<double>(base);  // position within the 4-point stencil
    const double w0 = -(r - 1) * (r - 2) * (r - 3) / 6.0;
    const double w1 = r * (r - 2) * (r - 3) / 2.0;
    const double w2 = -r * (r - 1) * (r - 3) / 2.0;
    const double w3 = r * (r - 1) * (r - 2) / 6.0;
    const auto b = static_cast<std::size_t>(base);
    auto d = [&](std::size_t g) { return table_(v, g) - table_(u, g); };
    return w0 * d(b) + w1 * d(b + 1) + w2 * d(b + 2) + w3 * d(b + 3);
  }

 private:
  double lo_;
  double dx_;
  std::size_t pts_ = 0;
  AveragedField table_;
};

std::pair<double, double> range_of(const GridPath& p) {
  const auto [mn, mx] = std::minmax_element(p.values().begin(), p.values().end());
  return {*mn, *mx};
}

double spatial_step(const DriftField& f) {
  return std::min(0.05, 0.05 / f.effective_bandwidth(1e-12));
}

std::optional<FieldTable> ensure_table(std::optional<FieldTable> table, const SolveSpec& spec,
                                       const GridPath& theta) {
  auto [mn, mx] = range_of(theta);
  if (table && table->covers(mn) && table->covers(mx)) return table;
  const double margin = std::max(1.0, 0.25 * (mx - mn));
  double lo = mn - margin, hi = mx + margin;
  if (table) {
    lo = std::min(lo, table->lo());
    hi = std::max(hi, table->hi());
  }
  table.emplace(spec.path, spec.field, lo, hi, spatial_step(spec.field));
  return table;
}

Germ table_germ(const FieldTable& table, const GridPath& w) {
  return Germ(w.size(), 1, w.t0(), w.dt(),
              [&table](std::size_t i, std::size_t j, std::span<const double> x,
                       std::span<double> out) { out[0] = table.increment(i, j, x[0]); });
}

Germ direct_germ(const SolveSpec& spec) {
  return Germ(spec.path.size(), spec.path.dim(), spec.path.t0(), spec.path.dt(),
              [&spec](std::size_t i, std::size_t j, std::span<const double> x,
                      std::span<double> out) {
                averaged_increment(spec.path, spec.field, i, j, x, out);
              });
}

void fill_diagnostics(const SolveSpec& spec, const GridPath& theta, const GridPath& k,
                      std::optional<FieldTable>& table, SolveDiagnostics& diag) {
  if (!spec.diagnostics || theta.dim() != 1) return;
  table = ensure_table(std::move(table), spec, theta);
  const double q = spec.diagnostic_q;
  diag.available = true;
  diag.q = q;
  diag.window_lo = table->lo();
  diag.window_hi = table->hi();
  diag.window_points = table->points();
  diag.theta_qvar = p_variation(theta, q);

  const std::size_t steps = theta.steps();
  std::size_t stride = 1;
  while (steps / stride > 256 || steps % stride != 0) {
    ++stride;
    if (stride > steps) {
      stride = steps;
      break;
    }
  }
  std::vector<std::size_t> idx;
  for (std::size_t n = 0; n <= steps; n += stride) idx.push_back(n);
  if (idx.back() != steps) idx.push_back(steps);

  const FieldTable& tb = *table;
  const double dx = tb.dx();
  // C^1 norm of x -> T_t(x) - T_s(x) on the table window.
  Control a_control(idx.size(), q, [&](std::size_t a, std::size_t b) {
    const std::size_t s = idx[a], t = idx[b];
    double sup = 0.0, lip = 0.0;
    double prev = tb.at(t, 0) - tb.at(s, 0);
    sup = std::abs(prev);
    for (std::size_t g = 1; g < tb.points(); ++g) {
      const double v = tb.at(t, g) - tb.at(s, g);
      sup = std::max(sup, std::abs(v));
      lip = std::max(lip, std::abs(v - prev) / dx);
      prev = v;
    }
    return sup + lip;
  });
  diag.germ_qvar = a_control.norm(0, idx.size() - 1);

  const double th0 = theta(0);
  std::vector<double> a0(theta.size());
  for (std::size_t n = 0; n < theta.size(); ++n) a0[n] = tb.increment(0, n, th0);
  diag.K = p_variation(a0, q) + p_variation(k, q);
  diag.gronwall_envelope = gronwall_bound(a_control, q, diag.K, std::abs(th0));
  diag.envelope_holds = diag.theta_qvar <= diag.gronwall_envelope * (1.0 + 1e-12);
}

SolveResult solve_euler(const SolveSpec& spec) {
  const GridPath& w = spec.path;
  const std::size_t d = w.dim(), n = w.size();
  const double dt = w.dt();
  std::vector<double> x(n * d), z(n * d), drift(d, 0.0), b(d);
  std::vector<double> hi(d), lo(d);
  for (std::size_t i = 0; i < d; ++i) {
    z[i] = w(0, i);
    double x0 = spec.x0[i];
    if (spec.gamma == GammaKind::perturbed)
      x0 = x0 / (1.0 - spec.perturb.alpha[i] - spec.perturb.beta[i]);
    x[i] = x0;
    hi[i] = lo[i] = x0;
  }
  for (std::size_t t = 0; t + 1 < n; ++t) {
    spec.field.eval(std::span<const double>(&x[t * d], d), w.time(t), b);
    for (std::size_t i = 0; i < d; ++i) {
      drift[i] += b[i] * dt;
      const double znext = drift[i] + w(t + 1, i);
      z[(t + 1) * d + i] = znext;
      double& xn = x[(t + 1) * d + i];
      switch (spec.gamma) {
        case GammaKind::identity:
          xn = spec.x0[i] + (znext - z[i]);
          break;
        case GammaKind::skorokhod: {
          const double free = x[t * d + i] + (znext - z[t * d + i]);
          xn = std::clamp(free, spec.domain.lower[i], spec.domain.upper[i]);
          break;
        }
        case GammaKind::perturbed: {
          const double y = spec.x0[i] + (znext - z[i]);
          xn = perturb_step(y, hi[i], lo[i], spec.perturb.alpha[i], spec.perturb.beta[i]);
          hi[i] = std::max(hi[i], xn);
          lo[i] = std::min(lo[i], xn);
          break;
        }
      }
    }
  }
  SolveResult res{w.with_values(x), w, 1, 0.0, {}};
  res.theta = res.x - w;
  const GridPath Z = w.with_values(std::move(z));
  std::vector<double> y(n * d);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t i = 0; i < d; ++i) y[t * d + i] = spec.x0[i] + (Z(t, i) - Z(0, i));
  const GridPath Y = w.with_values(std::move(y));
  if (spec.gamma == GammaKind::perturbed) res.residual = perturb_residual(Y, res.x, spec.perturb);
  if (spec.diagnostics && d == 1) {
    std::optional<FieldTable> table;
    fill_diagnostics(spec, res.theta, res.x - Y, table, res.diagnostics);
  }
  return res;
}

SolveResult solve_picard(const SolveSpec& spec) {
  const GridPath& w = spec.path;
  const std::size_t d = w.dim();
  std::vector<double> th0(w.values().size());
  for (std::size_t t = 0; t < w.size(); ++t)
    for (std::size_t i = 0; i < d; ++i) th0[t * d + i] = spec.x0[i] - w(0, i);
  GridPath theta = w.with_values(std::move(th0));

  std::optional<FieldTable> table;
  std::optional<Germ> direct;
  if (d > 1) direct.emplace(direct_germ(spec));

  // One sweep theta -> Gamma(x0 + int A(dr, theta) + w) - w.
  auto sweep = [&](const GridPath& th, int compare, YoungResult* young_out) {
    YoungResult young = [&] {
      if (d == 1) {
        table = ensure_table(std::move(table), spec, th);
        return nonlinear_young_integral(table_germ(*table, w), th, 64, compare);
      }
      return nonlinear_young_integral(*direct, th, 64, compare);
    }();
    GammaOutput g = apply_gamma(spec, young.path + w);
    if (young_out) *young_out = std::move(young);
    return g;
  };

  SolveResult res{w, theta, 0, 0.0, {}};
  bool converged = false;
  for (std::size_t it = 1; it <= spec.max_iter; ++it) {
    GammaOutput g = sweep(theta, 1, nullptr);
    GridPath next = g.x - w;
    const double u = sup_distance(next, theta);
    res.diagnostics.updates.push_back(u);
    theta = std::move(next);
    res.x = std::move(g.x);
    res.iterations = it;
    if (u < spec.tol) {
      converged = true;
      break;
    }
  }
  YoungResult young{theta, 0.0, {}, {}, false};
  GammaOutput again = sweep(theta, spec.diagnostics ? 6 : 1, &young);
  const GridPath& k = again.k;
  res.residual = sup_distance(again.x - w, theta);
  require(converged, ErrorKind::non_convergence,
          "Picard iteration did not converge in " + std::to_string(spec.max_iter) +
              " sweeps; residual " + format_double(res.residual));
  res.theta = theta;
  res.diagnostics.young_error_estimate = young.error_estimate;
  res.diagnostics.divergence_warning = young.divergence_warning;
  if (spec.diagnostics && d == 1) {
    auto updates = std::move(res.diagnostics.updates);
    const double err = young.error_estimate;
    const bool warn = young.divergence_warning;
    fill_diagnostics(spec, theta, k, table, res.diagnostics);
    res.diagnostics.updates = std::move(updates);
    res.diagnostics.young_error_estimate = err;
    res.diagnostics.divergence_warning = warn;
  }
  return res;
}

}  // namespace

SolveResult solve(const SolveSpec& spec) {
  validate(spec);
  return spec.scheme == Scheme::euler_split ? solve_euler(spec) : solve_picard(spec);
}

StabilityResult stability_experiment(const SolveSpec& spec1, const SolveSpec& spec2,
                                     const StabilityOptions& options) {
  require(options.samples >= 2, ErrorKind::insufficient_data,
          "stability experiment needs at least two samples");
  require(options.m >= 1, ErrorKind::invalid_parameter, "moment order must be at least 1");
  FbmSampler sampler(options.noise);
  StabilityResult out;
  out.sup_distances.resize(options.samples);
  parallel_for(options.samples, options.threads, [&](std::size_t r) {
    SolveSpec a = spec1, b = spec2;
    a.path = sampler.sample(options.first_replica + r);
    b.path = a.path;
    a.diagnostics = b.diagnostics = false;
    out.sup_distances[r] = sup_distance(solve(a).x, solve(b).x);
  });
  double acc = 0.0;
  for (double v : out.sup_distances) acc += std::pow(v, options.m);
  out.lhs = std::pow(acc / static_cast<double>(options.samples), 1.0 / options.m);
  double dx0 = 0.0;
  for (std::size_t i = 0; i < spec1.x0.size(); ++i)
    dx0 = std::max(dx0, std::abs(spec1.x0[i] - spec2.x0[i]));
  out.rhs_scale = dx0 + field_distance(spec1.field, spec2.field, options.norm_order, options.window);
  return out;
}

double cross_scheme_check(const SolveSpec& spec) {
  SolveSpec a = spec, b = spec;
  a.scheme = Scheme::picard_young;
  b.scheme = Scheme::euler_split;
  a.diagnostics = b.diagnostics = false;
  return sup_distance(solve(a).x, solve(b).x);
}

}  // namespace roughsde
