#include "roughsde/fields.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <string_view>

#include "roughsde/error.hpp"
#include "roughsde/parallel.hpp"
#include "roughsde/rng.hpp"

namespace roughsde {

double TimeModulation::operator()(double r) const noexcept {
  return amplitude == 0.0 ? 1.0 : 1.0 + amplitude * std::sin(omega * r + phase);
}

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

double poly_eval(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t p = c.size(); p-- > 0;) s = s * x + c[p];
  return s;
}

double poly_derivative(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t p = c.size(); p-- > 1;) s = s * x + static_cast<double>(p) * c[p];
  return s;
}

// Coefficients of E[p(x + sqrt(eps) Z)], Z standard normal.
std::vector<double> poly_smooth(const std::vector<double>& c, double eps) {
  if (eps == 0.0) return c;
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t n = 0; n < c.size(); ++n) {
    double moment = 1.0;  // E Z^k = (k-1)!! for even k
    for (std::size_t k = 0; k <= n; k += 2) {
      if (k > 0) moment *= static_cast<double>(k - 1);
      out[n - k] += c[n] * binomial(static_cast<int>(n), static_cast<int>(k)) * moment *
                    std::pow(eps, 0.5 * static_cast<double>(k));
    }
  }
  return out;
}

// Coefficients of p(x + a).
std::vector<double> poly_shift(const std::vector<double>& c, double a) {
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t n = 0; n < c.size(); ++n)
    for (std::size_t k = 0; k <= n; ++k)
      out[k] += c[n] * binomial(static_cast<int>(n), static_cast<int>(k)) *
                std::pow(a, static_cast<double>(n - k));
  return out;
}

double series_eval(const Series1D& s, double x) {
  double v = poly_eval(s.poly, x);
  for (const auto& m : s.modes) v += m.amp * std::cos(m.freq * x + m.phase);
  return v;
}

double series_derivative(const Series1D& s, double x) {
  double v = poly_derivative(s.poly, x);
  for (const auto& m : s.modes) v -= m.amp * m.freq * std::sin(m.freq * x + m.phase);
  return v;
}

Series1D smooth_series(const Series1D& s, double eps) {
  Series1D out{poly_smooth(s.poly, eps), s.modes};
  if (eps > 0.0)
    for (auto& m : out.modes) m.amp *= std::exp(-0.5 * eps * m.freq * m.freq);
  return out;
}

}  // namespace

DriftField::DriftField(std::size_t dim, std::vector<Series1D> terms, FieldMode mode)
    : dim_(dim), mode_(mode), terms_(std::move(terms)) {
  require(dim_ >= 1, ErrorKind::invalid_parameter, "field dimension must be at least 1");
  require(terms_.size() == dim_ * dim_, ErrorKind::invalid_parameter,
          "field needs dim*dim coordinate series");
  for (const auto& t : terms_)
    for (const auto& m : t.modes)
      require(std::isfinite(m.freq) && std::isfinite(m.amp) && std::isfinite(m.phase) &&
                  m.freq >= 0.0,
              ErrorKind::invalid_parameter, "field modes need finite values and freq >= 0");
  refresh();
}

DriftField DriftField::zero(std::size_t dim) {
  return DriftField(dim, std::vector<Series1D>(dim * dim));
}

DriftField DriftField::scalar(Series1D series, FieldMode mode) {
  return DriftField(1, {std::move(series)}, mode);
}

DriftField DriftField::affine(std::size_t dim, double a, double b) {
  std::vector<Series1D> t(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) t[i * dim + i].poly = {a, b};
  return DriftField(dim, std::move(t));
}

void DriftField::require_evaluable() const {
  require(evaluable(), ErrorKind::contract_violation,
          "field with non-positive regularity must be mollified before evaluation");
}

Series1D DriftField::effective(std::size_t i, std::size_t k) const { return eff_[i * dim_ + k]; }

void DriftField::refresh() {
  eff_.resize(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) eff_[t] = smooth_series(terms_[t], eps_);
}

void DriftField::eval(std::span<const double> x, double r, std::span<double> out) const {
  require_evaluable();
  const double m = modulation_(r);
  for (std::size_t i = 0; i < dim_; ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) v += series_eval(eff_[i * dim_ + k], x[k]);
    out[i] = m * v;
  }
}

double DriftField::eval(double x, double r) const {
  require(dim_ == 1, ErrorKind::invalid_input, "scalar evaluation of a vector field");
  double out;
  eval(std::span<const double>(&x, 1), r, std::span<double>(&out, 1));
  return out;
}

void DriftField::jacobian(std::span<const double> x, double r, std::span<double> out) const {
  require_evaluable();
  const double m = modulation_(r);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k)
      out[i * dim_ + k] = m * series_derivative(eff_[i * dim_ + k], x[k]);
}

double DriftField::effective_bandwidth(double rel) const {
  double total = 0.0;
  for (const auto& t : eff_)
    for (const auto& m : t.modes) total += std::abs(m.amp);
  double w = 1.0;
  for (const auto& t : eff_)
    for (const auto& m : t.modes)
      if (std::abs(m.amp) > rel * total) w = std::max(w, m.freq);
  return w;
}

DriftField DriftField::mollify(double eps) const {
  require(eps > 0.0 && std::isfinite(eps), ErrorKind::invalid_parameter,
          "mollification scale must be positive");
  DriftField out = *this;
  out.eps_ += eps;
  out.refresh();
  return out;
}

DriftField DriftField::scaled(double c) const {
  DriftField out = *this;
  for (auto& t : out.terms_) {
    for (auto& p : t.poly) p *= c;
    for (auto& m : t.modes) m.amp *= c;
  }
  out.refresh();
  return out;
}

DriftField DriftField::shifted(std::span<const double> c) const {
  require(c.size() == dim_, ErrorKind::invalid_input, "shift dimension mismatch");
  DriftField out = *this;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      auto& t = out.terms_[i * dim_ + k];
      t.poly = poly_shift(t.poly, c[k]);
      for (auto& m : t.modes) m.phase += m.freq * c[k];
    }
  out.refresh();
  return out;
}

DriftField DriftField::operator+(const DriftField& other) const {
  require(dim_ == other.dim_, ErrorKind::invalid_input, "field dimensions differ");
  const bool same_eps = eps_ == other.eps_;
  DriftField out = *this;
  out.mode_ = mode_ == other.mode_ ? mode_ : FieldMode::fourier_series;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    Series1D a = same_eps ? terms_[t] : smooth_series(terms_[t], eps_);
    Series1D b = same_eps ? other.terms_[t] : smooth_series(other.terms_[t], other.eps_);
    if (a.poly.size() < b.poly.size()) a.poly.resize(b.poly.size(), 0.0);
    for (std::size_t p = 0; p < b.poly.size(); ++p) a.poly[p] += b.poly[p];
    a.modes.insert(a.modes.end(), b.modes.begin(), b.modes.end());
    out.terms_[t] = std::move(a);
  }
  if (same_eps) {
    out.target_alpha_ = std::min(target_alpha_, other.target_alpha_);
  } else {
    // Smoothing has been folded into the coefficients; a mollified part
    // counts as regular.
    auto folded = [](const DriftField& f) {
      return f.eps_ > 0.0 ? std::max(f.target_alpha_, 1.0) : f.target_alpha_;
    };
    out.eps_ = 0.0;
    out.target_alpha_ = std::min(folded(*this), folded(other));
  }
  out.refresh();
  return out;
}

DriftField synthesize_field(double target_alpha, std::uint64_t seed, int bandwidth,
                            std::size_t dim) {
  require(std::isfinite(target_alpha), ErrorKind::invalid_parameter,
          "target regularity must be finite");
  require(bandwidth >= 0 && bandwidth <= 60, ErrorKind::invalid_parameter,
          "bandwidth must lie in [0,60]");
  std::vector<Series1D> terms(dim * dim);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    Rng rng(seed, t);
    for (int j = 0; j <= bandwidth; ++j) {
      const double freq = std::ldexp(1.0, j);
      const double amp = std::pow(freq, -target_alpha);
      terms[t].modes.push_back({freq, amp, 2.0 * std::numbers::pi * rng.uniform()});
    }
  }
  DriftField f(dim, std::move(terms), FieldMode::fourier_series);
  f.set_target_alpha(target_alpha);
  f.set_origin(seed, bandwidth);
  return f;
}

DriftField mollify(const DriftField& field, double eps) { return field.mollify(eps); }

std::pair<DriftField, DriftField> frequency_truncate(const DriftField& field, int level) {
  require(level >= 0, ErrorKind::invalid_parameter, "truncation level must be nonnegative");
  const double cut = std::ldexp(1.0, level);
  const std::size_t d = field.dim();
  std::vector<Series1D> lo(d * d), hi(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const Series1D& s = field.term(i, k);
      lo[i * d + k].poly = s.poly;
      for (const auto& m : s.modes) (m.freq <= cut ? lo : hi)[i * d + k].modes.push_back(m);
    }
  DriftField low(d, std::move(lo), field.mode()), high(d, std::move(hi), field.mode());
  for (DriftField* f : {&low, &high}) {
    f->set_target_alpha(field.target_alpha());
    f->set_origin(field.seed(), field.bandwidth());
    f->set_modulation(field.modulation());
  }
  if (field.eps() > 0.0) {
    low = low.mollify(field.eps());
    high = high.mollify(field.eps());
  }
  return {std::move(low), std::move(high)};
}

void to_json(nlohmann::json& j, const DriftField& field) {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t i = 0; i < field.dim(); ++i)
    for (std::size_t k = 0; k < field.dim(); ++k) {
      const Series1D& s = field.term(i, k);
      if (s.poly.empty() && s.modes.empty()) continue;
      nlohmann::json modes = nlohmann::json::array();
      for (const auto& m : s.modes)
        modes.push_back({{"freq", m.freq}, {"amp", m.amp}, {"phase", m.phase}});
      terms.push_back({{"i", i}, {"k", k}, {"poly", s.poly}, {"modes", modes}});
    }
  j = nlohmann::json{
      {"mode", field.mode() == FieldMode::closed_form ? "closed_form" : "fourier_series"},
      {"dim", field.dim()},
      {"target_alpha", field.target_alpha()},
      {"eps", field.eps()},
      {"seed", field.seed()},
      {"bandwidth", field.bandwidth()},
      {"time_modulation",
       {{"amplitude", field.modulation().amplitude},
        {"omega", field.modulation().omega},
        {"phase", field.modulation().phase}}},
      {"terms", terms}};
}

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                const char* what) {
  require(j.is_object(), ErrorKind::invalid_parameter, std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    require(std::find(allowed.begin(), allowed.end(), key) != allowed.end(),
            ErrorKind::invalid_parameter, "unknown " + std::string(what) + " key '" + key + "'");
}

}  // namespace

void from_json(const nlohmann::json& j, DriftField& field) {
  check_keys(j, {"mode", "dim", "target_alpha", "eps", "seed", "bandwidth", "time_modulation",
                 "terms", "synthesize"},
             "field");
  try {
    const std::size_t dim = j.value("dim", std::size_t{1});
    if (j.contains("synthesize")) {
      const auto& s = j.at("synthesize");
      field = synthesize_field(s.at("target_alpha").get<double>(), s.value("seed", std::uint64_t{0}),
                               s.value("bandwidth", 10), dim);
    } else {
      std::vector<Series1D> terms(dim * dim);
      for (const auto& t : j.value("terms", nlohmann::json::array())) {
        check_keys(t, {"i", "k", "poly", "modes"}, "field term");
        const std::size_t i = t.value("i", std::size_t{0}), k = t.value("k", std::size_t{0});
        require(i < dim && k < dim, ErrorKind::invalid_parameter, "field term index out of range");
        Series1D& s = terms[i * dim + k];
        s.poly = t.value("poly", std::vector<double>{});
        for (const auto& m : t.value("modes", nlohmann::json::array()))
          s.modes.push_back({m.at("freq").get<double>(), m.at("amp").get<double>(),
                             m.value("phase", 0.0)});
      }
      const std::string mode = j.value("mode", std::string("closed_form"));
      require(mode == "closed_form" || mode == "fourier_series", ErrorKind::invalid_parameter,
              "field mode must be closed_form or fourier_series");
      field = DriftField(dim, std::move(terms),
                         mode == "closed_form" ? FieldMode::closed_form : FieldMode::fourier_series);
      field.set_target_alpha(j.value("target_alpha", 1.0));
      field.set_origin(j.value("seed", std::uint64_t{0}), j.value("bandwidth", 0));
    }
    if (j.contains("time_modulation")) {
      const auto& m = j.at("time_modulation");
      field.set_modulation({m.value("amplitude", 0.0), m.value("omega", 0.0), m.value("phase", 0.0)});
    }
    const double eps = j.value("eps", 0.0);
    require(eps >= 0.0, ErrorKind::invalid_parameter, "mollification scale must be nonnegative");
    if (eps > 0.0) field = field.mollify(eps);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::invalid_parameter, std::string("malformed field descriptor: ") + e.what());
  }
}

GridPath AveragedField::at_point(std::size_t j, std::size_t i) const {
  std::vector<double> v(nodes);
  for (std::size_t n = 0; n < nodes; ++n) v[n] = (*this)(n, j, i);
  return GridPath::scalar(t0, dt, std::move(v));
}

void averaged_increment(const GridPath& w, const DriftField& field, std::size_t first,
                        std::size_t last, std::span<const double> x, std::span<double> out) {
  field.require_evaluable();
  const std::size_t d = w.dim();
  require(field.dim() == d && x.size() == d && out.size() == d, ErrorKind::invalid_input,
          "field, path and point dimensions differ");
  require(first <= last && last < w.size(), ErrorKind::invalid_window, "invalid window");
  std::fill(out.begin(), out.end(), 0.0);
  if (first == last) return;
  std::vector<double> p(d), g(d), prev(d);
  auto sample = [&](std::size_t n, std::vector<double>& dst) {
    for (std::size_t k = 0; k < d; ++k) p[k] = w(n, k) + x[k];
    field.eval(p, w.time(n), dst);
  };
  sample(first, prev);
  const double h = 0.5 * w.dt();
  for (std::size_t n = first + 1; n <= last; ++n) {
    sample(n, g);
    for (std::size_t i = 0; i < d; ++i) out[i] += h * (prev[i] + g[i]);
    prev.swap(g);
  }
}

AveragedField averaged_field(const GridPath& w, const DriftField& field,
                             std::span<const double> x_grid, std::size_t threads) {
  field.require_evaluable();
  const std::size_t d = w.dim();
  require(field.dim() == d, ErrorKind::invalid_input, "field and path dimensions differ");
  require(!x_grid.empty() && x_grid.size() % d == 0, ErrorKind::invalid_input,
          "spatial grid size must be a positive multiple of the dimension");
  for (double x : x_grid)
    require(std::isfinite(x), ErrorKind::invalid_input, "spatial grid must be finite");
  AveragedField out;
  out.t0 = w.t0();
  out.dt = w.dt();
  out.nodes = w.size();
  out.dim = d;
  out.x_grid.assign(x_grid.begin(), x_grid.end());
  const std::size_t pts = out.points();
  out.values.assign(out.nodes * pts * d, 0.0);
  const double h = 0.5 * w.dt();
  parallel_for(pts, threads, [&](std::size_t j) {
    std::vector<double> p(d), g(d), prev(d), acc(d, 0.0);
    auto sample = [&](std::size_t n, std::vector<double>& dst) {
      for (std::size_t k = 0; k < d; ++k) p[k] = w(n, k) + x_grid[j * d + k];
      field.eval(p, w.time(n), dst);
    };
    sample(0, prev);
    for (std::size_t n = 1; n < out.nodes; ++n) {
      sample(n, g);
      for (std::size_t i = 0; i < d; ++i) {
        acc[i] += h * (prev[i] + g[i]);
        out.values[(n * pts + j) * d + i] = acc[i];
      }
      prev.swap(g);
    }
  });
  return out;
}

std::vector<double> averaged_field_terminal(const GridPath& w, const DriftField& field,
                                            std::span<const double> x_grid) {
  field.require_evaluable();
  require(field.dim() == 1 && w.dim() == 1, ErrorKind::invalid_input,
          "terminal averaged field is implemented for scalar fields");
  const Series1D s = field.effective(0, 0);
  const std::size_t n = w.size();
  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i)
    weight[i] = (i == 0 || i + 1 == n ? 0.5 : 1.0) * w.dt() * field.modulation()(w.time(i));

  std::vector<std::complex<double>> sums(s.modes.size());
  for (std::size_t m = 0; m < s.modes.size(); ++m) {
    std::complex<double> acc = 0.0;
    const double f = s.modes[m].freq;
    for (std::size_t i = 0; i < n; ++i) acc += weight[i] * std::polar(1.0, f * w(i));
    sums[m] = acc * std::polar(s.modes[m].amp, s.modes[m].phase);
  }
  // Power sums of the path for the polynomial part.
  std::vector<double> moments(s.poly.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double pw = weight[i];
    for (std::size_t q = 0; q < moments.size(); ++q) {
      moments[q] += pw;
      pw *= w(i);
    }
  }
  std::vector<double> out(x_grid.size());
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    const double x = x_grid[j];
    double v = 0.0;
    for (std::size_t m = 0; m < s.modes.size(); ++m)
      v += (sums[m] * std::polar(1.0, s.modes[m].freq * x)).real();
    for (std::size_t p = 0; p < s.poly.size(); ++p)
      for (std::size_t q = 0; q <= p; ++q)
        v += s.poly[p] * binomial(static_cast<int>(p), static_cast<int>(q)) *
             std::pow(x, static_cast<double>(p - q)) * moments[q];
    out[j] = v;
  }
  return out;
}

ScalingFit increment_scaling(std::span<const double> values, double step,
                             std::span<const std::size_t> lags) {
  require(lags.size() >= 2, ErrorKind::insufficient_data, "scaling fit needs two scales");
  ScalingFit out;
  std::vector<double> lx, ly;
  for (std::size_t lag : lags) {
    require(lag >= 1 && lag < values.size(), ErrorKind::invalid_parameter,
            "scaling lag out of range");
    double sup = 0.0;
    for (std::size_t j = 0; j + lag < values.size(); ++j)
      sup = std::max(sup, std::abs(values[j + lag] - values[j]));
    const double h = step * static_cast<double>(lag);
    out.scales.push_back(h);
    out.increments.push_back(sup);
    require(sup > 0.0, ErrorKind::insufficient_data, "increments vanish at some scale");
    lx.push_back(std::log(h));
    ly.push_back(std::log(sup));
  }
  out.fit = fit_line(lx, ly);
  return out;
}

ScalingFit measure_holder_exponent(const DriftField& field, double a, double b,
                                   std::span<const double> scales) {
  require(field.dim() == 1, ErrorKind::invalid_input, "Hoelder measurement takes scalar fields");
  require(b > a && !scales.empty(), ErrorKind::invalid_parameter, "invalid measurement window");
  const double hmin = *std::min_element(scales.begin(), scales.end());
  const double hmax = *std::max_element(scales.begin(), scales.end());
  const double step = hmin / 8.0;
  const auto n = static_cast<std::size_t>(std::ceil((b - a + hmax) / step)) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = field.eval(a + static_cast<double>(i) * step);
  std::vector<std::size_t> lags;
  for (double h : scales) lags.push_back(static_cast<std::size_t>(std::llround(h / step)));
  return increment_scaling(v, step, lags);
}

namespace {

// Log-uniform separation in [1e-3, 1] times the window.
double random_gap(Rng& rng, double window) {
  return window * std::exp(std::log(1e-3) * rng.uniform());
}

}  // namespace

double measured_holder_norm(const DriftField& field, double s, std::size_t samples,
                            std::uint64_t seed, double window) {
  require(field.dim() == 1, ErrorKind::invalid_input, "Hoelder norm takes scalar fields");
  require(s > 0.0 && s <= 2.0, ErrorKind::invalid_parameter, "Hoelder order must lie in (0,2]");
  Rng rng(seed, 0x401de);
  const bool first_order = s > 1.0;
  auto g = [&](double x) {
    if (!first_order) return field.eval(x);
    double j;
    field.jacobian(std::span<const double>(&x, 1), 0.0, std::span<double>(&j, 1));
    return j;
  };
  double sup = 0.0, dsup = 0.0, semi = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double x = rng.uniform(-window, window);
    const double y = x + random_gap(rng, window);
    sup = std::max(sup, std::abs(field.eval(x)));
    if (first_order) dsup = std::max(dsup, std::abs(g(x)));
    semi = std::max(semi, std::abs(g(y) - g(x)) / std::pow(y - x, first_order ? s - 1.0 : s));
  }
  return sup + dsup + semi;
}

DoubleDifference double_difference_check(const DriftField& field, double zeta, double eta,
                                         std::size_t samples, std::uint64_t seed, double window) {
  require(zeta > 0.0 && zeta <= 1.0 && eta > 0.0 && eta <= 1.0, ErrorKind::invalid_parameter,
          "zeta and eta must lie in (0,1]");
  require(field.dim() == 1, ErrorKind::invalid_input, "double difference takes scalar fields");
  Rng rng(seed, 0xdd);
  DoubleDifference out;
  for (std::size_t n = 0; n < samples; ++n) {
    const double x = rng.uniform(-window, window);
    const double y = x + random_gap(rng, window);
    const double a = rng.uniform(-window, window);
    const double b = a + random_gap(rng, window);
    const double dd = field.eval(x - a) - field.eval(x - b) - field.eval(y - a) + field.eval(y - b);
    out.max_ratio =
        std::max(out.max_ratio, std::abs(dd) / (std::pow(y - x, zeta) * std::pow(b - a, eta)));
  }
  out.norm = measured_holder_norm(field, zeta + eta, samples, seed, window);
  out.constant = out.norm > 0.0 ? out.max_ratio / out.norm : 0.0;
  return out;
}

double field_distance(const DriftField& f, const DriftField& g, double s, double window) {
  require(f.dim() == g.dim(), ErrorKind::invalid_input, "field dimensions differ");
  const std::size_t d = f.dim();
  double total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double comp = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const Series1D a = f.effective(i, k), b = g.effective(i, k);
      // Net complex coefficient per frequency, then per dyadic block.
      std::map<double, std::complex<double>> coeff;
      for (const auto& m : a.modes) coeff[m.freq] += std::polar(m.amp, m.phase);
      for (const auto& m : b.modes) coeff[m.freq] -= std::polar(m.amp, m.phase);
      std::map<int, double> blocks;
      for (const auto& [freq, c] : coeff) {
        const int j = freq < 1.0 ? 0 : static_cast<int>(std::floor(std::log2(freq)));
        blocks[j] += std::abs(c);
      }
      double best = 0.0;
      for (const auto& [j, v] : blocks) best = std::max(best, std::pow(2.0, j * s) * v);
      std::vector<double> pd(std::max(a.poly.size(), b.poly.size()), 0.0);
      for (std::size_t p = 0; p < a.poly.size(); ++p) pd[p] += a.poly[p];
      for (std::size_t p = 0; p < b.poly.size(); ++p) pd[p] -= b.poly[p];
      double psup = 0.0;
      for (int q = 0; q <= 256; ++q)
        psup = std::max(psup, std::abs(poly_eval(pd, -window + 2.0 * window * q / 256.0)));
      comp += best + psup;
    }
    total = std::max(total, comp);
  }
  return total;
}

}  // namespace roughsde
