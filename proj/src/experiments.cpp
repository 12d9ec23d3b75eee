#include "roughsde/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

#include "roughsde/error.hpp"
#include "roughsde/parallel.hpp"
#include "roughsde/paths.hpp"
#include "roughsde/perturbed.hpp"
#include "roughsde/rng.hpp"
#include "roughsde/skorokhod.hpp"

namespace roughsde {

using nlohmann::json;

SampleBudget::SampleBudget(double seconds) : seconds_(seconds) {}

std::size_t SampleBudget::run(std::size_t total,
                              const std::function<void(std::size_t, std::size_t)>& work) {
  if (seconds_ <= 0.0) {
    work(0, total);
    return total;
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t chunk = std::max<std::size_t>(1, total / 20);
  std::size_t done = 0;
  while (done < total) {
    const double spent =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (spent > seconds_) {
      cut_ = true;
      break;
    }
    const std::size_t end = std::min(total, done + chunk);
    work(done, end);
    done = end;
  }
  return done;
}

void to_json(json& j, const Verdict& v) {
  j = json{{"criterion", v.criterion}, {"holds", v.holds}, {"measured", v.measured}};
  if (v.interval) j["interval"] = {v.interval->lo, v.interval->hi};
  if (!v.note.empty()) j["note"] = v.note;
}

GridPath sharpness_path(int n, std::size_t steps, double horizon) {
  const double dt = horizon / static_cast<double>(steps);
  return GridPath::sample(0.0, dt, steps, [&](double t) {
    return 2.0 * std::cos(2.0 * std::numbers::pi * n * t / horizon);
  });
}

KonevarReport run_konevar_campaign(const KonevarConfig& config, const RunSettings& settings) {
  require(config.samples >= 1 && config.steps >= 1, ErrorKind::invalid_parameter,
          "campaign needs samples and steps");
  KonevarReport out;
  const Domain unit = Domain::unit(1);
  SampleBudget budget(settings.budget_seconds);
  for (std::size_t h = 0; h < config.hursts.size(); ++h) {
    FbmSpec spec;
    spec.hurst = config.hursts[h];
    spec.steps = config.steps;
    spec.horizon = config.horizon;
    spec.seed = stream_seed(settings.seed, h);
    FbmSampler sampler(spec);
    std::vector<double> ratio(config.samples, 0.0);
    std::vector<char> ok(config.samples, 1);
    const std::size_t done = budget.run(config.samples, [&](std::size_t a, std::size_t b) {
      parallel_for(b - a, settings.threads, [&](std::size_t i) {
        const GridPath w = sampler.sample(a + i);
        const OneVarBound r = reflection_onevar_bound_check(w, unit);
        ratio[a + i] = r.lhs[0] / r.rhs[0];
        ok[a + i] = r.holds;
      });
    });
    KonevarHurst kh;
    kh.hurst = spec.hurst;
    kh.samples = done;
    for (std::size_t i = 0; i < done; ++i) {
      kh.max_ratio = std::max(kh.max_ratio, ratio[i]);
      if (!ok[i]) {
        ++kh.violations;
        kh.offending.push_back(i);
      }
    }
    out.by_hurst.push_back(std::move(kh));
  }
  out.budget_cut = budget.cut();

  const GridPath flat = GridPath::scalar(0.0, 1.0 / static_cast<double>(config.steps),
                                         std::vector<double>(config.steps + 1, 0.5));
  const OneVarBound deg = reflection_onevar_bound_check(flat, unit);
  out.degenerate_ratio = deg.lhs[0] / deg.rhs[0];

  double lo = INFINITY, hi = 0.0;
  for (int n : config.sharpness_n) {
    const GridPath h = sharpness_path(n, config.sharpness_steps, config.horizon);
    const OneVarBound r = reflection_onevar_bound_check(h, unit, {.project_initial = true});
    SharpnessPoint p{n, r.lhs[0], r.rhs[0], r.lhs[0] / n, r.holds};
    lo = std::min(lo, p.per_n);
    hi = std::max(hi, p.per_n);
    out.sharpness.push_back(p);
  }
  if (!out.sharpness.empty()) out.sharpness_spread = (hi - lo) / lo;
  return out;
}

namespace {

double predicted_gain(double hurst, double alpha, double beta) {
  const double gain = std::min(1.0 / (2.0 * hurst), beta / hurst - 1.0);
  return std::min(1.0, alpha + gain);
}

}  // namespace

RegularityReport run_regularity_campaign(const RegularityConfig& config,
                                         const RunSettings& settings) {
  check_hurst(config.hurst);
  require(config.samples >= 1 && config.lags.size() >= 2, ErrorKind::invalid_parameter,
          "regularity campaign needs samples and at least two scales");
  const DriftField field = synthesize_field(config.target_alpha, config.field_seed, config.bandwidth);
  const std::size_t max_lag = *std::max_element(config.lags.begin(), config.lags.end());
  const auto points = static_cast<std::size_t>(std::ceil(config.x_span / config.x_step)) + max_lag + 1;
  std::vector<double> xs(points);
  for (std::size_t j = 0; j < points; ++j) xs[j] = static_cast<double>(j) * config.x_step;

  FbmSpec spec;
  spec.hurst = config.hurst;
  spec.steps = config.steps;
  spec.seed = settings.seed;
  FbmSampler sampler(spec);
  require(config.reflect_width > 0.0, ErrorKind::invalid_parameter, "reflect_width must be positive");
  const Domain box{{0.0}, {config.reflect_width}};
  std::vector<std::vector<double>> inc(config.samples, std::vector<double>(config.lags.size()));

  SampleBudget budget(settings.budget_seconds);
  const std::size_t done = budget.run(config.samples, [&](std::size_t a, std::size_t b) {
    parallel_for(b - a, settings.threads, [&](std::size_t i) {
      GridPath w = sampler.sample(a + i);
      if (config.perturbation == Perturbation::reflected) {
        w = reflect(w, box).reflected;
      } else if (config.perturbation == Perturbation::bounded_variation) {
        const GridPath phi = GridPath::sample(w.t0(), w.dt(), w.steps(), [](double t) {
          return 0.5 * std::sin(2.0 * std::numbers::pi * t);
        });
        w = w + phi;
      }
      const std::vector<double> T = averaged_field_terminal(w, field, xs);
      for (std::size_t l = 0; l < config.lags.size(); ++l) {
        const std::size_t lag = config.lags[l];
        double sup = 0.0;
        for (std::size_t j = 0; j + lag < T.size(); ++j)
          sup = std::max(sup, std::abs(T[j + lag] - T[j]));
        inc[a + i][l] = sup;
      }
    });
  });

  RegularityReport out;
  out.samples = done;
  out.budget_cut = budget.cut();
  require(done >= 1, ErrorKind::insufficient_data, "no samples completed within the budget");
  std::vector<double> lx, ly;
  for (std::size_t l = 0; l < config.lags.size(); ++l) {
    double m = 0.0;
    for (std::size_t i = 0; i < done; ++i) m += inc[i][l];
    m /= static_cast<double>(done);
    const double h = config.x_step * static_cast<double>(config.lags[l]);
    out.scales.push_back(h);
    out.mean_increments.push_back(m);
    lx.push_back(std::log(h));
    ly.push_back(std::log(m));
  }
  out.fit = fit_line(lx, ly);
  // Time-independent drift, bounded-variation perturbation: beta = 1.
  out.predicted = predicted_gain(config.hurst, config.target_alpha, 1.0);
  out.floor = out.predicted - 0.15;
  out.conclusive = out.fit.r2 >= config.min_r2;
  out.holds = out.conclusive && out.fit.slope >= out.floor;
  return out;
}

TailReport run_tail_campaign(const TailConfig& config, const RunSettings& settings) {
  FbmSpec spec;
  spec.hurst = config.hurst;
  spec.steps = config.steps;
  spec.seed = settings.seed;
  TailOptions opt;
  opt.resamples = config.resamples;
  opt.level = config.level;
  opt.bootstrap_seed = stream_seed(settings.seed, 0x7a11);
  TailReport out;
  const TailExperiment ex =
      tail_exponent_experiment(spec, Domain::unit(1), config.samples, opt, settings.threads);
  out.fit = ex.fit;
  out.samples = config.samples;
  out.target = 1.0 + 2.0 * config.hurst;
  out.contains_target = out.fit.interval.contains(out.target);
  return out;
}

StabilityReport run_stability_campaign(const StabilityConfig& config, const RunSettings& settings) {
  require(config.eps_ladder.size() >= 2, ErrorKind::invalid_parameter,
          "stability campaign needs at least two ladder rungs");
  const DriftField base = synthesize_field(config.target_alpha, config.field_seed, config.bandwidth);
  const double s = config.norm_order.value_or(config.target_alpha - 1.0);
  StabilityOptions opt;
  opt.noise.hurst = config.hurst;
  opt.noise.steps = config.steps;
  opt.noise.seed = settings.seed;
  opt.samples = config.samples;
  opt.threads = settings.threads;

  SolveSpec spec;
  spec.x0 = {config.x0};
  spec.gamma = GammaKind::identity;
  spec.scheme = Scheme::euler_split;
  spec.diagnostics = false;

  StabilityReport out;
  for (double eps : config.eps_ladder) {
    SolveSpec a = spec, b = spec;
    a.field = base.mollify(eps);
    b.field = base.mollify(eps / 2.0);
    const StabilityResult r = stability_experiment(a, b, opt);
    StabilityPoint p;
    p.eps = eps;
    p.field_distance = field_distance(a.field, b.field, s, std::numbers::pi);
    for (int m : config.moments) {
      double acc = 0.0;
      for (double v : r.sup_distances) acc += std::pow(v, m);
      p.lhs.push_back(std::pow(acc / static_cast<double>(r.sup_distances.size()), 1.0 / m));
    }
    out.points.push_back(std::move(p));
  }
  for (std::size_t k = 0; k < config.moments.size(); ++k) {
    std::vector<double> lx, ly;
    for (const auto& p : out.points) {
      lx.push_back(std::log(p.field_distance));
      ly.push_back(std::log(p.lhs[k]));
    }
    out.fits.push_back(fit_line(lx, ly));
    out.holds.push_back(out.fits.back().slope >= 0.8 && out.fits.back().slope <= 1.2);
  }
  {
    SolveSpec a = spec;
    a.field = base.mollify(config.eps_ladder.front());
    StabilityOptions few = opt;
    few.samples = 2;
    out.identical_zero = stability_experiment(a, a, few).lhs == 0.0;
  }
  return out;
}

ContractionReport run_contraction_campaign(const ContractionConfig& config,
                                           const RunSettings& settings) {
  require(config.low < 1.0 && config.rho_max > 0.0 && config.rho_max < 1.0,
          ErrorKind::invalid_parameter, "invalid contraction sampling range");
  ContractionReport out;
  out.instances.resize(config.instances);
  parallel_for(config.instances, settings.threads, [&](std::size_t k) {
    Rng rng(settings.seed, k);
    double a, b;
    do {
      a = rng.uniform(config.low, 1.0);
      b = rng.uniform(config.low, 1.0);
    } while (!(a < 1.0 && b < 1.0 && rho(a, b) < config.rho_max));
    const double dt = 1.0 / static_cast<double>(config.steps);
    std::vector<double> v(config.steps + 1, 0.0);
    for (std::size_t i = 1; i <= config.steps; ++i) v[i] = v[i - 1] + std::sqrt(dt) * rng.normal();
    PerturbOptions po;
    po.tol = config.tol;
    const PerturbResult r = perturb(GridPath::scalar(0.0, dt, std::move(v)), {{a}, {b}}, po);
    ContractionInstance& c = out.instances[k];
    c.alpha = a;
    c.beta = b;
    c.rho = rho(a, b);
    c.max_factor = r.log[0].max_contraction;
    c.residual = r.residual;
    c.iterations = r.iterations;
    c.budget = r.log[0].budget;
  });
  out.worst_excess = -INFINITY;
  for (const auto& c : out.instances) {
    out.worst_excess = std::max(out.worst_excess, c.max_factor - c.rho);
    out.worst_residual = std::max(out.worst_residual, c.residual);
  }
  out.holds = out.worst_excess <= 0.05 && out.worst_residual <= config.tol;
  return out;
}

DriftField cross_scheme_field() {
  Series1D s;
  s.poly = {0.0, -0.25};
  s.modes = {{1.0, 1.0, -std::numbers::pi / 2.0}, {2.0, 0.5, 0.0}};
  return DriftField::scalar(std::move(s));
}

CrossSchemeReport run_cross_scheme_campaign(const CrossSchemeConfig& config,
                                            const RunSettings& settings) {
  require(config.strides.size() >= 2 && config.paths >= 1, ErrorKind::invalid_parameter,
          "refinement study needs two grids and one path");
  FbmSpec spec;
  spec.hurst = config.hurst;
  spec.steps = config.finest_steps;
  spec.seed = settings.seed;
  FbmSampler sampler(spec);
  const DriftField field = cross_scheme_field();

  CrossSchemeReport out;
  SampleBudget budget(settings.budget_seconds);
  for (GammaKind g : config.gammas) {
    SolveSpec base;
    base.x0 = {config.x0};
    base.gamma = g;
    base.domain = Domain::unit(1);
    base.perturb = {{config.alpha}, {config.beta}};
    base.field = field;
    base.tol = config.tol;
    base.diagnostics = false;

    CrossSchemeSeries series;
    series.gamma = g;
    std::vector<std::vector<double>> dist(config.paths, std::vector<double>(config.strides.size()));
    const std::size_t done = budget.run(config.paths, [&](std::size_t a, std::size_t b) {
      parallel_for(b - a, settings.threads, [&](std::size_t i) {
        const GridPath w = sampler.sample(a + i);
        for (std::size_t s = 0; s < config.strides.size(); ++s) {
          SolveSpec sp = base;
          sp.path = subsample(w, config.strides[s]);
          dist[a + i][s] = cross_scheme_check(sp);
        }
      });
    });
    require(done >= 1, ErrorKind::insufficient_data, "no paths completed within the budget");
    std::vector<double> lx, ly;
    for (std::size_t s = 0; s < config.strides.size(); ++s) {
      double m = 0.0;
      for (std::size_t i = 0; i < done; ++i) m += dist[i][s];
      m /= static_cast<double>(done);
      const std::size_t steps = config.finest_steps / config.strides[s];
      series.steps.push_back(steps);
      series.mean_distance.push_back(m);
      lx.push_back(std::log(1.0 / static_cast<double>(steps)));
      ly.push_back(std::log(m));
    }
    series.fit = fit_line(lx, ly);
    SolveSpec zero = base;
    zero.field = DriftField::zero(1);
    zero.path = sampler.sample(0);
    series.zero_drift_distance = cross_scheme_check(zero);
    out.series.push_back(std::move(series));
  }
  out.budget_cut = budget.cut();
  return out;
}

// JSON plumbing for the registry.
namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
  require(j.is_object(), ErrorKind::invalid_parameter, "campaign config must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    require(ok.count(k) > 0, ErrorKind::invalid_parameter, "unknown campaign config key '" + k + "'");
}

template <typename T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, std::string("bad value for '") + key + "': " + e.what());
  }
}

json envelope(const std::string& name, const json& config, const RunSettings& s,
              std::size_t samples, std::vector<Verdict> verdicts, json results, bool cut) {
  json j;
  j["name"] = name;
  j["config"] = config;
  j["seed"] = s.seed;
  j["samples"] = samples;
  j["verdicts"] = verdicts;
  j["results"] = std::move(results);
  j["notes"] = json::array();
  if (cut) j["notes"].push_back("wall-clock budget reached; sample count reduced");
  return j;
}

json konevar_json(const json& cfg, const RunSettings& s) {
  check_keys(cfg, {"hursts", "steps", "samples", "horizon", "sharpness_n", "sharpness_steps"});
  KonevarConfig c;
  read(cfg, "hursts", c.hursts);
  read(cfg, "steps", c.steps);
  read(cfg, "samples", c.samples);
  read(cfg, "horizon", c.horizon);
  read(cfg, "sharpness_n", c.sharpness_n);
  read(cfg, "sharpness_steps", c.sharpness_steps);
  const KonevarReport r = run_konevar_campaign(c, s);
  json res;
  std::vector<Verdict> v;
  std::size_t total = 0;
  for (const auto& h : r.by_hurst) {
    res["by_hurst"].push_back({{"hurst", h.hurst}, {"samples", h.samples},
                               {"violations", h.violations}, {"max_ratio", h.max_ratio},
                               {"offending_replicas", h.offending}});
    v.push_back({"reflection-measure-bound", h.violations == 0, h.max_ratio, std::nullopt,
                 "H=" + format_double(h.hurst)});
    total += h.samples;
  }
  res["degenerate_ratio"] = r.degenerate_ratio;
  for (const auto& p : r.sharpness)
    res["sharpness"].push_back({{"N", p.n}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"lhs_over_N", p.per_n},
                                {"holds", p.holds}});
  res["sharpness_spread"] = r.sharpness_spread;
  bool sharp_ok = r.sharpness_spread <= 0.10;
  for (const auto& p : r.sharpness) sharp_ok = sharp_ok && p.holds;
  v.push_back({"sharpness-example", sharp_ok, r.sharpness_spread, std::nullopt,
               "relative spread of ||K(h_N)||/N"});
  json conf{{"hursts", c.hursts}, {"steps", c.steps}, {"samples", c.samples},
            {"horizon", c.horizon}, {"sharpness_n", c.sharpness_n},
            {"sharpness_steps", c.sharpness_steps}};
  return envelope("konevar", conf, s, total, v, res, r.budget_cut);
}

Perturbation parse_perturbation(const std::string& s) {
  if (s == "none") return Perturbation::none;
  if (s == "reflected") return Perturbation::reflected;
  if (s == "bounded-variation") return Perturbation::bounded_variation;
  fail(ErrorKind::invalid_parameter, "perturbation must be none, reflected or bounded-variation");
}

std::string perturbation_name(Perturbation p) {
  switch (p) {
    case Perturbation::none: return "none";
    case Perturbation::reflected: return "reflected";
    case Perturbation::bounded_variation: return "bounded-variation";
  }
  return "none";
}

json regularity_json(const json& cfg, const RunSettings& s) {
  check_keys(cfg, {"hurst", "target_alpha", "bandwidth", "field_seed", "steps", "samples",
                   "perturbation", "reflect_width", "x_step", "x_span", "lags", "min_r2"});
  RegularityConfig c;
  read(cfg, "hurst", c.hurst);
  read(cfg, "target_alpha", c.target_alpha);
  read(cfg, "bandwidth", c.bandwidth);
  read(cfg, "field_seed", c.field_seed);
  read(cfg, "steps", c.steps);
  read(cfg, "samples", c.samples);
  std::string pert = "none";
  read(cfg, "perturbation", pert);
  c.perturbation = parse_perturbation(pert);
  read(cfg, "reflect_width", c.reflect_width);
  read(cfg, "x_step", c.x_step);
  read(cfg, "x_span", c.x_span);
  read(cfg, "lags", c.lags);
  read(cfg, "min_r2", c.min_r2);
  const RegularityReport r = run_regularity_campaign(c, s);
  json res{{"slope", r.fit.slope}, {"r2", r.fit.r2}, {"scales", r.scales},
           {"mean_sup_increments", r.mean_increments}, {"predicted", r.predicted},
           {"floor", r.floor}, {"conclusive", r.conclusive}};
  std::vector<Verdict> v{{"regularity-gain", r.holds, r.fit.slope, std::nullopt,
                          r.conclusive ? "" : "inconclusive: R^2 below threshold"}};
  json conf{{"hurst", c.hurst}, {"target_alpha", c.target_alpha}, {"bandwidth", c.bandwidth},
            {"field_seed", c.field_seed}, {"steps", c.steps}, {"samples", c.samples},
            {"perturbation", perturbation_name(c.perturbation)},
            {"reflect_width", c.reflect_width}, {"x_step", c.x_step},
            {"x_span", c.x_span}, {"lags", c.lags}, {"min_r2", c.min_r2}};
  return envelope("regularity", conf, s, r.samples, v, res, r.budget_cut);
}

json tail_json(const json& cfg, const RunSettings& s) {
  check_keys(cfg, {"hurst", "steps", "samples", "resamples", "level"});
  TailConfig c;
  read(cfg, "hurst", c.hurst);
  read(cfg, "steps", c.steps);
  read(cfg, "samples", c.samples);
  read(cfg, "resamples", c.resamples);
  read(cfg, "level", c.level);
  const TailReport r = run_tail_campaign(c, s);
  json res{{"exponent", r.fit.exponent}, {"interval", {r.fit.interval.lo, r.fit.interval.hi}},
           {"target", r.target}, {"tail_points", r.fit.tail_points}};
  std::vector<Verdict> v{{"tail-exponent", r.contains_target, r.fit.exponent, r.fit.interval,
                          "bootstrap interval vs 1+2H"}};
  json conf{{"hurst", c.hurst}, {"steps", c.steps}, {"samples", c.samples},
            {"resamples", c.resamples}, {"level", c.level}};
  return envelope("tail", conf, s, r.samples, v, res, r.budget_cut);
}

json stability_json(const json& cfg, const RunSettings& s) {
  check_keys(cfg, {"hurst", "steps", "samples", "target_alpha", "bandwidth", "field_seed",
                   "eps_ladder", "moments", "x0", "norm_order"});
  StabilityConfig c;
  read(cfg, "hurst", c.hurst);
  read(cfg, "steps", c.steps);
  read(cfg, "samples", c.samples);
  read(cfg, "target_alpha", c.target_alpha);
  read(cfg, "bandwidth", c.bandwidth);
  read(cfg, "field_seed", c.field_seed);
  read(cfg, "eps_ladder", c.eps_ladder);
  read(cfg, "moments", c.moments);
  read(cfg, "x0", c.x0);
  if (cfg.contains("norm_order")) c.norm_order = cfg.at("norm_order").get<double>();
  const StabilityReport r = run_stability_campaign(c, s);
  json res;
  for (const auto& p : r.points)
    res["ladder"].push_back({{"eps", p.eps}, {"field_distance", p.field_distance}, {"lhs", p.lhs}});
  std::vector<Verdict> v;
  for (std::size_t k = 0; k < c.moments.size(); ++k) {
    res["slopes"].push_back({{"m", c.moments[k]}, {"slope", r.fits[k].slope}, {"r2", r.fits[k].r2}});
    v.push_back({"stability-scaling", r.holds[k], r.fits[k].slope, std::nullopt,
                 "m=" + std::to_string(c.moments[k])});
  }
  v.push_back({"stability-identical", r.identical_zero, 0.0, std::nullopt, "identical inputs"});
  json conf{{"hurst", c.hurst}, {"steps", c.steps}, {"samples", c.samples},
            {"target_alpha", c.target_alpha}, {"bandwidth", c.bandwidth},
            {"field_seed", c.field_seed}, {"eps_ladder", c.eps_ladder}, {"moments", c.moments},
            {"x0", c.x0}, {"norm_order", c.norm_order.value_or(c.target_alpha - 1.0)}};
  return envelope("stability", conf, s, c.samples, v, res, r.budget_cut);
}

json contraction_json(const json& cfg, const RunSettings& s) {
  check_keys(cfg, {"instances", "steps", "rho_max", "low", "tol"});
  ContractionConfig c;
  read(cfg, "instances", c.instances);
  read(cfg, "steps", c.steps);
  read(cfg, "rho_max", c.rho_max);
  read(cfg, "low", c.low);
  read(cfg, "tol", c.tol);
  const ContractionReport r = run_contraction_campaign(c, s);
  json res;
  for (const auto& i : r.instances)
    res["instances"].push_back({{"alpha", i.alpha}, {"beta", i.beta}, {"rho", i.rho},
                                {"max_factor", i.max_factor}, {"residual", i.residual},
                                {"iterations", i.iterations}, {"budget", i.budget}});
  res["worst_excess"] = r.worst_excess;
  res["worst_residual"] = r.worst_residual;
  std::vector<Verdict> v{{"perturbed-contraction", r.holds, r.worst_excess, std::nullopt,
                          "max over instances of factor - rho"}};
  json conf{{"instances", c.instances}, {"steps", c.steps}, {"rho_max", c.rho_max},
            {"low", c.low}, {"tol", c.tol}};
  return envelope("contraction", conf, s, c.instances, v, res, false);
}

json cross_scheme_json(const json& cfg, const RunSettings& s) {
  check_keys(cfg, {"gammas", "hurst", "finest_steps", "strides", "paths", "x0", "alpha", "beta",
                   "tol"});
  CrossSchemeConfig c;
  if (cfg.contains("gammas")) {
    c.gammas.clear();
    for (const auto& g : cfg.at("gammas")) c.gammas.push_back(parse_gamma_kind(g.get<std::string>()));
  }
  read(cfg, "hurst", c.hurst);
  read(cfg, "finest_steps", c.finest_steps);
  read(cfg, "strides", c.strides);
  read(cfg, "paths", c.paths);
  read(cfg, "x0", c.x0);
  read(cfg, "alpha", c.alpha);
  read(cfg, "beta", c.beta);
  read(cfg, "tol", c.tol);
  const CrossSchemeReport r = run_cross_scheme_campaign(c, s);
  json res;
  std::vector<Verdict> v;
  std::vector<std::string> names;
  for (const auto& se : r.series) {
    names.emplace_back(to_string(se.gamma));
    res["series"].push_back({{"gamma", to_string(se.gamma)}, {"steps", se.steps},
                             {"mean_distance", se.mean_distance}, {"order", se.fit.slope},
                             {"r2", se.fit.r2}, {"zero_drift_distance", se.zero_drift_distance}});
    v.push_back({"cross-scheme", se.fit.slope >= 0.9 && se.zero_drift_distance == 0.0,
                 se.fit.slope, std::nullopt, std::string(to_string(se.gamma))});
  }
  json conf{{"gammas", names}, {"hurst", c.hurst}, {"finest_steps", c.finest_steps},
            {"strides", c.strides}, {"paths", c.paths}, {"x0", c.x0}, {"alpha", c.alpha},
            {"beta", c.beta}, {"tol", c.tol}};
  return envelope("cross-scheme", conf, s, c.paths, v, res, r.budget_cut);
}

}  // namespace

const std::vector<Campaign>& campaigns() {
  static const std::vector<Campaign> list{
      {"konevar", "reflection-measure 1-variation bound and the h_N sharpness example",
       konevar_json},
      {"regularity", "spatial regularity of the averaged field along (perturbed) fBm",
       regularity_json},
      {"tail", "Weibull tail exponent of the reflection-measure 1-variation", tail_json},
      {"stability", "solution distance against drift distance on a mollification ladder",
       stability_json},
      {"contraction", "contraction factors of the running-max map for random (alpha, beta)",
       contraction_json},
      {"cross-scheme", "picard_young against euler_split under grid refinement",
       cross_scheme_json},
  };
  return list;
}

const Campaign& find_campaign(const std::string& name) {
  for (const auto& c : campaigns())
    if (c.name == name) return c;
  fail(ErrorKind::invalid_parameter, "unknown campaign '" + name + "'");
}

}  // namespace roughsde
