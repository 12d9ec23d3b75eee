#include "roughsde/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "roughsde/experiments.hpp"
#include "roughsde/fbm.hpp"
#include "roughsde/fields.hpp"
#include "roughsde/grid_path.hpp"
#include "roughsde/parallel.hpp"
#include "roughsde/paths.hpp"
#include "roughsde/perturbed.hpp"
#include "roughsde/skorokhod.hpp"
#include "roughsde/solver.hpp"

namespace roughsde {

using nlohmann::json;

int exit_code_for(const Error& error) {
  switch (error.kind()) {
    case ErrorKind::io_error:
      return 4;
    case ErrorKind::non_convergence:
    case ErrorKind::insufficient_data:
    case ErrorKind::resource_error:
    case ErrorKind::internal_error:
      return 3;
    default:
      return 2;
  }
}

namespace {

json read_json_file(const std::string& filename) {
  std::ifstream in(filename);
  require(static_cast<bool>(in), ErrorKind::io_error, "cannot open '" + filename + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::invalid_parameter, "'" + filename + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& filename, const std::string& text) {
  std::ofstream out(filename, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::io_error, "cannot write '" + filename + "'");
  out << text;
  require(static_cast<bool>(out), ErrorKind::io_error, "write to '" + filename + "' failed");
}

void write_json(const std::string& filename, const json& j) { write_text(filename, j.dump(2) + "\n"); }

void write_paths(const std::string& filename, std::span<const GridPath> paths, std::ostream& out) {
  if (filename.empty() || filename == "-")
    write_paths_csv(out, paths);
  else
    write_paths_csv(filename, paths);
}

void write_plot(const std::string& filename, std::span<const GridPath> paths) {
  if (filename.empty()) return;
  std::ostringstream s;
  write_plot_csv(s, paths);
  write_text(filename, s.str());
}

std::string option_key(const CLI::Option* opt) {
  std::string name = opt->get_name(false, false);
  name.erase(0, name.find_first_not_of('-'));
  return name;
}

bool skip_echo(const std::string& key) {
  return key == "help" || key == "config";
}

// Values from a JSON config file fill every option the command line left unset.
void apply_config(CLI::App* sub, const std::string& filename) {
  if (filename.empty()) return;
  const json j = read_json_file(filename);
  require(j.is_object(), ErrorKind::invalid_parameter, "config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    require(opt != nullptr && !skip_echo(key), ErrorKind::invalid_parameter,
            "unknown config key '" + key + "' for " + sub->get_name());
    if (opt->count() > 0) continue;
    auto as_text = [&](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      if (v.is_number_float()) return format_double(v.get<double>());
      return v.dump();
    };
    try {
      if (value.is_array()) {
        for (const auto& v : value) opt->add_result(as_text(v));
      } else {
        opt->add_result(as_text(value));
      }
      opt->run_callback();
    } catch (const CLI::Error& e) {
      fail(ErrorKind::invalid_parameter, "bad config value for '" + key + "': " + e.what());
    }
  }
}

// Resolved option values, for echoing into reports.
json echo_options(const CLI::App* sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string key = option_key(opt);
    if (skip_echo(key)) continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      if (opt->get_expected_max() > 1)
        j[key] = r;
      else
        j[key] = r.back();
    } else if (!opt->get_default_str().empty()) {
      j[key] = opt->get_default_str();
    }
  }
  return j;
}

std::vector<GridPath> load_paths(const std::string& filename) {
  require(!filename.empty(), ErrorKind::invalid_parameter, "--in is required");
  return read_paths_csv(filename);
}

Domain parse_domain(std::size_t dim, const std::vector<double>& lower,
                    const std::vector<double>& upper) {
  Domain d;
  d.lower = lower.empty() ? std::vector<double>(dim, 0.0) : lower;
  d.upper = upper.empty() ? std::vector<double>(dim, 1.0) : upper;
  if (d.lower.size() == 1 && dim > 1) d.lower.assign(dim, d.lower[0]);
  if (d.upper.size() == 1 && dim > 1) d.upper.assign(dim, d.upper[0]);
  require(d.dim() == dim && d.upper.size() == dim, ErrorKind::invalid_parameter,
          "domain bounds must have one entry per path component");
  d.validate();
  return d;
}

std::vector<double> broadcast(std::vector<double> v, std::size_t dim, const char* what) {
  if (v.size() == 1 && dim > 1) v.assign(dim, v[0]);
  require(v.size() == dim, ErrorKind::invalid_parameter,
          std::string(what) + " must have one entry per path component");
  return v;
}

struct Common {
  std::string config;
  std::string out;
  std::string report;
  std::string plot;
  std::uint64_t seed = 20261016;
  std::size_t threads = 0;
};

void add_config(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON file whose keys set any flag not given on the command line");
}
void add_seed(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Root seed; all randomness derives from it");
}
void add_threads(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "Worker threads (0 = available cores)");
}
void add_plot(CLI::App* sub, Common& c) {
  sub->add_option("--emit-plot-data", c.plot, "Also write long-format CSV path,t,component,value");
}

// sample-fbm ----------------------------------------------------------------

struct SampleArgs {
  Common c;
  double hurst = 0.5;
  std::size_t steps = 1024;
  double horizon = 1.0;
  std::size_t dim = 1;
  std::size_t count = 1;
  std::string method = "auto";
  std::size_t cholesky_cap = 1024;
  std::uint64_t first_replica = 0;
};

int run_sample(CLI::App* sub, SampleArgs& a, std::ostream& out) {
  apply_config(sub, a.c.config);
  FbmSpec spec;
  spec.hurst = a.hurst;
  spec.steps = a.steps;
  spec.horizon = a.horizon;
  spec.dim = a.dim;
  spec.method = parse_fbm_method(a.method);
  spec.seed = a.c.seed;
  spec.cholesky_cap = a.cholesky_cap;
  const auto paths = sample_fbm(spec, a.count, a.c.threads, a.first_replica);
  write_paths(a.c.out, paths, out);
  write_plot(a.c.plot, paths);
  if (!a.c.report.empty()) {
    json r{{"command", "sample-fbm"}, {"config", echo_options(sub)}, {"count", paths.size()},
           {"method", to_string(FbmSampler(spec).method())}};
    write_json(a.c.report, r);
  }
  return 0;
}

// reflect -------------------------------------------------------------------

struct ReflectArgs {
  Common c;
  std::string in;
  std::vector<double> lower, upper;
  bool project_initial = false;
};

int run_reflect(CLI::App* sub, ReflectArgs& a, std::ostream& out) {
  apply_config(sub, a.c.config);
  const auto input = load_paths(a.in);
  const Domain domain = parse_domain(input.front().dim(), a.lower, a.upper);
  std::vector<GridPath> result(input.size(), input.front());
  std::vector<std::optional<ReflectionResult>> stats(input.size());
  parallel_for(input.size(), a.c.threads, [&](std::size_t i) {
    stats[i] = reflect(input[i], domain, {.project_initial = a.project_initial});
    result[i] = stats[i]->reflected;
  });
  write_paths(a.c.out, result, out);
  write_plot(a.c.plot, result);
  if (!a.c.report.empty()) {
    json r{{"command", "reflect"}, {"config", echo_options(sub)}};
    for (std::size_t i = 0; i < input.size(); ++i) {
      json p{{"path", i}, {"k_onevar", stats[i]->k_onevar},
             {"k_onevar_component", stats[i]->k_onevar_component},
             {"sign_condition", sign_condition_holds(*stats[i], domain)}};
      if (domain.unit_width() && domain.contains(input[i].node(0))) {
        const OneVarBound b = reflection_onevar_bound_check(input[i], domain);
        p["onevar_bound"] = {{"lhs", b.lhs}, {"rhs", b.rhs}, {"holds", b.holds}};
      }
      r["paths"].push_back(std::move(p));
    }
    write_json(a.c.report, r);
  }
  return 0;
}

// perturb -------------------------------------------------------------------

struct PerturbArgs {
  Common c;
  std::string in;
  std::vector<double> alpha{0.0}, beta{0.0};
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  bool cross_check = false;
};

int run_perturb(CLI::App* sub, PerturbArgs& a, std::ostream& out) {
  apply_config(sub, a.c.config);
  const auto input = load_paths(a.in);
  const std::size_t dim = input.front().dim();
  const PerturbParams params{broadcast(a.alpha, dim, "--alpha"), broadcast(a.beta, dim, "--beta")};
  params.validate();
  PerturbOptions opt;
  opt.tol = a.tol;
  opt.max_iter = a.max_iter;
  opt.cross_check = a.cross_check;
  std::vector<GridPath> result(input.size(), input.front());
  std::vector<std::optional<PerturbResult>> stats(input.size());
  parallel_for(input.size(), a.c.threads, [&](std::size_t i) {
    stats[i] = perturb(input[i], params, opt);
    result[i] = stats[i]->f;
  });
  write_paths(a.c.out, result, out);
  write_plot(a.c.plot, result);
  if (!a.c.report.empty()) {
    json r{{"command", "perturb"}, {"config", echo_options(sub)}, {"rho", params.rates()}};
    for (std::size_t i = 0; i < input.size(); ++i) {
      json p{{"path", i}, {"iterations", stats[i]->iterations}, {"residual", stats[i]->residual}};
      for (const auto& l : stats[i]->log)
        p["components"].push_back({{"iterations", l.iterations}, {"budget", l.budget},
                                   {"max_contraction", l.max_contraction}, {"updates", l.updates}});
      if (a.cross_check) p["cross_check_distance"] = stats[i]->cross_check_distance;
      r["paths"].push_back(std::move(p));
    }
    write_json(a.c.report, r);
  }
  return 0;
}

// pvar ----------------------------------------------------------------------

struct PvarArgs {
  Common c;
  std::string in;
  double p = 2.0;
  std::optional<std::size_t> component, first, last;
};

int run_pvar(CLI::App* sub, PvarArgs& a, std::ostream& out) {
  apply_config(sub, a.c.config);
  const auto input = load_paths(a.in);
  json r{{"command", "pvar"}, {"config", echo_options(sub)}};
  for (const auto& path : input) {
    std::optional<IndexWindow> window;
    if (a.first || a.last) window = IndexWindow{a.first.value_or(0), a.last.value_or(path.steps())};
    const double v = p_variation(path, a.p, window, a.component);
    out << format_double(v) << '\n';
    r["values"].push_back(v);
  }
  if (!a.c.report.empty()) write_json(a.c.report, r);
  return 0;
}

// avgfield ------------------------------------------------------------------

struct AvgArgs {
  Common c;
  std::string in;
  std::string field;
  double x_min = 0.0, x_max = 1.0;
  std::size_t x_points = 65;
  bool terminal = false;
};

int run_avgfield(CLI::App* sub, AvgArgs& a, std::ostream& out) {
  apply_config(sub, a.c.config);
  require(!a.field.empty(), ErrorKind::invalid_parameter, "--field is required");
  require(a.x_points >= 1 && a.x_max >= a.x_min, ErrorKind::invalid_parameter,
          "spatial grid needs x-points >= 1 and x-max >= x-min");
  const auto input = load_paths(a.in);
  const DriftField field = read_json_file(a.field).get<DriftField>();
  const std::size_t dim = field.dim();
  std::vector<double> xs(a.x_points);
  for (std::size_t j = 0; j < a.x_points; ++j)
    xs[j] = a.x_points == 1 ? a.x_min
                            : a.x_min + (a.x_max - a.x_min) * static_cast<double>(j) /
                                            static_cast<double>(a.x_points - 1);
  std::vector<double> grid(a.x_points * dim);
  for (std::size_t j = 0; j < a.x_points; ++j)
    std::fill_n(grid.begin() + static_cast<std::ptrdiff_t>(j * dim), dim, xs[j]);

  std::ostringstream csv;
  csv << "path,t,x,component,value\n";
  json r{{"command", "avgfield"}, {"config", echo_options(sub)}};
  for (std::size_t p = 0; p < input.size(); ++p) {
    require(input[p].dim() == dim, ErrorKind::invalid_parameter,
            "field dimension does not match the path dimension");
    const AveragedField T = averaged_field(input[p], field, grid, a.c.threads);
    const std::size_t n0 = a.terminal ? T.nodes - 1 : 0;
    for (std::size_t n = n0; n < T.nodes; ++n)
      for (std::size_t j = 0; j < a.x_points; ++j)
        for (std::size_t i = 0; i < dim; ++i)
          csv << p << ',' << format_double(input[p].time(n)) << ',' << format_double(xs[j]) << ','
              << i + 1 << ',' << format_double(T(n, j, i)) << '\n';
  }
  if (a.c.out.empty() || a.c.out == "-")
    out << csv.str();
  else
    write_text(a.c.out, csv.str());
  if (!a.c.report.empty()) write_json(a.c.report, r);
  return 0;
}

// solve ---------------------------------------------------------------------

struct SolveArgs {
  Common c;
  std::optional<std::string> scheme, gamma;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
};

template <typename T>
T json_get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, std::string("bad value for '") + key + "': " + e.what());
  }
}

int run_solve(CLI::App* sub, SolveArgs& a, std::ostream& out) {
  require(!a.c.config.empty(), ErrorKind::invalid_parameter, "solve needs --config");
  json cfg = read_json_file(a.c.config);
  require(cfg.is_object(), ErrorKind::invalid_parameter, "solve config must be a JSON object");
  static const std::vector<std::string> keys{
      "x0",  "gamma", "domain", "perturb", "field", "noise", "path", "scheme", "tol", "max_iter",
      "diagnostics", "diagnostic_q", "seed", "threads"};
  for (const auto& [k, v] : cfg.items())
    require(std::find(keys.begin(), keys.end(), k) != keys.end(), ErrorKind::invalid_parameter,
            "unknown solve config key '" + k + "'");
  if (sub->count("--seed")) cfg["seed"] = a.c.seed;
  if (sub->count("--threads")) cfg["threads"] = a.c.threads;
  if (a.scheme) cfg["scheme"] = *a.scheme;
  if (a.gamma) cfg["gamma"] = *a.gamma;
  if (a.tol) cfg["tol"] = *a.tol;
  if (a.max_iter) cfg["max_iter"] = *a.max_iter;

  SolveSpec spec;
  spec.x0 = json_get(cfg, "x0", std::vector<double>{0.0});
  const std::size_t dim = spec.x0.size();
  require(dim >= 1, ErrorKind::invalid_parameter, "x0 must be nonempty");
  spec.gamma = parse_gamma_kind(json_get(cfg, "gamma", std::string("identity")));
  spec.scheme = parse_scheme(json_get(cfg, "scheme", std::string("euler_split")));
  spec.tol = json_get(cfg, "tol", spec.tol);
  spec.max_iter = json_get(cfg, "max_iter", spec.max_iter);
  spec.diagnostics = json_get(cfg, "diagnostics", spec.diagnostics);
  spec.diagnostic_q = json_get(cfg, "diagnostic_q", spec.diagnostic_q);
  const auto seed = json_get(cfg, "seed", a.c.seed);
  cfg["seed"] = seed;

  const json dom = json_get(cfg, "domain", json::object());
  spec.domain = parse_domain(dim, json_get(dom, "lower", std::vector<double>{}),
                             json_get(dom, "upper", std::vector<double>{}));
  const json per = json_get(cfg, "perturb", json::object());
  spec.perturb = {broadcast(json_get(per, "alpha", std::vector<double>{0.0}), dim, "perturb.alpha"),
                  broadcast(json_get(per, "beta", std::vector<double>{0.0}), dim, "perturb.beta")};
  require(cfg.contains("field"), ErrorKind::invalid_parameter, "solve config needs a field");
  try {
    spec.field = cfg.at("field").get<DriftField>();
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_parameter, std::string("malformed field: ") + e.what());
  }

  if (cfg.contains("path")) {
    const auto paths = read_paths_csv(json_get(cfg, "path", std::string()));
    spec.path = paths.front();
  } else {
    const json noise = json_get(cfg, "noise", json::object());
    FbmSpec fs;
    fs.hurst = json_get(noise, "hurst", 0.5);
    fs.steps = json_get(noise, "steps", std::size_t{1024});
    fs.horizon = json_get(noise, "horizon", 1.0);
    fs.method = parse_fbm_method(json_get(noise, "method", std::string("auto")));
    fs.dim = dim;
    fs.seed = seed;
    spec.path = FbmSampler(fs).sample(json_get(noise, "replica", std::uint64_t{0}));
  }

  const SolveResult res = solve(spec);
  const std::vector<GridPath> sol{res.x};
  write_paths(a.c.out, sol, out);
  write_plot(a.c.plot, sol);
  if (!a.c.report.empty()) {
    const SolveDiagnostics& d = res.diagnostics;
    json r{{"command", "solve"}, {"config", cfg}, {"iterations", res.iterations},
           {"residual", res.residual}};
    if (d.available)
      r["diagnostics"] = {{"q", d.q},
                          {"theta_qvar", d.theta_qvar},
                          {"germ_qvar", d.germ_qvar},
                          {"K", d.K},
                          {"gronwall_envelope", d.gronwall_envelope},
                          {"envelope_holds", d.envelope_holds},
                          {"young_error_estimate", d.young_error_estimate},
                          {"divergence_warning", d.divergence_warning},
                          {"picard_updates", d.updates},
                          {"window", {d.window_lo, d.window_hi}},
                          {"window_points", d.window_points}};
    write_json(a.c.report, r);
  }
  return 0;
}

// experiment ----------------------------------------------------------------

struct ExperimentArgs {
  Common c;
  std::string name;
  double budget = 0.0;
};

int run_experiment(CLI::App* sub, ExperimentArgs& a, std::ostream& out) {
  require(!a.name.empty(), ErrorKind::invalid_parameter, "--name is required");
  const Campaign& campaign = find_campaign(a.name);
  const json cfg = a.c.config.empty() ? json::object() : read_json_file(a.c.config);
  RunSettings s;
  s.seed = a.c.seed;
  s.threads = a.c.threads;
  s.budget_seconds = a.budget;
  (void)sub;
  const json report = campaign.run(cfg, s);
  if (a.c.out.empty() || a.c.out == "-")
    out << report.dump(2) << '\n';
  else
    write_json(a.c.out, report);
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rough-path and singular-drift SDE toolkit", "roughsde"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample-fbm", "Sample fractional Brownian motion paths");
  add_config(sample, sa.c);
  sample->add_option("--hurst", sa.hurst, "Hurst index in (0,1)");
  sample->add_option("--steps", sa.steps, "Grid intervals");
  sample->add_option("--horizon", sa.horizon, "Time horizon T");
  sample->add_option("--dim", sa.dim, "Independent components per path");
  sample->add_option("--count", sa.count, "Number of paths");
  sample->add_option("--method", sa.method, "auto, cholesky or circulant");
  sample->add_option("--cholesky-cap", sa.cholesky_cap, "Largest grid accepted by the Cholesky method");
  sample->add_option("--first-replica", sa.first_replica, "Replica index of the first path");
  add_seed(sample, sa.c);
  add_threads(sample, sa.c);
  sample->add_option("--out", sa.c.out, "Output CSV (stdout if omitted)");
  sample->add_option("--report", sa.c.report, "JSON report");
  add_plot(sample, sa.c);

  ReflectArgs ra;
  auto* refl = app.add_subcommand("reflect", "Skorokhod reflection into a box");
  add_config(refl, ra.c);
  refl->add_option("--in", ra.in, "Input paths CSV");
  refl->add_option("--lower", ra.lower, "Lower bounds a1,...,ad")->delimiter(',')->default_str("0");
  refl->add_option("--upper", ra.upper, "Upper bounds b1,...,bd")->delimiter(',')->default_str("1");
  refl->add_flag("--project-initial", ra.project_initial,
                 "Clamp a starting point outside the box instead of failing");
  add_threads(refl, ra.c);
  refl->add_option("--out", ra.c.out, "Output CSV (stdout if omitted)");
  refl->add_option("--report", ra.c.report, "JSON report with reflection-measure statistics");
  add_plot(refl, ra.c);

  PerturbArgs pa;
  auto* pert = app.add_subcommand("perturb", "Solve the running max/min perturbation fixed point");
  add_config(pert, pa.c);
  pert->add_option("--in", pa.in, "Input paths CSV");
  pert->add_option("--alpha", pa.alpha, "Running-max weights, one per component")->delimiter(',')->default_str("0");
  pert->add_option("--beta", pa.beta, "Running-min weights, one per component")->delimiter(',')->default_str("0");
  pert->add_option("--tol", pa.tol, "Fixed-point tolerance");
  pert->add_option("--max-iter", pa.max_iter, "Iteration cap");
  pert->add_flag("--cross-check", pa.cross_check, "Compare against the sequential step recursion");
  add_threads(pert, pa.c);
  pert->add_option("--out", pa.c.out, "Output CSV (stdout if omitted)");
  pert->add_option("--report", pa.c.report, "JSON report with iteration logs");
  add_plot(pert, pa.c);

  PvarArgs va;
  auto* pvar = app.add_subcommand("pvar", "Print the p-variation of each path");
  add_config(pvar, va.c);
  pvar->add_option("--in", va.in, "Input paths CSV");
  pvar->add_option("--p", va.p, "Exponent p >= 1");
  pvar->add_option("--component", va.component, "Use only this component (0-based)");
  pvar->add_option("--first", va.first, "First node of the window");
  pvar->add_option("--last", va.last, "Last node of the window");
  pvar->add_option("--report", va.c.report, "JSON report");

  AvgArgs aa;
  auto* avg = app.add_subcommand("avgfield", "Averaged field T^w f on a spatial grid");
  add_config(avg, aa.c);
  avg->add_option("--in", aa.in, "Input paths CSV");
  avg->add_option("--field", aa.field, "Drift field JSON file");
  avg->add_option("--x-min", aa.x_min, "Left end of the spatial grid");
  avg->add_option("--x-max", aa.x_max, "Right end of the spatial grid");
  avg->add_option("--x-points", aa.x_points, "Spatial grid points (on the diagonal when d > 1)");
  avg->add_flag("--terminal-only", aa.terminal, "Write only the final time");
  add_threads(avg, aa.c);
  avg->add_option("--out", aa.c.out, "Output CSV path,t,x,component,value (stdout if omitted)");
  avg->add_option("--report", aa.c.report, "JSON report");

  SolveArgs so;
  auto* solv = app.add_subcommand("solve", "Solve X = Gamma(x0 + int f(s,X) ds + w)");
  solv->add_option("--config", so.c.config, "JSON problem description (x0, gamma, field, noise, ...)");
  solv->add_option("--scheme", so.scheme, "Override: picard_young or euler_split");
  solv->add_option("--gamma", so.gamma, "Override: identity, skorokhod or perturbed");
  solv->add_option("--tol", so.tol, "Override: solver tolerance");
  solv->add_option("--max-iter", so.max_iter, "Override: Picard sweep cap");
  add_seed(solv, so.c);
  add_threads(solv, so.c);
  solv->add_option("--out", so.c.out, "Solution CSV (stdout if omitted)");
  solv->add_option("--report", so.c.report, "JSON report with diagnostics");
  add_plot(solv, so.c);

  ExperimentArgs ea;
  auto* exp = app.add_subcommand("experiment", "Monte Carlo campaigns");
  exp->require_subcommand(1);
  auto* run = exp->add_subcommand("run", "Run a registered campaign");
  run->add_option("--name", ea.name, "Campaign name (see `experiment list`)");
  run->add_option("--config", ea.c.config, "Campaign config JSON; omitted keys take defaults");
  add_seed(run, ea.c);
  add_threads(run, ea.c);
  run->add_option("--budget", ea.budget, "Wall-clock budget in seconds (0 = none)");
  run->add_option("--out", ea.c.out, "Report JSON (stdout if omitted)");
  auto* list = exp->add_subcommand("list", "List registered campaigns");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
      err << app.help();
    } else {
      std::string prefix;
      for (const CLI::App* p = subs.back()->get_parent(); p != nullptr; p = p->get_parent())
        prefix = p->get_name() + (prefix.empty() ? "" : " " + prefix);
      err << subs.back()->help(prefix);
    }
    return 2;
  }

  try {
    if (*sample) return run_sample(sample, sa, out);
    if (*refl) return run_reflect(refl, ra, out);
    if (*pert) return run_perturb(pert, pa, out);
    if (*pvar) return run_pvar(pvar, va, out);
    if (*avg) return run_avgfield(avg, aa, out);
    if (*solv) return run_solve(solv, so, out);
    if (*list) {
      for (const auto& c : campaigns()) out << c.name << "  " << c.summary << '\n';
      return 0;
    }
    if (*run) return run_experiment(run, ea, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace roughsde
