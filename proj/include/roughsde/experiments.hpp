#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roughsde/fbm.hpp"
#include "roughsde/solver.hpp"
#include "roughsde/stats.hpp"

namespace roughsde {

// Shared run settings. Reports never contain wall-clock data, so a report
// is a pure function of (config, seed) unless a budget cut is recorded.
struct RunSettings {
  std::uint64_t seed = 20261016;
  std::size_t threads = 0;     // 0 = hardware concurrency
  double budget_seconds = 0.0; // 0 = unlimited
};

// Samples processed in chunks; once the budget is spent the remaining
// chunks are skipped and the cut is noted.
class SampleBudget {
 public:
  explicit SampleBudget(double seconds);
  // Returns how many of `total` samples can be processed, running `work`
  // on consecutive chunks [begin, end).
  std::size_t run(std::size_t total, const std::function<void(std::size_t, std::size_t)>& work);
  bool cut() const noexcept { return cut_; }

 private:
  double seconds_;
  bool cut_ = false;
};

struct Verdict {
  std::string criterion;
  bool holds = false;
  double measured = 0.0;
  std::optional<Interval> interval;
  std::string note;
};

void to_json(nlohmann::json& j, const Verdict& v);

// ||K||_{1-var} <= N_{1,T}(W) + 1 sweeps.
struct KonevarConfig {
  std::vector<double> hursts{0.25, 0.5, 0.75};
  std::size_t steps = 4096;
  std::size_t samples = 10000;
  double horizon = 1.0;
  std::vector<int> sharpness_n{4, 8, 16, 32};
  std::size_t sharpness_steps = 16384;
};

struct KonevarHurst {
  double hurst = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;
  std::vector<std::uint64_t> offending;
};

struct SharpnessPoint {
  int n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double per_n = 0.0;  // lhs / n
  bool holds = false;
};

struct KonevarReport {
  std::vector<KonevarHurst> by_hurst;
  double degenerate_ratio = 0.0;
  std::vector<SharpnessPoint> sharpness;
  double sharpness_spread = 0.0;  // (max - min) / min of lhs / n
  bool budget_cut = false;
};

KonevarReport run_konevar_campaign(const KonevarConfig& config, const RunSettings& settings);

// h_N(t) = 2 cos(2 pi N t / T) on a grid of `steps` intervals.
GridPath sharpness_path(int n, std::size_t steps, double horizon = 1.0);

enum class Perturbation { none, reflected, bounded_variation };

struct RegularityConfig {
  double hurst = 0.1;
  double target_alpha = 0.3;
  int bandwidth = 12;
  std::uint64_t field_seed = 7;
  std::size_t steps = 1 << 22;
  std::size_t samples = 8;
  Perturbation perturbation = Perturbation::none;
  double reflect_width = 1.0;  // reflection into [0, reflect_width]
  double x_step = 1.0 / 128.0;
  double x_span = 6.283185307179586;
  std::vector<std::size_t> lags{1, 2, 4, 8, 16, 32};
  double min_r2 = 0.9;
};

struct RegularityReport {
  LineFit fit;
  std::vector<double> scales;
  std::vector<double> mean_increments;
  double predicted = 0.0;  // min(1, predicted gain)
  double floor = 0.0;      // predicted - 0.15
  bool conclusive = false;
  bool holds = false;
  std::size_t samples = 0;
  bool budget_cut = false;
};

RegularityReport run_regularity_campaign(const RegularityConfig& config,
                                         const RunSettings& settings);

struct TailConfig {
  double hurst = 0.25;
  std::size_t steps = 1024;
  std::size_t samples = 100000;
  std::size_t resamples = 500;
  double level = 0.9;
};

struct TailReport {
  TailFit fit;
  double target = 0.0;
  bool contains_target = false;
  std::size_t samples = 0;
  bool budget_cut = false;
};

TailReport run_tail_campaign(const TailConfig& config, const RunSettings& settings);

struct StabilityConfig {
  double hurst = 0.4;
  std::size_t steps = 16384;
  std::size_t samples = 1000;
  double target_alpha = 0.0;
  int bandwidth = 9;
  std::uint64_t field_seed = 11;
  std::vector<double> eps_ladder{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
  std::vector<int> moments{1, 2};
  double x0 = 0.0;
  // Besov-type order of the field distance; default alpha - 1.
  std::optional<double> norm_order;
};

struct StabilityPoint {
  double eps = 0.0;
  double field_distance = 0.0;
  std::vector<double> lhs;  // per moment
};

struct StabilityReport {
  std::vector<StabilityPoint> points;
  std::vector<LineFit> fits;  // per moment, log lhs on log field distance
  std::vector<bool> holds;
  bool identical_zero = false;
  bool budget_cut = false;
};

StabilityReport run_stability_campaign(const StabilityConfig& config, const RunSettings& settings);

struct ContractionConfig {
  std::size_t instances = 100;
  std::size_t steps = 1024;
  double rho_max = 0.9;
  double low = -3.0;  // alpha, beta drawn uniformly from (low, 1)
  double tol = 1e-10;
};

struct ContractionInstance {
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double max_factor = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  std::size_t budget = 0;
};

struct ContractionReport {
  std::vector<ContractionInstance> instances;
  double worst_excess = 0.0;  // max(max_factor - rho)
  double worst_residual = 0.0;
  bool holds = false;
};

ContractionReport run_contraction_campaign(const ContractionConfig& config,
                                           const RunSettings& settings);

struct CrossSchemeConfig {
  std::vector<GammaKind> gammas{GammaKind::skorokhod, GammaKind::perturbed};
  double hurst = 0.75;
  std::size_t finest_steps = 4096;
  std::vector<std::size_t> strides{16, 8, 4, 2, 1};
  std::size_t paths = 16;
  double x0 = 0.5;
  double alpha = 0.3;
  double beta = -0.4;
  double tol = 1e-10;
};

struct CrossSchemeSeries {
  GammaKind gamma = GammaKind::identity;
  std::vector<std::size_t> steps;
  std::vector<double> mean_distance;
  LineFit fit;  // log distance on log dt
  double zero_drift_distance = 0.0;
};

struct CrossSchemeReport {
  std::vector<CrossSchemeSeries> series;
  bool budget_cut = false;
};

// Smooth drift used by the refinement study: sin(x) + cos(2x)/2 - x/4.
DriftField cross_scheme_field();

CrossSchemeReport run_cross_scheme_campaign(const CrossSchemeConfig& config,
                                            const RunSettings& settings);

// Registry for the command line: campaign name -> JSON-in, JSON-out runner.
struct Campaign {
  std::string name;
  std::string summary;
  std::function<nlohmann::json(const nlohmann::json& config, const RunSettings& settings)> run;
};

const std::vector<Campaign>& campaigns();
const Campaign& find_campaign(const std::string& name);

}  // namespace roughsde
