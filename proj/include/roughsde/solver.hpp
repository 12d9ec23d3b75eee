#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "roughsde/fbm.hpp"
#include "roughsde/fields.hpp"
#include "roughsde/grid_path.hpp"
#include "roughsde/perturbed.hpp"
#include "roughsde/skorokhod.hpp"

namespace roughsde {

enum class GammaKind { identity, skorokhod, perturbed };
enum class Scheme { picard_young, euler_split };

GammaKind parse_gamma_kind(std::string_view name);
std::string_view to_string(GammaKind kind);
Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme);

// X = Gamma(x0 + int_0^. f(s, X_s) ds + w).
struct SolveSpec {
  std::vector<double> x0;
  GammaKind gamma = GammaKind::identity;
  Domain domain;          // skorokhod
  PerturbParams perturb;  // perturbed
  DriftField field;
  GridPath path = GridPath::scalar(0.0, 1.0, {0.0, 0.0});  // the noise w
  Scheme scheme = Scheme::euler_split;
  double tol = 1e-10;
  std::size_t max_iter = 200;
  bool diagnostics = true;
  double diagnostic_q = 1.9;
};

struct SolveDiagnostics {
  bool available = false;
  double q = 1.9;
  double theta_qvar = 0.0;       // ||theta||_{q-var}
  double germ_qvar = 0.0;        // ||T^w f||_{q-var; C^1} on the spatial window
  double K = 0.0;                // ||A_0.(0)||_{q-var} + ||constraint term||_{q-var}
  double gronwall_envelope = 0.0;
  bool envelope_holds = true;
  double young_error_estimate = 0.0;
  bool divergence_warning = false;
  std::vector<double> updates;   // Picard sup-norm updates
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t window_points = 0;
};

struct SolveResult {
  GridPath x;
  GridPath theta;  // x - w
  std::size_t iterations = 0;
  double residual = 0.0;
  SolveDiagnostics diagnostics;
};

SolveResult solve(const SolveSpec& spec);

struct StabilityResult {
  double lhs = 0.0;        // E[sup |X1 - X2|^m]^{1/m}
  double rhs_scale = 0.0;  // |x0^1 - x0^2| + field distance
  std::vector<double> sup_distances;
};

struct StabilityOptions {
  FbmSpec noise;
  std::size_t samples = 1000;
  int m = 2;
  double norm_order = 0.0;  // s in the C^s block norm of the field difference
  double window = 3.14159265358979323846;
  std::size_t threads = 1;
  std::uint64_t first_replica = 0;
};

// Solves both specs on shared fBm samples (their `path` members are replaced).
StabilityResult stability_experiment(const SolveSpec& spec1, const SolveSpec& spec2,
                                     const StabilityOptions& options);

// Sup distance between the picard_young and euler_split solutions.
double cross_scheme_check(const SolveSpec& spec);

}  // namespace roughsde
