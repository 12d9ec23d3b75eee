#pragma once

#include <cstddef>
#include <vector>

#include "roughsde/grid_path.hpp"

namespace roughsde {

// rho(a,b) = |ab| / ((1-a)(1-b)); throws invalid-parameter if a >= 1 or b >= 1.
double rho(double alpha, double beta);

struct PerturbParams {
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t dim() const noexcept { return alpha.size(); }
  std::vector<double> rates() const;
  // Requires alpha_i, beta_i < 1 and rho_i < 1.
  void validate() const;
};

struct PerturbOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1000;
  // Also iterate the running-min map and compare with the reconstruction.
  bool cross_check = false;
};

struct PerturbComponentLog {
  std::vector<double> updates;       // sup-norm change per iteration
  double max_contraction = 0.0;      // largest ratio of successive updates
  std::size_t iterations = 0;
  std::size_t budget = 0;            // contraction-rate iteration bound
};

struct PerturbResult {
  GridPath f;
  GridPath running_max;
  GridPath running_min;
  std::size_t iterations = 0;        // max over components
  double residual = 0.0;             // sup-norm defect of the defining relation
  std::vector<PerturbComponentLog> log;
  double cross_check_distance = 0.0; // only with options.cross_check
};

// Solves f = w + alpha max_{s<=t} f + beta min_{s<=t} f componentwise by
// iterating the running-max map from m = 0.
PerturbResult perturb(const GridPath& w, const PerturbParams& params, PerturbOptions options = {});

// sup over nodes of |f - w - alpha max f - beta min f|.
double perturb_residual(const GridPath& w, const GridPath& f, const PerturbParams& params);

// Solution value at a new node given the free value y and the running
// extrema hi, lo of f so far: x = y + alpha max(hi,x) + beta min(lo,x).
double perturb_step(double y, double hi, double lo, double alpha, double beta);

// Exact solution by the forward recursion of perturb_step; no iteration.
GridPath perturb_forward(const GridPath& w, const PerturbParams& params);

// p-variation Lipschitz constant of the whole map for one component:
// 1 + (|alpha| C+ + |beta| C-) / (1 - rho).
double perturb_lipschitz_constant(double alpha, double beta);

struct LipschitzCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

// Compares ||sup w1 - sup w2||_{p-var} with ||w1 - w2||_{p-var} for scalar
// paths on a shared grid starting at 0.
LipschitzCheck running_sup_lipschitz_check(const GridPath& w1, const GridPath& w2, double p);

}  // namespace roughsde
