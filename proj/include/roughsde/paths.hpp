#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "roughsde/grid_path.hpp"

namespace roughsde {

// Inclusive range of node indices.
struct IndexWindow {
  std::size_t first = 0;
  std::size_t last = 0;
};

// Which norm to use for increments of a multi-dimensional path: the
// Euclidean norm by default, or the absolute value of one component.
using ComponentSelect = std::optional<std::size_t>;

// Exact p-variation over node subsequences of the window. For piecewise
// linear paths this is the p-variation of the interpolant.
double p_variation(const GridPath& path, double p, std::optional<IndexWindow> window = {},
                   ComponentSelect component = {});
// Same for a scalar sequence.
double p_variation(std::span<const double> values, double p);

// max over node pairs s<t of |X_t - X_s| / (t-s)^gamma.
double holder_norm(const GridPath& path, double gamma, std::optional<IndexWindow> window = {},
                   ComponentSelect component = {});

struct OscillationResult {
  std::size_t count = 0;            // number of stopping times strictly before T
  std::vector<double> stop_times;   // tau_1, tau_2, ... (all that are <= T)
};

// Successive delta-oscillation stopping times of the linear interpolant of
// a scalar path (or of the selected component).
OscillationResult oscillation_count(const GridPath& path, double delta,
                                    ComponentSelect component = {});

GridPath running_max(const GridPath& path);
GridPath running_min(const GridPath& path);

// Superadditive two-index map eval(i,j) = max over subsequences
// i = k0 < ... < km = j of sum dist(k_l, k_{l+1})^q. Rows are computed
// on demand and cached; concurrent eval calls are safe.
class Control {
 public:
  using Distance = std::function<double(std::size_t, std::size_t)>;

  Control(std::size_t nodes, double q, Distance dist);

  std::size_t size() const noexcept { return nodes_; }
  double exponent() const noexcept { return q_; }
  double eval(std::size_t i, std::size_t j) const;
  // eval(i,j)^(1/q): the q-variation norm on [i,j].
  double norm(std::size_t i, std::size_t j) const;

 private:
  struct Cache;
  std::size_t nodes_;
  double q_;
  Distance dist_;
  std::shared_ptr<Cache> cache_;
};

Control control_from_path(const GridPath& path, double q, ComponentSelect component = {});

}  // namespace roughsde
