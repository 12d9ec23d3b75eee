#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace roughsde {

// A d-dimensional path sampled on the uniform grid t_i = t0 + i*dt.
// Between nodes the path is understood as the linear interpolant.
class GridPath {
 public:
  // `values` is node-major: values[i*dim + k] is component k at node i.
  GridPath(double t0, double dt, std::size_t dim, std::vector<double> values);

  static GridPath scalar(double t0, double dt, std::vector<double> values);
  static GridPath constant(double t0, double dt, std::size_t nodes,
                           std::span<const double> value);
  // Samples fn(t) on nodes t0 + i*dt, i = 0..steps.
  template <typename Fn>
  static GridPath sample(double t0, double dt, std::size_t steps, Fn&& fn) {
    std::vector<double> v(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) v[i] = fn(t0 + static_cast<double>(i) * dt);
    return scalar(t0, dt, std::move(v));
  }

  std::size_t size() const noexcept { return values_.size() / dim_; }
  std::size_t steps() const noexcept { return size() - 1; }
  std::size_t dim() const noexcept { return dim_; }
  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * dt_; }
  double horizon() const noexcept { return time(steps()); }

  double operator()(std::size_t i, std::size_t k = 0) const noexcept {
    return values_[i * dim_ + k];
  }
  std::span<const double> node(std::size_t i) const noexcept {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<double> component_values(std::size_t k) const;
  GridPath component(std::size_t k) const;

  bool same_grid(const GridPath& other) const noexcept;

  // New path on the same grid with replaced values.
  GridPath with_values(std::vector<double> values) const;

 private:
  double t0_;
  double dt_;
  std::size_t dim_;
  std::vector<double> values_;
};

GridPath operator+(const GridPath& a, const GridPath& b);
GridPath operator-(const GridPath& a, const GridPath& b);
// Adds the constant vector c to every node.
GridPath shifted(const GridPath& path, std::span<const double> c);
// Keeps every `stride`-th node.
GridPath subsample(const GridPath& path, std::size_t stride);

double sup_distance(const GridPath& a, const GridPath& b);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

// CSV with header `t,x1,...,xd`, or `path,t,x1,...,xd` for several paths.
void write_paths_csv(std::ostream& out, std::span<const GridPath> paths);
void write_paths_csv(const std::string& filename, std::span<const GridPath> paths);
std::vector<GridPath> read_paths_csv(std::istream& in);
std::vector<GridPath> read_paths_csv(const std::string& filename);

// Long format `path,t,component,value` for plotting tools.
void write_plot_csv(std::ostream& out, std::span<const GridPath> paths);

}  // namespace roughsde
