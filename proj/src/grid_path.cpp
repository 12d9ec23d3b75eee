#include "roughsde/grid_path.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "roughsde/error.hpp"

namespace roughsde {

GridPath::GridPath(double t0, double dt, std::size_t dim, std::vector<double> values)
    : t0_(t0), dt_(dt), dim_(dim), values_(std::move(values)) {
  require(dim_ >= 1, ErrorKind::invalid_input, "path dimension must be at least 1");
  require(std::isfinite(t0_), ErrorKind::invalid_input, "path start time must be finite");
  require(dt_ > 0.0 && std::isfinite(dt_), ErrorKind::invalid_input,
          "path time step must be positive");
  require(values_.size() % dim_ == 0, ErrorKind::invalid_input,
          "path value count is not a multiple of the dimension");
  require(values_.size() / dim_ >= 2, ErrorKind::invalid_input,
          "path needs at least two nodes");
  require(std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }),
          ErrorKind::invalid_input, "path values must be finite");
}

GridPath GridPath::scalar(double t0, double dt, std::vector<double> values) {
  return GridPath(t0, dt, 1, std::move(values));
}

GridPath GridPath::constant(double t0, double dt, std::size_t nodes,
                            std::span<const double> value) {
  std::vector<double> v;
  v.reserve(nodes * value.size());
  for (std::size_t i = 0; i < nodes; ++i) v.insert(v.end(), value.begin(), value.end());
  return GridPath(t0, dt, value.size(), std::move(v));
}

std::vector<double> GridPath::component_values(std::size_t k) const {
  require(k < dim_, ErrorKind::invalid_parameter, "component index out of range");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i * dim_ + k];
  return out;
}

GridPath GridPath::component(std::size_t k) const {
  return scalar(t0_, dt_, component_values(k));
}

bool GridPath::same_grid(const GridPath& other) const noexcept {
  return size() == other.size() && t0_ == other.t0_ && dt_ == other.dt_;
}

GridPath GridPath::with_values(std::vector<double> values) const {
  return GridPath(t0_, dt_, dim_, std::move(values));
}

namespace {

void require_compatible(const GridPath& a, const GridPath& b) {
  require(a.same_grid(b) && a.dim() == b.dim(), ErrorKind::invalid_input,
          "paths do not share a grid and dimension");
}

}  // namespace

GridPath operator+(const GridPath& a, const GridPath& b) {
  require_compatible(a, b);
  std::vector<double> v(a.values().begin(), a.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values()[i];
  return a.with_values(std::move(v));
}

GridPath operator-(const GridPath& a, const GridPath& b) {
  require_compatible(a, b);
  std::vector<double> v(a.values().begin(), a.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values()[i];
  return a.with_values(std::move(v));
}

GridPath shifted(const GridPath& path, std::span<const double> c) {
  require(c.size() == path.dim(), ErrorKind::invalid_input, "shift dimension mismatch");
  std::vector<double> v(path.values().begin(), path.values().end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[i % path.dim()];
  return path.with_values(std::move(v));
}

GridPath subsample(const GridPath& path, std::size_t stride) {
  require(stride >= 1 && path.steps() % stride == 0, ErrorKind::invalid_parameter,
          "subsample stride must divide the number of steps");
  std::vector<double> v;
  for (std::size_t i = 0; i < path.size(); i += stride) {
    auto n = path.node(i);
    v.insert(v.end(), n.begin(), n.end());
  }
  return GridPath(path.t0(), path.dt() * static_cast<double>(stride), path.dim(), std::move(v));
}

double sup_distance(const GridPath& a, const GridPath& b) {
  require_compatible(a, b);
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  require(res.ec == std::errc() && res.ptr == text.data() + text.size(),
          ErrorKind::invalid_input, "cannot parse number '" + std::string(text) + "'");
  return value;
}

void write_paths_csv(std::ostream& out, std::span<const GridPath> paths) {
  require(!paths.empty(), ErrorKind::invalid_input, "no paths to write");
  const std::size_t d = paths.front().dim();
  const bool multi = paths.size() > 1;
  if (multi) out << "path,";
  out << 't';
  for (std::size_t k = 1; k <= d; ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const GridPath& path = paths[p];
    require(path.dim() == d, ErrorKind::invalid_input, "paths differ in dimension");
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (multi) out << p << ',';
      out << format_double(path.time(i));
      for (double v : path.node(i)) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

void write_paths_csv(const std::string& filename, std::span<const GridPath> paths) {
  std::ofstream out(filename);
  require(static_cast<bool>(out), ErrorKind::io_error, "cannot open '" + filename + "' for writing");
  write_paths_csv(out, paths);
  require(static_cast<bool>(out), ErrorKind::io_error, "failed writing '" + filename + "'");
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

GridPath assemble(const std::vector<double>& times, std::vector<double> values, std::size_t d) {
  const std::size_t n = times.size();
  require(n >= 2, ErrorKind::invalid_input, "a path needs at least two rows");
  const double t0 = times.front();
  const double dt = (times.back() - t0) / static_cast<double>(n - 1);
  require(dt > 0.0, ErrorKind::invalid_input, "time column must be increasing");
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = t0 + static_cast<double>(i) * dt;
    require(std::abs(times[i] - expected) <= 1e-7 * dt + 1e-12 * std::abs(expected),
            ErrorKind::invalid_input, "time column is not a uniform grid");
  }
  return GridPath(t0, dt, d, std::move(values));
}

}  // namespace

std::vector<GridPath> read_paths_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::invalid_input, "empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_commas(line);
  bool multi = false;
  if (!header.empty() && header.front() == "path") {
    multi = true;
    header.erase(header.begin());
  }
  require(header.size() >= 2 && header.front() == "t", ErrorKind::invalid_input,
          "CSV header must be 't,x1,...,xd'");
  const std::size_t d = header.size() - 1;
  for (std::size_t k = 1; k <= d; ++k)
    require(header[k] == "x" + std::to_string(k), ErrorKind::invalid_input,
            "CSV header must be 't,x1,...,xd'");

  std::vector<GridPath> paths;
  std::vector<double> times, values;
  long current = -1;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_commas(line);
    require(cells.size() == d + 1 + (multi ? 1 : 0), ErrorKind::invalid_input,
            "wrong number of columns on CSV row " + std::to_string(row));
    std::size_t c = 0;
    long id = 0;
    if (multi) id = static_cast<long>(parse_double(cells[c++]));
    if (id != current) {
      if (current >= 0) {
        require(id == current + 1, ErrorKind::invalid_input, "path ids must be contiguous");
        paths.push_back(assemble(times, std::move(values), d));
        times.clear();
        values = {};
      } else {
        require(id == 0, ErrorKind::invalid_input, "path ids must start at 0");
      }
      current = id;
    }
    times.push_back(parse_double(cells[c++]));
    for (; c < cells.size(); ++c) values.push_back(parse_double(cells[c]));
  }
  require(current >= 0, ErrorKind::invalid_input, "CSV input has no data rows");
  paths.push_back(assemble(times, std::move(values), d));
  return paths;
}

std::vector<GridPath> read_paths_csv(const std::string& filename) {
  std::ifstream in(filename);
  require(static_cast<bool>(in), ErrorKind::io_error, "cannot open '" + filename + "'");
  return read_paths_csv(in);
}

void write_plot_csv(std::ostream& out, std::span<const GridPath> paths) {
  out << "path,t,component,value\n";
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (std::size_t i = 0; i < paths[p].size(); ++i)
      for (std::size_t k = 0; k < paths[p].dim(); ++k)
        out << p << ',' << format_double(paths[p].time(i)) << ',' << (k + 1) << ','
            << format_double(paths[p](i, k)) << '\n';
}

}  // namespace roughsde
