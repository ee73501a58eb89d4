#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace lea {

// Closed time interval [lo, hi].
struct Interval {
  double lo;
  double hi;
};

// Uniform time grid t_i = start + i * step, i = 0..n-1.
class Grid {
 public:
  Grid(double start, double step, std::size_t n);

  // Grid covering [start, end]; end - start must be a whole number of steps.
  static Grid spanning(double start, double end, double step);

  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t size() const noexcept { return n_; }
  double end() const noexcept { return at(n_ - 1); }
  double length() const noexcept { return end() - start_; }

  double at(std::size_t i) const noexcept {
    return start_ + static_cast<double>(i) * step_;
  }
  double operator[](std::size_t i) const noexcept { return at(i); }

  // Index of t if t lies on the grid (within a small fraction of a step).
  std::optional<std::size_t> index_of(double t) const noexcept;
  std::size_t require_index(double t) const;

  bool contains(double t) const noexcept { return index_of(t).has_value(); }
  bool same_as(const Grid& other) const noexcept;

  // Sub-grid of points with indices [first, last].
  Grid slice(std::size_t first, std::size_t last) const;

 private:
  double start_;
  double step_;
  std::size_t n_;
};

// Path values on a grid. Values are finite and one per grid point.
class SamplePath {
 public:
  SamplePath(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  // Restriction to [a, b]; both ends must be grid points.
  SamplePath restrict(double a, double b) const;

  // max_i |B(t_i)|
  double sup_norm() const noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

// Composite trapezoid rule over a whole sequence sampled with spacing h.
double trapezoid(std::span<const double> y, double h) noexcept;

}  // namespace lea
