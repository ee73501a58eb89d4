#include "lea/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lea {

namespace {

// Alignment tolerance, in units of the step.
constexpr double kAlignTol = 1e-6;

}  // namespace

Grid::Grid(double start, double step, std::size_t n) : start_(start), step_(step), n_(n) {
  if (!std::isfinite(start) || !std::isfinite(step)) {
    throw std::invalid_argument("invalid grid: non-finite start or step");
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument("invalid grid: step must be positive, got " + std::to_string(step));
  }
  if (n < 2) {
    throw std::invalid_argument("invalid grid: need at least 2 points");
  }
}

Grid Grid::spanning(double start, double end, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("invalid grid: step must be positive, got " + std::to_string(step));
  }
  if (!(end > start)) {
    throw std::invalid_argument("invalid grid: end must exceed start");
  }
  const double steps = (end - start) / step;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > kAlignTol) {
    throw std::invalid_argument("invalid grid: [" + std::to_string(start) + ", " +
                                std::to_string(end) + "] is not a whole number of steps " +
                                std::to_string(step));
  }
  return Grid(start, step, static_cast<std::size_t>(rounded) + 1);
}

std::optional<std::size_t> Grid::index_of(double t) const noexcept {
  const double x = (t - start_) / step_;
  const double r = std::round(x);
  if (r < 0.0 || r > static_cast<double>(n_ - 1)) return std::nullopt;
  if (std::abs(x - r) > kAlignTol) return std::nullopt;
  return static_cast<std::size_t>(r);
}

std::size_t Grid::require_index(double t) const {
  auto i = index_of(t);
  if (!i) {
    throw std::invalid_argument("time " + std::to_string(t) + " is not a grid point of [" +
                                std::to_string(start_) + ", " + std::to_string(end()) +
                                "] with step " + std::to_string(step_));
  }
  return *i;
}

bool Grid::same_as(const Grid& other) const noexcept {
  return n_ == other.n_ && std::abs(step_ - other.step_) <= 1e-12 * step_ &&
         std::abs(start_ - other.start_) <= kAlignTol * step_;
}

Grid Grid::slice(std::size_t first, std::size_t last) const {
  if (last >= n_ || last <= first) {
    throw std::invalid_argument("invalid grid slice");
  }
  return Grid(at(first), step_, last - first + 1);
}

SamplePath::SamplePath(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("sample path: " + std::to_string(values_.size()) +
                                " values for a grid of " + std::to_string(grid_.size()) +
                                " points");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("sample path: non-finite value");
  }
}

SamplePath SamplePath::restrict(double a, double b) const {
  const std::size_t i = grid_.require_index(a);
  const std::size_t j = grid_.require_index(b);
  Grid sub = grid_.slice(i, j);
  return SamplePath(sub, std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(i),
                                             values_.begin() + static_cast<std::ptrdiff_t>(j) + 1));
}

double SamplePath::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double trapezoid(std::span<const double> y, double h) noexcept {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

}  // namespace lea
