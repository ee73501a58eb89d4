#pragma once

// Exponentially weighted trapezoid sums shared by the closed-form solver and
// the stationary filter.

#include <cmath>
#include <span>
#include <vector>

namespace lea::detail {

struct ExpSums {
  // forward[i]  = trapezoid ∫_{t_0}^{t_i} B(s) e^{-(t_i - s)} ds
  // backward[i] = trapezoid ∫_{t_i}^{t_{n-1}} B(s) e^{-(s - t_i)} ds
  std::vector<double> forward;
  std::vector<double> backward;
};

// Two recursive passes with decay e^{-h}; each panel contributes
// (h/2)(e^{-h} B_far + B_near), so the sums are exact composite trapezoids.
inline ExpSums exponential_sums(std::span<const double> b, double h) {
  const std::size_t n = b.size();
  const double r = std::exp(-h);
  const double w = 0.5 * h;
  ExpSums s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 1; i < n; ++i) {
    s.forward[i] = r * s.forward[i - 1] + w * (r * b[i - 1] + b[i]);
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    s.backward[i] = r * s.backward[i + 1] + w * (r * b[i + 1] + b[i]);
  }
  return s;
}

// 1 / trapezoid mass of (1/2) e^{-|v|} on the lattice hZ: constants pass
// through the discrete kernel exactly.
inline double mass_normalization(double h) { return 2.0 * std::tanh(0.5 * h) / h; }

// 1 / trapezoid first moment of (1/2) sgn(v) v e^{-|v|} on hZ: the
// derivative kernel maps B(s) = s to exactly 1.
inline double moment_normalization(double h) {
  const double q = 2.0 * std::sinh(0.5 * h) / h;
  return q * q;
}

}  // namespace lea::detail
