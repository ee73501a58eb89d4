#pragma once

#include <cstddef>
#include <functional>

namespace lea {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_intervals = 4000;
};

// Globally adaptive 15-point Gauss–Kronrod rule on [a, b]: the interval with
// the largest error estimate is bisected until the summed estimate meets
// max(abs_tol, rel_tol * |value|). Integrable endpoint singularities are fine;
// the integrand is never evaluated at a or b.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

// ∫_0^∞ f(u) du through u = tan θ. The θ-range is split at π/4 and the upper
// half is reflected (u = cot φ) so both singular ends sit at 0.
QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     const QuadratureOptions& opts = {});

}  // namespace lea
