#pragma once

// Least-energy approximation on a finite interval [a, T]:
//
//   minimize  ∫_a^T [ f'(t)^2 + κ^2 (f(t) - B(t))^2 ] dt
//
// The minimizer solves f'' = κ^2 (f - B) with f'(a) = f'(T) = 0.

#include <span>
#include <vector>

#include "lea/grid.hpp"

namespace lea {

// Viscosity constant κ > 0 of the penalty κ^2 y^2.
class Kappa {
 public:
  constexpr Kappa() = default;
  explicit Kappa(double value);
  constexpr double value() const noexcept { return value_; }

 private:
  double value_ = 1.0;
};

enum class Method { bvp, closed_form, stationary, karhunen_loeve };

const char* to_string(Method m) noexcept;

struct ApproximationResult {
  Grid grid;
  std::vector<double> f;
  std::vector<double> f_prime;
  Method method;
  double kappa;

  // Restriction to [a, b]; both must be grid points.
  ApproximationResult restrict(double a, double b) const;
};

// Second-order central differences with ghost-point Neumann closure,
// solved by one tridiagonal sweep. The discrete solution is also the exact
// minimizer of discrete_energy() below. Requires n >= 3.
ApproximationResult solve_bvp(const SamplePath& path, Kappa kappa = {});

// Explicit solution formula evaluated with all exponentials in decaying
// form, so no intermediate exceeds O(1) and any horizon can be used. The
// path grid must start at 0. Integrals use the kernel-normalized trapezoid
// rule shared with the stationary filter.
ApproximationResult solve_closed_form(const SamplePath& path, Kappa kappa = {});

// K_T(s,t) = cosh(T-s)(e^t + e^-t) / (e^T - e^-T), 0 <= s,t <= T, evaluated as
// (e^{t-s}/2)(1 + e^{-2(T-s)})(1 + e^{-2t}) / (1 - e^{-2T}).
double kernel_KT(double s, double t, double horizon);

// Σ (f_{i+1}-f_i)^2/Δ + κ^2 · trapezoid((f-B)^2): the energy whose exact
// minimizer is solve_bvp's output.
double discrete_energy(std::span<const double> f, const SamplePath& path, Kappa kappa = {});

// Solves the tridiagonal system a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i
// (Thomas algorithm). a[0] and c[n-1] are ignored. Throws on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d);

// Central differences inside, second-order one-sided at both ends.
std::vector<double> central_derivative(std::span<const double> f, double h);

}  // namespace lea
