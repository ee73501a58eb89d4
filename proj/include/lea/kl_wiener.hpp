#pragma once

// Least-energy approximation of the Wiener process through its
// Karhunen–Loève expansion on [0, 1]:
//
//   γ_j = 1 / (π² (j - ½)²),   e_j(t) = √2 sin((j - ½) π t),   W = Σ w_j e_j.
//
// Rescaling [0, T] to [0, 1] turns the energy into
//   ℰ*(f) = ∫_0^1 T² (f - W)² + f'² dt
// whose minimizer is f = f(0) + Σ f_j e_j with f(0) = -S,
//   f_j = T² (S √(2γ_j) + w_j) / (T² + 1/γ_j),   S = A(T) / D(T).

#include <cstddef>
#include <span>
#include <vector>

#include "lea/exact_solver.hpp"
#include "lea/grid.hpp"

namespace lea {

class KLBasis {
 public:
  explicit KLBasis(std::size_t order);

  std::size_t order() const noexcept { return order_; }
  static double gamma(std::size_t j) noexcept;               // j >= 1
  static double eigenfunction(std::size_t j, double t) noexcept;
  static double eigenfunction_derivative(std::size_t j, double t) noexcept;
  // Σ_{j<=J} 2γ_j, increasing to 1.
  double partial_sum_two_gamma() const noexcept;

 private:
  std::size_t order_;
};

// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }
  CompensatedSum& operator+=(const CompensatedSum& o) noexcept;

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct KLExpectedEnergy {
  double expected_energy = 0.0;  // E ℰ_T = (1 - 2 E S²) Σ_T
  double sigma = 0.0;            // Σ_T = Σ_j 1 / (1 + 1/(T² γ_j))
  double expected_s2 = 0.0;      // E S² = E|A(T)|² / D(T)²
  double expected_a2 = 0.0;      // Σ_j 2γ_j² / (T²γ_j + 1)²
  double denominator = 0.0;      // D(T) = -(2/T²) Σ_T
  double sigma_tail_bound = 0.0;  // bound on the omitted part of Σ_T
  double a2_tail_bound = 0.0;     // bound on the omitted part of E|A|²
};

// Truncated series at order J. `chunks` splits the sums into independently
// accumulated blocks (for parallel evaluation); compensated summation keeps
// the result independent of the split to rounding.
KLExpectedEnergy kl_expected_energy(double horizon, std::size_t order, std::size_t chunks = 1);

// Smallest J whose analytic tails are below rel_tail times the series values.
std::size_t kl_auto_order(double horizon, double rel_tail = 1e-4);

struct KLSolution {
  ApproximationResult result;  // kappa = T_penalty, on the path grid
  std::vector<double> w;       // projections ⟨B, e_j⟩
  std::vector<double> coeffs;  // f_j
  double s = 0.0;              // S = A / D, f(0) = -S
  double a = 0.0;
  double d = 0.0;
  double tail_fraction = 0.0;  // 1 - Σ w_j² / ||B||²
  bool under_resolved = false;  // tail_fraction > 1%
};

// Path grid must be [0, 1]; projections use the trapezoid rule on that grid.
KLSolution kl_solve(const SamplePath& path, double t_penalty, std::size_t order);

// ℰ* in coordinates before eliminating the S·w_j cross terms:
//   -T² S² + Σ ((T² + 1/γ_j) f_j² - 2T² f_j w_j + T² w_j²).
double kl_energy_direct(double s, std::span<const double> w, std::span<const double> f,
                        double t_penalty);
// Same quantity after substituting f_j and cancelling the S·w_j terms:
//   -T² S² + Σ 2T⁴γ_j/(T² + 1/γ_j) S² + Σ (T² - T⁴/(T² + 1/γ_j)) w_j².
double kl_energy_reduced(double s, std::span<const double> w, double t_penalty);
// f_j for given S and w.
std::vector<double> kl_coefficients(double s, std::span<const double> w, double t_penalty);

}  // namespace lea
