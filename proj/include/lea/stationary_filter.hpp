#pragma once

// Stationary approximation of the least-energy path:
//
//   f̂(t)  = (κ/2) ∫ e^{-κ|s-t|} B(s) ds
//   f̂'(t) = (κ²/2) ∫ sgn(s-t) e^{-κ|s-t|} B(s) ds
//
// computed in O(n) with one forward and one backward exponential recursion.
// The integrals only see the grid the caller supplies, so the caller decides
// how B is extended beyond [0, T] (see extend_by_zero / two_sided). Values
// within 3/κ of either grid end carry edge effects above e^{-3}.

#include <span>
#include <vector>

#include "lea/exact_solver.hpp"
#include "lea/grid.hpp"

namespace lea {

// Trapezoid weights inside the recursion; the discrete kernel is normalized
// to unit mass (f̂) and unit first moment (f̂'), so constants and linear
// functions pass through exactly away from the edges.
ApproximationResult smooth(const SamplePath& path, Kappa kappa = {});

std::vector<double> smooth_derivative(const SamplePath& path, Kappa kappa = {});

// [start + 3/κ, end - 3/κ]; empty (lo > hi) on short grids.
Interval bulk_region(const Grid& grid, Kappa kappa = {});

// Distance of a finite-horizon solution f_T from the stationary approximation,
// normalized by the envelope (T+1)^p (e^{-κt} + e^{-κT} + e^{-κ(T-t)}).
struct ClosenessReport {
  std::vector<double> ratio;             // |f_T - f̂| / envelope
  std::vector<double> ratio_derivative;  // |f_T' - f̂'| / envelope
  double max_ratio = 0.0;
  double max_ratio_derivative = 0.0;
  double max_ratio_over_C = 0.0;  // max(max_ratio, max_ratio_derivative) / growth_C
  double l2_gap = 0.0;            // ||f_T - f̂||_{2,T}
  double l2_gap_derivative = 0.0;
};

// Both results must live on the same grid starting at 0. growth_p and growth_C
// describe the caller's growth assumption |B(s)| <= C (|s|+1)^p.
ClosenessReport closeness_report(const ApproximationResult& f_T, const ApproximationResult& f_hat,
                                 double growth_p, double growth_C);

}  // namespace lea
