#pragma once

// Energy of an approximation and the long-run energy rate constant
//
//   𝒞 = E|D₀|² + ∫ u²/(1+u²) μ_B(du)
//
// for processes with stationary increments, computed by several independent
// routes: spectral quadrature, closed forms (fBm, Lévy), and the variance
// representation (E D₀)² + ½ ∫₀^∞ Var B(s) e^{-s} ds.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lea/exact_solver.hpp"
#include "lea/grid.hpp"

namespace lea {

struct EnergyBreakdown {
  double potential = 0.0;  // κ² ∫ (f - B)²
  double kinetic = 0.0;    // ∫ f'²
  double total = 0.0;
  double rate = 0.0;       // total / interval length
};

// Trapezoid quadrature over `sub` (defaults to the whole grid). The grids of
// result and path must match and the ends of `sub` must be grid points.
// For bvp results the kinetic term is Σ (f_{i+1} - f_i)² / Δ, the exact
// value for the piecewise-linear interpolant, since that solver has no
// analytic derivative; other methods integrate f_prime² by the trapezoid rule.
EnergyBreakdown energy(const ApproximationResult& result, const SamplePath& path,
                       std::optional<Interval> sub = std::nullopt);

// Raised when the integral defining 𝒞 (or the Lévy integrability check)
// does not converge.
class InfiniteConstant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectralAtom {
  double u;
  double mass;
};

// Spectral description of B(t) = D₀ t + ∫ (e^{itu} - 1) X(du). The density is
// given on u > 0 and extended evenly; atoms are listed explicitly (both ±u).
struct SpectralModel {
  double drift_second_moment = 0.0;  // E|D₀|²
  double drift_mean_sq = 0.0;        // (E D₀)²
  std::function<double(double)> density;
  std::vector<SpectralAtom> atoms;

  static SpectralModel wiener(double variance = 1.0);
  // M_H / |u|^{2H+1}, M_H = Γ(2H+1) sin(πH) / (2π)
  static SpectralModel fbm(double hurst);
  // Lévy process with finite second moments: Wiener-like density scaled by
  // Var B(1), deterministic drift E B(1).
  static SpectralModel levy(double mean_b1, double var_b1);
  static SpectralModel drift(double slope);
  // A cos(ωt): atoms of mass A²/4 at ±ω.
  static SpectralModel cosine(double omega, double amplitude);
};

double fbm_spectral_constant(double hurst);  // M_H

// Checks moment consistency and ∫ min(u², 1) μ_B(du) < ∞.
void validate(const SpectralModel& model);

// Var B(s) for s >= 0 together with E D₀.
struct VarianceFunction {
  std::function<double(double)> variance;
  double drift_mean = 0.0;

  static VarianceFunction wiener(double variance = 1.0);
  static VarianceFunction fbm(double hurst);
  static VarianceFunction levy(double mean_b1, double var_b1);
};

double constant_spectral(const SpectralModel& model);
double constant_fbm(double hurst);
double constant_levy(double mean_b1, double var_b1);
double constant_nonspectral(const VarianceFunction& vf);

// 𝒞_κ = E|D₀|² + ∫ κ²u²/(κ²+u²) μ_B(du)
double constant_viscous(const SpectralModel& model, Kappa kappa);

// E|f̂(t) - B(t)|² and E|f̂'(t)|²; they sum to constant_spectral(model).
struct DeviationMoments {
  double potential = 0.0;
  double kinetic = 0.0;
};
DeviationMoments stationary_deviation_moments(const SpectralModel& model);

}  // namespace lea
