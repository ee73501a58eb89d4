#include "lea/energy_constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lea/quadrature.hpp"

namespace lea {

namespace {

constexpr QuadratureOptions kSpectralQuad{1e-11, 1e-15, 4000};

// ∫_{ℝ∖{0}} weight(u) μ_B(du) for an even weight.
double spectral_integral(const SpectralModel& model, const std::function<double(double)>& weight,
                         const char* what) {
  double total = 0.0;
  if (model.density) {
    auto integrand = [&](double u) {
      const double w = weight(u);
      if (w == 0.0) return 0.0;
      return w * model.density(u);
    };
    QuadratureResult q = integrate_half_line(integrand, kSpectralQuad);
    if (!q.converged || !std::isfinite(q.value)) {
      throw InfiniteConstant(std::string("𝒞 infinite: ") + what +
                             " integral does not converge (estimate " + std::to_string(q.value) +
                             ", error " + std::to_string(q.abs_error) + ")");
    }
    total += 2.0 * q.value;
  }
  for (const auto& a : model.atoms) total += a.mass * weight(std::abs(a.u));
  return total;
}

// u²/(1+u²) and friends, written so that huge or tiny u cannot overflow.
double w_constant(double u) { return 1.0 / (1.0 + 1.0 / (u * u)); }
double w_potential(double u) {
  const double q = w_constant(u);
  return q * q;
}
double w_kinetic(double u) {
  const double q = 1.0 / (1.0 / u + u);
  return q * q;
}

}  // namespace

EnergyBreakdown energy(const ApproximationResult& result, const SamplePath& path,
                       std::optional<Interval> sub) {
  if (!result.grid.same_as(path.grid()) || result.f.size() != path.size() ||
      result.f_prime.size() != path.size()) {
    throw std::invalid_argument("energy: approximation and path grids differ");
  }
  const Grid& g = path.grid();
  const Interval span = sub.value_or(Interval{g.start(), g.end()});
  const std::size_t i = g.require_index(span.lo);
  const std::size_t j = g.require_index(span.hi);
  if (j <= i) throw std::invalid_argument("energy: empty sub-interval");

  const double k2 = result.kappa * result.kappa;
  std::vector<double> pot(j - i + 1), kin(j - i + 1);
  for (std::size_t m = i; m <= j; ++m) {
    const double e = result.f[m] - path[m];
    pot[m - i] = e * e;
    kin[m - i] = result.f_prime[m] * result.f_prime[m];
  }
  EnergyBreakdown out;
  out.potential = k2 * trapezoid(pot, g.step());
  if (result.method == Method::bvp) {
    // Exact ∫ f'² of the piecewise-linear interpolant. With the trapezoid
    // potential this is the discrete energy the solver minimizes, which is
    // never below the continuous minimum for a piecewise-linear path.
    double kin_sum = 0.0;
    for (std::size_t m = i; m < j; ++m) {
      const double d = result.f[m + 1] - result.f[m];
      kin_sum += d * d;
    }
    out.kinetic = kin_sum / g.step();
  } else {
    out.kinetic = trapezoid(kin, g.step());
  }
  out.total = out.potential + out.kinetic;
  out.rate = out.total / (g[j] - g[i]);
  return out;
}

double fbm_spectral_constant(double hurst) {
  return std::tgamma(2.0 * hurst + 1.0) * std::sin(std::numbers::pi * hurst) /
         (2.0 * std::numbers::pi);
}

SpectralModel SpectralModel::wiener(double variance) {
  SpectralModel m;
  m.density = [variance](double u) { return variance / (2.0 * std::numbers::pi * u * u); };
  return m;
}

SpectralModel SpectralModel::fbm(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::invalid_argument("fBm requires 0 < H < 1, got H = " + std::to_string(hurst));
  }
  SpectralModel m;
  const double mh = fbm_spectral_constant(hurst);
  const double power = 2.0 * hurst + 1.0;
  m.density = [mh, power](double u) { return mh * std::pow(u, -power); };
  return m;
}

SpectralModel SpectralModel::levy(double mean_b1, double var_b1) {
  if (!(var_b1 >= 0.0)) throw std::invalid_argument("Levy model needs Var B(1) >= 0");
  SpectralModel m = var_b1 > 0.0 ? wiener(var_b1) : SpectralModel{};
  m.drift_second_moment = mean_b1 * mean_b1;
  m.drift_mean_sq = mean_b1 * mean_b1;
  return m;
}

SpectralModel SpectralModel::drift(double slope) {
  SpectralModel m;
  m.drift_second_moment = slope * slope;
  m.drift_mean_sq = slope * slope;
  return m;
}

SpectralModel SpectralModel::cosine(double omega, double amplitude) {
  SpectralModel m;
  const double mass = 0.25 * amplitude * amplitude;
  m.atoms = {{omega, mass}, {-omega, mass}};
  return m;
}

void validate(const SpectralModel& model) {
  if (!(model.drift_second_moment >= 0.0) || !(model.drift_mean_sq >= 0.0) ||
      model.drift_mean_sq > model.drift_second_moment * (1.0 + 1e-12)) {
    throw std::invalid_argument("spectral model: need 0 <= (E D0)^2 <= E|D0|^2");
  }
  for (const auto& a : model.atoms) {
    if (!(a.mass >= 0.0) || !std::isfinite(a.u) || a.u == 0.0) {
      throw std::invalid_argument("spectral model: atoms need u != 0 and nonnegative mass");
    }
  }
  if (model.density) {
    auto levy_weight = [](double u) { return std::min(u * u, 1.0); };
    QuadratureResult q = integrate_half_line(
        [&](double u) { return levy_weight(u) * model.density(u); }, kSpectralQuad);
    if (!q.converged || !std::isfinite(q.value)) {
      throw InfiniteConstant("spectral model violates Levy integrability: ∫ min(u², 1) μ(du) "
                             "does not converge");
    }
  }
}

VarianceFunction VarianceFunction::wiener(double variance) {
  return VarianceFunction{[variance](double s) { return variance * s; }, 0.0};
}

VarianceFunction VarianceFunction::fbm(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::invalid_argument("fBm requires 0 < H < 1, got H = " + std::to_string(hurst));
  }
  const double p = 2.0 * hurst;
  return VarianceFunction{[p](double s) { return std::pow(s, p); }, 0.0};
}

VarianceFunction VarianceFunction::levy(double mean_b1, double var_b1) {
  return VarianceFunction{[var_b1](double s) { return var_b1 * s; }, mean_b1};
}

double constant_spectral(const SpectralModel& model) {
  validate(model);
  return model.drift_second_moment + spectral_integral(model, w_constant, "spectral");
}

double constant_fbm(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::invalid_argument("fBm requires 0 < H < 1, got H = " + std::to_string(hurst));
  }
  return 0.5 * std::tgamma(2.0 * hurst + 1.0);
}

double constant_levy(double mean_b1, double var_b1) {
  if (!(var_b1 >= 0.0)) throw std::invalid_argument("constant_levy: Var B(1) must be >= 0");
  return mean_b1 * mean_b1 + 0.5 * var_b1;
}

double constant_nonspectral(const VarianceFunction& vf) {
  constexpr double kCut = 60.0;
  if (!vf.variance) throw std::invalid_argument("constant_nonspectral: missing variance function");
  if (std::abs(vf.variance(0.0)) > 1e-12) {
    throw std::invalid_argument("constant_nonspectral: Var B(0) must be 0");
  }
  bool negative = false;
  auto integrand = [&](double s) {
    const double v = vf.variance(s);
    if (v < 0.0) negative = true;
    return v * std::exp(-s);
  };
  QuadratureResult q = integrate(integrand, 0.0, kCut, {1e-12, 1e-15, 4000});
  if (negative) throw std::invalid_argument("constant_nonspectral: negative variance");

  // Stationary increments bound the variance growth by A(s² + 1); faster
  // growth means the representation (and 𝒞) is infinite.
  const double v_cut = vf.variance(kCut);
  const double v_far = vf.variance(2.0 * kCut);
  if (!q.converged || !std::isfinite(q.value) || !std::isfinite(v_far) ||
      v_far > 4.0 * v_cut * (1.0 + 1e-9) + 1e-12) {
    throw InfiniteConstant("𝒞 infinite: ∫ Var B(s) e^{-s} ds does not converge");
  }
  // Tail beyond the cut under v(s) <= v(cut) (s/cut)²:
  // v(cut)/cut² ∫_cut^∞ s² e^{-s} ds = v(cut) e^{-cut} (cut² + 2 cut + 2) / cut².
  const double tail = v_cut * std::exp(-kCut) * (kCut * kCut + 2.0 * kCut + 2.0) / (kCut * kCut);
  if (tail > 1e-10 * std::max(std::abs(q.value), 1.0)) {
    throw InfiniteConstant("𝒞 infinite: variance tail beyond s = 60 is not negligible");
  }
  return vf.drift_mean * vf.drift_mean + 0.5 * q.value;
}

double constant_viscous(const SpectralModel& model, Kappa kappa) {
  validate(model);
  const double k2 = kappa.value() * kappa.value();
  auto weight = [k2](double u) { return k2 / (1.0 + k2 / (u * u)); };
  return model.drift_second_moment + spectral_integral(model, weight, "viscous");
}

DeviationMoments stationary_deviation_moments(const SpectralModel& model) {
  validate(model);
  DeviationMoments d;
  d.potential = spectral_integral(model, w_potential, "potential deviation");
  d.kinetic = model.drift_second_moment + spectral_integral(model, w_kinetic, "kinetic deviation");
  return d;
}

}  // namespace lea
