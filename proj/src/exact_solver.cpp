#include "lea/exact_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kernel_sums.hpp"

namespace lea {

Kappa::Kappa(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("kappa must be positive and finite, got " + std::to_string(value));
  }
}

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::bvp: return "bvp";
    case Method::closed_form: return "closed_form";
    case Method::stationary: return "stationary";
    case Method::karhunen_loeve: return "karhunen_loeve";
  }
  return "?";
}

ApproximationResult ApproximationResult::restrict(double a, double b) const {
  const std::size_t i = grid.require_index(a);
  const std::size_t j = grid.require_index(b);
  const auto first = static_cast<std::ptrdiff_t>(i);
  const auto last = static_cast<std::ptrdiff_t>(j) + 1;
  return ApproximationResult{grid.slice(i, j),
                             std::vector<double>(f.begin() + first, f.begin() + last),
                             std::vector<double>(f_prime.begin() + first, f_prime.begin() + last),
                             method, kappa};
}

std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n || n == 0) {
    throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
  }
  std::vector<double> cp(n), dp(n), x(n);
  double pivot = b[0];
  if (pivot == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot at row 0");
  cp[0] = c[0] / pivot;
  dp[0] = d[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = b[i] - a[i] * cp[i - 1];
    if (pivot == 0.0) {
      throw std::runtime_error("solve_tridiagonal: zero pivot at row " + std::to_string(i));
    }
    cp[i] = (i + 1 < n) ? c[i] / pivot : 0.0;
    dp[i] = (d[i] - a[i] * dp[i - 1]) / pivot;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
  return x;
}

std::vector<double> central_derivative(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / h;
    return d;
  }
  const double inv2h = 0.5 / h;
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2h;
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
  return d;
}

ApproximationResult solve_bvp(const SamplePath& path, Kappa kappa) {
  const std::size_t n = path.size();
  if (n < 3) {
    throw std::invalid_argument("solve_bvp: need at least 3 grid points, got " + std::to_string(n));
  }
  const double h = path.grid().step();
  const double eps = kappa.value() * kappa.value() * h * h;

  // -f_{i-1} + (2+κ²Δ²) f_i - f_{i+1} = κ²Δ² B_i, ghost points f_{-1} = f_1,
  // f_n = f_{n-2}.
  std::vector<double> a(n, -1.0), b(n, 2.0 + eps), c(n, -1.0), d(n);
  c[0] = -2.0;
  a[n - 1] = -2.0;
  for (std::size_t i = 0; i < n; ++i) d[i] = eps * path[i];

  std::vector<double> f = solve_tridiagonal(a, b, c, d);
  std::vector<double> fp = central_derivative(f, h);
  return ApproximationResult{path.grid(), std::move(f), std::move(fp), Method::bvp, kappa.value()};
}

ApproximationResult solve_closed_form(const SamplePath& path, Kappa kappa) {
  const Grid& g = path.grid();
  if (std::abs(g.start()) > 1e-9 * g.step()) {
    throw std::invalid_argument("solve_closed_form: grid must start at 0, starts at " +
                                std::to_string(g.start()));
  }
  const std::size_t n = path.size();
  const double k = kappa.value();
  // Time change τ = κ t reduces the problem to κ = 1 with step κΔ.
  const double h = k * g.step();
  const double horizon = h * static_cast<double>(n - 1);

  const detail::ExpSums sums = detail::exponential_sums(path.values(), h);
  const double nu0 = detail::mass_normalization(h);
  const double nu1 = detail::moment_normalization(h);

  const double fwd_end = sums.forward[n - 1];   // ∫_0^T B(s) e^{-(T-s)} ds
  const double bwd_start = sums.backward[0];    // ∫_0^T B(s) e^{-s} ds
  const double denom = -std::expm1(-2.0 * horizon);

  std::vector<double> f(n), fp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = h * static_cast<double>(i);
    const double e_right = std::exp(t - horizon);   // e^{-(T-t)}
    const double e_left = std::exp(-t);             // e^{-t}
    const double e_far = std::exp(-horizon);        // e^{-T}
    const double a = (e_right * e_far * bwd_start) / denom;  // e^{t-2T} ∫B e^{-s}
    const double b = (e_left * bwd_start) / denom;
    const double c_plus = (e_right + e_left * e_far) * fwd_end / denom;
    const double c_minus = (e_right - e_left * e_far) * fwd_end / denom;
    f[i] = 0.5 * nu0 * (sums.forward[i] + sums.backward[i] + a + b + c_plus);
    fp[i] = 0.5 * k * nu1 * (sums.backward[i] - sums.forward[i] + a - b + c_minus);
  }
  return ApproximationResult{g, std::move(f), std::move(fp), Method::closed_form, k};
}

double kernel_KT(double s, double t, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("kernel_KT: horizon must be positive");
  if (s < 0.0 || s > horizon || t < 0.0 || t > horizon) {
    throw std::invalid_argument("kernel_KT: arguments must lie in [0, T]");
  }
  const double lead = 0.5 * std::exp(t - s);
  const double h1 = std::exp(-2.0 * (horizon - s));
  const double h2 = std::exp(-2.0 * t);
  return lead * (1.0 + h1) * (1.0 + h2) / -std::expm1(-2.0 * horizon);
}

double discrete_energy(std::span<const double> f, const SamplePath& path, Kappa kappa) {
  if (f.size() != path.size()) throw std::invalid_argument("discrete_energy: size mismatch");
  const double h = path.grid().step();
  double kinetic = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double d = f[i + 1] - f[i];
    kinetic += d * d;
  }
  std::vector<double> r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double e = f[i] - path[i];
    r[i] = e * e;
  }
  return kinetic / h + kappa.value() * kappa.value() * trapezoid(r, h);
}

}  // namespace lea
