#include "lea/kl_wiener.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lea {

namespace {

constexpr double kPi = std::numbers::pi;

double frequency(std::size_t j) noexcept { return (static_cast<double>(j) - 0.5) * kPi; }

// Calls fn(i, sin(a t_i), cos(a t_i)) along the grid using a rotation
// recurrence, re-seeded from std::sin/std::cos every kResync steps.
template <class Fn>
void for_each_phase(double a, const Grid& g, Fn&& fn) {
  constexpr std::size_t kResync = 512;
  const double c1 = std::cos(a * g.step());
  const double s1 = std::sin(a * g.step());
  double s = 0.0, c = 1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i % kResync == 0) {
      s = std::sin(a * g[i]);
      c = std::cos(a * g[i]);
    }
    fn(i, s, c);
    const double sn = s * c1 + c * s1;
    c = c * c1 - s * s1;
    s = sn;
  }
}

}  // namespace

KLBasis::KLBasis(std::size_t order) : order_(order) {
  if (order == 0) throw std::invalid_argument("KL basis order must be >= 1");
}

double KLBasis::gamma(std::size_t j) noexcept {
  const double a = frequency(j);
  return 1.0 / (a * a);
}

double KLBasis::eigenfunction(std::size_t j, double t) noexcept {
  return std::numbers::sqrt2 * std::sin(frequency(j) * t);
}

double KLBasis::eigenfunction_derivative(std::size_t j, double t) noexcept {
  const double a = frequency(j);
  return std::numbers::sqrt2 * a * std::cos(a * t);
}

double KLBasis::partial_sum_two_gamma() const noexcept {
  CompensatedSum s;
  for (std::size_t j = order_; j >= 1; --j) s.add(2.0 * gamma(j));
  return s.value();
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

CompensatedSum& CompensatedSum::operator+=(const CompensatedSum& o) noexcept {
  add(o.sum_);
  add(o.comp_);
  return *this;
}

KLExpectedEnergy kl_expected_energy(double horizon, std::size_t order, std::size_t chunks) {
  if (!(horizon > 0.0)) throw std::invalid_argument("kl_expected_energy: T must be positive");
  if (order == 0) throw std::invalid_argument("kl_expected_energy: J must be >= 1");
  chunks = std::clamp<std::size_t>(chunks, 1, order);
  const double t2 = horizon * horizon;

  CompensatedSum sigma, a2;
  const std::size_t block = (order + chunks - 1) / chunks;
  for (std::size_t c = 0; c < chunks; ++c) {
    // Blocks run from high j to low j so small terms are added first.
    const std::size_t hi = order - c * block;
    const std::size_t lo = hi > block ? hi - block + 1 : 1;
    CompensatedSum ls, la;
    for (std::size_t j = hi; j >= lo && j >= 1; --j) {
      const double g = KLBasis::gamma(j);
      const double x = t2 * g;
      ls.add(x / (x + 1.0));
      const double q = g / (x + 1.0);
      la.add(2.0 * q * q);
      if (j == lo) break;
    }
    sigma += ls;
    a2 += la;
    if (lo == 1) break;
  }

  KLExpectedEnergy r;
  r.sigma = sigma.value();
  r.expected_a2 = a2.value();
  // D(T) = Σ 2γ_j/(1 + 1/(T²γ_j)) - 1 = -(2/T²) Σ_T by Σ 2γ_j = 1; the second
  // form avoids cancelling two numbers close to 1.
  r.denominator = -2.0 * r.sigma / t2;
  r.expected_s2 = r.expected_a2 / (r.denominator * r.denominator);
  r.expected_energy = (1.0 - 2.0 * r.expected_s2) * r.sigma;

  const double jh = static_cast<double>(order) - 0.5;
  r.sigma_tail_bound = t2 / (kPi * kPi * jh);
  r.a2_tail_bound = 2.0 / (3.0 * std::pow(kPi, 4) * jh * jh * jh);
  return r;
}

std::size_t kl_auto_order(double horizon, double rel_tail) {
  if (!(horizon > 0.0) || !(rel_tail > 0.0)) {
    throw std::invalid_argument("kl_auto_order: T and tolerance must be positive");
  }
  // Σ_T ≈ T/2 and E|A|² ≈ 1/(2T³) bound the denominators from below only
  // asymptotically, so verify the guess and grow it if needed.
  auto guess = static_cast<std::size_t>(
      std::ceil(horizon * horizon / (kPi * kPi * rel_tail * 0.5 * std::max(horizon, 1e-3)))) + 1;
  for (int it = 0; it < 64; ++it) {
    const KLExpectedEnergy e = kl_expected_energy(horizon, guess, 1);
    if (e.sigma_tail_bound <= rel_tail * e.sigma && e.a2_tail_bound <= rel_tail * e.expected_a2) {
      return guess;
    }
    guess *= 2;
  }
  throw std::runtime_error("kl_auto_order: no truncation order found");
}

std::vector<double> kl_coefficients(double s, std::span<const double> w, double t_penalty) {
  const double t2 = t_penalty * t_penalty;
  std::vector<double> f(w.size());
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const double g = KLBasis::gamma(idx + 1);
    f[idx] = t2 * (s * std::sqrt(2.0 * g) + w[idx]) / (t2 + 1.0 / g);
  }
  return f;
}

double kl_energy_direct(double s, std::span<const double> w, std::span<const double> f,
                        double t_penalty) {
  if (w.size() != f.size()) throw std::invalid_argument("kl_energy_direct: size mismatch");
  const double t2 = t_penalty * t_penalty;
  CompensatedSum sum;
  sum.add(-t2 * s * s);
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const double g = KLBasis::gamma(idx + 1);
    sum.add((t2 + 1.0 / g) * f[idx] * f[idx] - 2.0 * t2 * f[idx] * w[idx] + t2 * w[idx] * w[idx]);
  }
  return sum.value();
}

double kl_energy_reduced(double s, std::span<const double> w, double t_penalty) {
  const double t2 = t_penalty * t_penalty;
  CompensatedSum sum;
  sum.add(-t2 * s * s);
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const double g = KLBasis::gamma(idx + 1);
    const double den = t2 + 1.0 / g;
    sum.add(2.0 * t2 * t2 * g / den * s * s);
    sum.add((t2 - t2 * t2 / den) * w[idx] * w[idx]);
  }
  return sum.value();
}

KLSolution kl_solve(const SamplePath& path, double t_penalty, std::size_t order) {
  const Grid& g = path.grid();
  if (std::abs(g.start()) > 1e-9 || std::abs(g.end() - 1.0) > 1e-9) {
    throw std::invalid_argument("kl_solve: path must live on [0, 1]");
  }
  if (!(t_penalty > 0.0)) throw std::invalid_argument("kl_solve: T must be positive");
  if (order == 0) throw std::invalid_argument("kl_solve: J must be >= 1");

  const std::size_t n = g.size();
  const double h = g.step();
  const double t2 = t_penalty * t_penalty;

  KLSolution out{ApproximationResult{g, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                                     Method::karhunen_loeve, t_penalty},
                 std::vector<double>(order), {}, 0.0, 0.0, 0.0, 0.0, false};

  // Projections w_j = ∫ B e_j by the trapezoid rule.
  for (std::size_t j = 1; j <= order; ++j) {
    CompensatedSum acc;
    for_each_phase(frequency(j), g, [&](std::size_t i, double s, double) {
      const double wt = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      acc.add(wt * path[i] * s);
    });
    out.w[j - 1] = std::numbers::sqrt2 * h * acc.value();
  }

  // S = A / D on the truncated system; D_J = -(1 - Σ_J 2γ_j) - Σ_J 2γ_j/(T²γ_j+1).
  CompensatedSum a_sum, two_gamma, d_part;
  for (std::size_t j = order; j >= 1; --j) {
    const double gj = KLBasis::gamma(j);
    const double x = t2 * gj + 1.0;
    a_sum.add(out.w[j - 1] * std::sqrt(2.0 * gj) / x);
    two_gamma.add(2.0 * gj);
    d_part.add(2.0 * gj / x);
  }
  out.a = a_sum.value();
  out.d = -(1.0 - two_gamma.value()) - d_part.value();
  out.s = out.a / out.d;
  out.coeffs = kl_coefficients(out.s, out.w, t_penalty);

  std::vector<double>& f = out.result.f;
  std::vector<double>& fp = out.result.f_prime;
  std::fill(f.begin(), f.end(), -out.s);
  for (std::size_t j = 1; j <= order; ++j) {
    const double a = frequency(j);
    const double cf = out.coeffs[j - 1] * std::numbers::sqrt2;
    for_each_phase(a, g, [&](std::size_t i, double s, double c) {
      f[i] += cf * s;
      fp[i] += cf * a * c;
    });
  }

  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = path[i] * path[i];
  const double norm2 = trapezoid(sq, h);
  CompensatedSum captured;
  for (double wj : out.w) captured.add(wj * wj);
  out.tail_fraction = norm2 > 0.0 ? std::max(0.0, 1.0 - captured.value() / norm2) : 0.0;
  out.under_resolved = out.tail_fraction > 0.01;
  return out;
}

}  // namespace lea
