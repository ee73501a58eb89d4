#include "lea/stationary_filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernel_sums.hpp"

namespace lea {

ApproximationResult smooth(const SamplePath& path, Kappa kappa) {
  const double k = kappa.value();
  const double h = k * path.grid().step();
  const detail::ExpSums s = detail::exponential_sums(path.values(), h);
  const double c0 = 0.5 * detail::mass_normalization(h);
  const double c1 = 0.5 * k * detail::moment_normalization(h);

  const std::size_t n = path.size();
  std::vector<double> f(n), fp(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = c0 * (s.forward[i] + s.backward[i]);
    fp[i] = c1 * (s.backward[i] - s.forward[i]);
  }
  return ApproximationResult{path.grid(), std::move(f), std::move(fp), Method::stationary, k};
}

std::vector<double> smooth_derivative(const SamplePath& path, Kappa kappa) {
  return smooth(path, kappa).f_prime;
}

Interval bulk_region(const Grid& grid, Kappa kappa) {
  const double margin = 3.0 / kappa.value();
  return Interval{grid.start() + margin, grid.end() - margin};
}

ClosenessReport closeness_report(const ApproximationResult& f_T, const ApproximationResult& f_hat,
                                 double growth_p, double growth_C) {
  if (!f_T.grid.same_as(f_hat.grid)) {
    throw std::invalid_argument("closeness_report: results live on different grids");
  }
  if (std::abs(f_T.grid.start()) > 1e-9 * f_T.grid.step()) {
    throw std::invalid_argument("closeness_report: grid must start at 0");
  }
  if (!(growth_C > 0.0)) throw std::invalid_argument("closeness_report: growth_C must be positive");

  const Grid& g = f_T.grid;
  const double k = f_T.kappa;
  const double horizon = g.end();
  const double scale = std::pow(horizon + 1.0, growth_p);
  const std::size_t n = g.size();

  ClosenessReport r;
  r.ratio.resize(n);
  r.ratio_derivative.resize(n);
  std::vector<double> sq(n), sq_d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = g[i];
    const double envelope =
        scale * (std::exp(-k * t) + std::exp(-k * horizon) + std::exp(-k * (horizon - t)));
    const double gap = std::abs(f_T.f[i] - f_hat.f[i]);
    const double gap_d = std::abs(f_T.f_prime[i] - f_hat.f_prime[i]);
    r.ratio[i] = gap / envelope;
    r.ratio_derivative[i] = gap_d / envelope;
    sq[i] = gap * gap;
    sq_d[i] = gap_d * gap_d;
  }
  r.max_ratio = *std::max_element(r.ratio.begin(), r.ratio.end());
  r.max_ratio_derivative = *std::max_element(r.ratio_derivative.begin(), r.ratio_derivative.end());
  r.max_ratio_over_C = std::max(r.max_ratio, r.max_ratio_derivative) / growth_C;
  r.l2_gap = std::sqrt(trapezoid(sq, g.step()));
  r.l2_gap_derivative = std::sqrt(trapezoid(sq_d, g.step()));
  return r;
}

}  // namespace lea
