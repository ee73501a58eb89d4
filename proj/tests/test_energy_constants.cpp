#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lea/energy_constants.hpp"
#include "lea/path_models.hpp"

using namespace lea;

TEST_CASE("Wiener constant is one half on every route") {
  CHECK(constant_spectral(SpectralModel::wiener()) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(constant_nonspectral(VarianceFunction::wiener()) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(constant_fbm(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(constant_levy(0.0, 1.0) == 0.5);
}

TEST_CASE("fBm closed form against gamma values") {
  // Γ(1.5)/2 = √π/4 and Γ(2.5)/2 = 3√π/8.
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  CHECK(constant_fbm(0.25) == doctest::Approx(sqrt_pi / 4).epsilon(1e-14));
  CHECK(constant_fbm(0.25) == doctest::Approx(0.4431134627).epsilon(1e-10));
  CHECK(constant_fbm(0.75) == doctest::Approx(3 * sqrt_pi / 8).epsilon(1e-14));
  CHECK(constant_fbm(0.75) == doctest::Approx(0.6646701941).epsilon(1e-10));
  CHECK(fbm_spectral_constant(0.5) == doctest::Approx(1.0 / (2 * std::numbers::pi)));
}

TEST_CASE("routes agree across Hurst indices") {
  for (int k = 1; k <= 9; ++k) {
    const double H = 0.1 * k;
    INFO("H = " << H);
    const double closed = constant_fbm(H);
    CHECK(std::abs(constant_spectral(SpectralModel::fbm(H)) - closed) < 1e-8);
    CHECK(std::abs(constant_nonspectral(VarianceFunction::fbm(H)) - closed) < 1e-8);
  }
}

TEST_CASE("Levy routes") {
  for (auto [m, v] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.7, 2.0}, {-1.5, 0.3}}) {
    const double c = constant_levy(m, v);
    CHECK(c == doctest::Approx(m * m + v / 2));
    CHECK(constant_spectral(SpectralModel::levy(m, v)) == doctest::Approx(c).epsilon(1e-9));
    CHECK(constant_nonspectral(VarianceFunction::levy(m, v)) == doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("deterministic models") {
  CHECK(constant_spectral(SpectralModel::drift(1.0)) == 1.0);
  // A cos ωt: A²/2 · ω²/(1+ω²).
  CHECK(constant_spectral(SpectralModel::cosine(2.0, 3.0)) == doctest::Approx(4.5 * 0.8));
}

TEST_CASE("viscous constant") {
  double previous = 0.0;
  for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double c = constant_viscous(SpectralModel::wiener(), Kappa{k});
    CHECK(c == doctest::Approx(k / 2).epsilon(1e-9));
    CHECK(c > previous);
    previous = c;
    const double H = 0.3;
    CHECK(constant_viscous(SpectralModel::fbm(H), Kappa{k}) ==
          doctest::Approx(std::pow(k, 2 - 2 * H) * constant_fbm(H)).epsilon(1e-8));
  }
  CHECK(constant_viscous(SpectralModel::fbm(0.7), Kappa{1.0}) ==
        doctest::Approx(constant_fbm(0.7)).epsilon(1e-9));
}

TEST_CASE("deviation moments sum to the constant") {
  for (double H : {0.2, 0.5, 0.8}) {
    const DeviationMoments d = stationary_deviation_moments(SpectralModel::fbm(H));
    CHECK(d.potential + d.kinetic == doctest::Approx(constant_fbm(H)).epsilon(1e-9));
  }
  // Wiener: both halves equal 1/4.
  const DeviationMoments w = stationary_deviation_moments(SpectralModel::wiener());
  CHECK(w.potential == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(w.kinetic == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("infinite constants are detected") {
  SpectralModel heavy;
  heavy.density = [](double u) { return 1.0 / u; };
  CHECK_THROWS_AS(constant_spectral(heavy), InfiniteConstant);

  SpectralModel singular;
  singular.density = [](double u) { return 1.0 / (u * u * u); };
  CHECK_THROWS_AS(validate(singular), InfiniteConstant);

  VarianceFunction fast{[](double s) { return std::expm1(s); }, 0.0};
  CHECK_THROWS_AS(constant_nonspectral(fast), InfiniteConstant);

  CHECK_THROWS_AS(SpectralModel::fbm(1.0), std::invalid_argument);
  SpectralModel bad;
  bad.drift_second_moment = 1.0;
  bad.drift_mean_sq = 2.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("energy is additive over sub-intervals") {
  const SamplePath p = simulate(Wiener{}, Grid::spanning(0.0, 10.0, 0.01), Seed{3});
  const ApproximationResult r = solve_bvp(p, Kappa{1.5});
  const EnergyBreakdown all = energy(r, p);
  const EnergyBreakdown a = energy(r, p, Interval{0.0, 3.7});
  const EnergyBreakdown b = energy(r, p, Interval{3.7, 10.0});
  CHECK(a.total + b.total == doctest::Approx(all.total).epsilon(1e-13));
  CHECK(all.total == doctest::Approx(all.potential + all.kinetic));
  CHECK(all.rate == doctest::Approx(all.total / 10.0));
  CHECK_THROWS(energy(r, p, Interval{3.705, 5.0}));
  CHECK_THROWS(energy(r, p, Interval{5.0, 5.0}));
}

TEST_CASE("energy of the linear-drift solution") {
  // ℰ_T = T - 2 tanh(T/2) for B = t, κ = 1.
  for (double T : {2.0, 10.0}) {
    const Grid g = Grid::spanning(0.0, T, 0.001);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = g[i];
    const SamplePath p(g, v);
    CHECK(energy(solve_bvp(p), p).total == doctest::Approx(T - 2 * std::tanh(T / 2)).epsilon(1e-6));
  }
}

TEST_CASE("energy of simple pairs") {
  const Grid g = Grid::spanning(0.0, 1.0, 0.01);
  const SamplePath ones(g, std::vector<double>(g.size(), 1.0));
  const std::vector<double> zeros(g.size(), 0.0);
  for (Method m : {Method::bvp, Method::closed_form}) {
    const EnergyBreakdown e = energy(ApproximationResult{g, zeros, zeros, m, 1.0}, ones);
    CHECK(e.potential == doctest::Approx(1.0));
    CHECK(e.kinetic == 0.0);
    const EnergyBreakdown same = energy(ApproximationResult{g, std::vector<double>(g.size(), 1.0), zeros, m, 1.0}, ones);
    CHECK(same.total == 0.0);
  }
  const SamplePath other(Grid::spanning(0.0, 2.0, 0.01), std::vector<double>(201, 0.0));
  CHECK_THROWS(energy(ApproximationResult{g, zeros, zeros, Method::bvp, 1.0}, other));
}
