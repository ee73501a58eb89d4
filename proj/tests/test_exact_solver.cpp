#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lea/exact_solver.hpp"
#include "lea/path_models.hpp"
#include "oracles.hpp"

using namespace lea;

namespace {

SamplePath from_function(double T, double dt, double (*fn)(double)) {
  const Grid g = Grid::spanning(0.0, T, dt);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g[i]);
  return SamplePath(g, std::move(v));
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// B = cos(ωt) with ωT a multiple of π: f = κ²/(κ²+ω²) cos(ωt) solves the
// Neumann problem exactly.
constexpr double kT = 5.0;
constexpr double kOmega = 2.0 * std::numbers::pi / kT * 2.0;
double cos_path(double t) { return std::cos(kOmega * t); }

}  // namespace

TEST_CASE("trivial inputs") {
  const Grid g = Grid::spanning(0.0, 3.0, 0.01);
  const SamplePath zero(g, std::vector<double>(g.size(), 0.0));
  const SamplePath cst(g, std::vector<double>(g.size(), 2.5));
  for (auto solve : {&solve_bvp, &solve_closed_form}) {
    const ApproximationResult z = solve(zero, Kappa{});
    CHECK(*std::max_element(z.f.begin(), z.f.end()) == 0.0);
    const ApproximationResult c = solve(cst, Kappa{1.7});
    for (std::size_t i = 0; i < g.size(); ++i) {
      REQUIRE(c.f[i] == doctest::Approx(2.5).epsilon(1e-12));
      REQUIRE(std::abs(c.f_prime[i]) < 1e-10);
    }
  }
}

TEST_CASE("preconditions") {
  CHECK_THROWS(Kappa{0.0});
  CHECK_THROWS(Kappa{-1.0});
  const SamplePath two(Grid(0.0, 1.0, 2), {0.0, 1.0});
  CHECK_THROWS(solve_bvp(two, Kappa{}));
  const SamplePath shifted(Grid(1.0, 0.1, 11), std::vector<double>(11, 1.0));
  CHECK_THROWS(solve_closed_form(shifted, Kappa{}));
  CHECK_NOTHROW(solve_bvp(shifted, Kappa{}));
}

TEST_CASE("tridiagonal solver") {
  // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1] has x = [1 1 1].
  const std::vector<double> a{0, -1, -1}, b{2, 2, 2}, c{-1, -1, 0}, d{1, 0, 1};
  const std::vector<double> x = solve_tridiagonal(a, b, c, d);
  for (double v : x) CHECK(v == doctest::Approx(1.0));
  CHECK_THROWS(solve_tridiagonal(a, std::vector<double>{0, 2, 2}, c, d));
}

TEST_CASE("bvp is a strict local minimum of the discrete energy") {
  const SamplePath p = simulate(Wiener{}, Grid::spanning(0.0, 4.0, 0.01), Seed{17});
  const ApproximationResult r = solve_bvp(p, Kappa{});
  const double e0 = discrete_energy(r.f, p, Kappa{});
  for (double eps : {1e-3, 1e-4}) {
    for (std::size_t i : {1ul, 57ul, 200ul, 399ul}) {
      for (double sign : {-1.0, 1.0}) {
        std::vector<double> g = r.f;
        g[i] += sign * eps;
        REQUIRE(discrete_energy(g, p, Kappa{}) > e0);
      }
    }
  }
}

TEST_CASE("second-order accuracy on an exact solution") {
  const double kappa = 1.3;
  const double amp = kappa * kappa / (kappa * kappa + kOmega * kOmega);
  std::vector<double> steps{0.01, 0.005, 0.0025}, err_bvp, err_cf, err_neumann, residual;
  for (double dt : steps) {
    const SamplePath p = from_function(kT, dt, cos_path);
    const ApproximationResult b = solve_bvp(p, Kappa{kappa});
    const ApproximationResult c = solve_closed_form(p, Kappa{kappa});
    double eb = 0, ec = 0, rc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double exact = amp * cos_path(p.grid()[i]);
      eb = std::max(eb, std::abs(b.f[i] - exact));
      ec = std::max(ec, std::abs(c.f[i] - exact));
    }
    // Second-difference residual of the closed form.
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
      const double d2 = (c.f[i + 1] - 2 * c.f[i] + c.f[i - 1]) / (dt * dt);
      rc = std::max(rc, std::abs(d2 - kappa * kappa * (c.f[i] - p[i])));
    }
    err_bvp.push_back(eb);
    err_cf.push_back(ec);
    residual.push_back(rc);
    err_neumann.push_back(std::max(std::abs(b.f_prime.front()), std::abs(b.f_prime.back())));
  }
  CHECK(testing::loglog_slope(steps, err_bvp) >= 1.9);
  CHECK(testing::loglog_slope(steps, err_cf) >= 1.9);
  CHECK(testing::loglog_slope(steps, residual) >= 1.9);
  CHECK(testing::loglog_slope(steps, err_neumann) >= 1.9);
  CHECK(err_bvp.back() < 1e-5);
}

TEST_CASE("closed form on a linear path") {
  // f = t - sinh(t - T/2) / cosh(T/2) for B = t.
  std::vector<double> errs;
  for (double dt : {0.01, 0.005}) {
    const SamplePath p = from_function(8.0, dt, [](double t) { return t; });
    const ApproximationResult c = solve_closed_form(p, Kappa{});
    double err = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double t = p.grid()[i];
      err = std::max(err, std::abs(c.f[i] - (t - std::sinh(t - 4.0) / std::cosh(4.0))));
    }
    errs.push_back(err);
    CHECK(std::abs(c.f_prime.front()) < 1e-12);
    CHECK(std::abs(c.f_prime.back()) < 1e-12);
  }
  CHECK(errs[0] < 5e-5);
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("bvp and closed form agree at O(dt^2) on a Wiener path") {
  const SamplePath fine = simulate(Wiener{}, Grid::spanning(0.0, 5.0, 0.0025), Seed{21});
  std::vector<double> steps, gaps;
  for (std::size_t k : {4u, 2u, 1u}) {
    const SamplePath p = testing::subsample(fine, k);
    steps.push_back(p.grid().step());
    gaps.push_back(sup_diff(solve_bvp(p, Kappa{}).f, solve_closed_form(p, Kappa{}).f));
  }
  CHECK(testing::loglog_slope(steps, gaps) >= 1.9);
}

TEST_CASE("closed form stays finite at long horizons") {
  const SamplePath p = simulate(Wiener{}, Grid::spanning(0.0, 2000.0, 0.05), Seed{2});
  const ApproximationResult c = solve_closed_form(p, Kappa{});
  const ApproximationResult b = solve_bvp(p, Kappa{});
  CHECK(std::all_of(c.f.begin(), c.f.end(), [](double x) { return std::isfinite(x); }));
  CHECK(sup_diff(c.f, b.f) < 1e-3);
}

TEST_CASE("kappa time change") {
  const SamplePath p = simulate(Wiener{}, Grid::spanning(0.0, 3.0, 0.01), Seed{5});
  const double kappa = 2.5;
  const ApproximationResult direct = solve_bvp(p, Kappa{kappa});
  // B̃(τ) = B(τ/κ) on the stretched grid, solved with κ = 1.
  const SamplePath stretched(Grid(0.0, kappa * p.grid().step(), p.size()),
                             std::vector<double>(p.values().begin(), p.values().end()));
  const ApproximationResult tilde = solve_bvp(stretched, Kappa{});
  for (std::size_t i = 0; i < p.size(); ++i) {
    REQUIRE(direct.f[i] == doctest::Approx(tilde.f[i]).epsilon(1e-12));
    REQUIRE(direct.f_prime[i] == doctest::Approx(kappa * tilde.f_prime[i]).epsilon(1e-9));
  }
  const ApproximationResult cf = solve_closed_form(p, Kappa{kappa});
  const ApproximationResult cf1 = solve_closed_form(stretched, Kappa{});
  CHECK(sup_diff(cf.f, cf1.f) < 1e-12);
}

TEST_CASE("kernel K_T") {
  // coth(1) from its continued fraction 1 + 1/(3 + 1/(5 + ...)).
  double cf = 0.0;
  for (int k = 41; k >= 3; k -= 2) cf = 1.0 / (k + cf);
  const double coth1 = 1.0 + cf;
  CHECK(coth1 == doctest::Approx(1.3130352855).epsilon(1e-10));
  CHECK(kernel_KT(0.0, 0.0, 1.0) == doctest::Approx(coth1).epsilon(1e-14));
  // Direct formula where it is still well-conditioned.
  const double T = 3.0, s = 2.0, t = 0.5;
  const double direct = std::cosh(T - s) * (std::exp(t) + std::exp(-t)) / (std::exp(T) - std::exp(-T));
  CHECK(kernel_KT(s, t, T) == doctest::Approx(direct).epsilon(1e-14));

  CHECK(std::abs(kernel_KT(10.0, 10.0, 20.0) - 0.5) < 1e-8);

  for (double horizon : {5.0, 20.0, 800.0}) {
    for (double u : {0.0, 0.1, 0.4, 0.7, 1.0}) {
      for (double v : {0.0, 0.3, 0.6, 1.0}) {
        const double ss = std::max(u, v) * horizon, tt = std::min(u, v) * horizon;
        const double k = kernel_KT(ss, tt, horizon);
        REQUIRE(std::isfinite(k));
        const double bound = 2.0 * (std::exp(-2 * horizon + tt + ss) + std::exp(-tt - ss) +
                                    std::exp(tt - ss - 2 * horizon));
        REQUIRE(std::abs(k - 0.5 * std::exp(tt - ss)) <= bound + 1e-15);
      }
    }
  }
  CHECK_THROWS(kernel_KT(-0.1, 0.0, 1.0));
  CHECK_THROWS(kernel_KT(0.0, 1.1, 1.0));
}

TEST_CASE("restriction") {
  const SamplePath p = simulate(Wiener{}, Grid::spanning(0.0, 2.0, 0.1), Seed{1});
  const ApproximationResult r = solve_bvp(p, Kappa{}).restrict(0.5, 1.5);
  CHECK(r.f.size() == 11);
  CHECK(r.grid.start() == doctest::Approx(0.5));
  CHECK(std::string(to_string(r.method)) == "bvp");
}
