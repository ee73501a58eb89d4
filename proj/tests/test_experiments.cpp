#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "lea/experiments.hpp"
#include "oracles.hpp"

using namespace lea;

namespace {

ExperimentConfig small(ProcessSpec spec) {
  ExperimentConfig c;
  c.process = spec;
  c.horizons = {5.0, 10.0};
  c.step = 0.01;
  c.replicas = 12;
  c.seed = Seed{77};
  return c;
}

Deterministic linear(double d) {
  Deterministic x;
  x.kind = Deterministic::Kind::linear;
  x.slope = d;
  return x;
}

}  // namespace

TEST_CASE("config validation") {
  ExperimentConfig c = small(Wiener{});
  CHECK_NOTHROW(validate(c));
  c.horizons = {10.0, 5.0};
  CHECK_THROWS(validate(c));
  c = small(Wiener{});
  c.replicas = 0;
  CHECK_THROWS(validate(c));
  c = small(Wiener{});
  c.horizons = {5.005};
  c.step = 0.01;
  CHECK_THROWS(validate(c));
}

TEST_CASE("targets") {
  CHECK(target_constant(Wiener{}) == 0.5);
  CHECK(target_constant(Wiener{}, Kappa{3.0}) == 1.5);
  CHECK(target_constant(Fbm{0.75}) == doctest::Approx(0.6646701941));
  CHECK(target_constant(Levy{0.0, 0.0, 1.0, 1.0, 0.0, true}) == 0.5);
  CHECK(target_constant(linear(2.0)) == doctest::Approx(4.0));
}

TEST_CASE("Monte Carlo report is reproducible and worker-independent") {
  ExperimentConfig c = small(Fbm{0.4});
  c.workers = 1;
  const MCReport a = mc_energy_rate(c);
  c.workers = 5;
  const MCReport b = mc_energy_rate(c);
  CHECK(to_csv(a, c).body() == to_csv(b, c).body());
  REQUIRE(a.rows.size() == 2);
  CHECK(a.rows[0].horizon == 5.0);
  CHECK(a.rows[0].replicas == 12);
  // stderr is the sample sd over √n.
  double m = 0, v = 0;
  for (double x : a.rates[1]) m += x;
  m /= 12;
  for (double x : a.rates[1]) v += (x - m) * (x - m);
  CHECK(a.rows[1].stderr_rate == doctest::Approx(std::sqrt(v / 11 / 12)));
  CHECK(a.rows[1].z == doctest::Approx(std::abs(m - a.rows[1].target) / a.rows[1].stderr_rate));
}

TEST_CASE("errors carry the replica index") {
  ExperimentConfig c = small(Wiener{});
  c.max_points = 10;
  CHECK_THROWS_AS(mc_energy_rate(c), std::length_error);
  c = small(Fbm{0.5});
  c.horizons = {0.01};  // two grid points: the solver refuses
  try {
    mc_energy_rate(c);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("replica 0") != std::string::npos);
  }
}

TEST_CASE("linear drift: rates increase to one within 2/T") {
  ExperimentConfig c = small(linear(1.0));
  const ConvergenceRun run = as_convergence(c, 1.5, 200.0);
  REQUIRE(run.points.size() == 13);
  CHECK(run.points.back().horizon == doctest::Approx(194.62));
  for (std::size_t k = 1; k < run.points.size(); ++k) {
    CHECK(run.points[k].rate > run.points[k - 1].rate);
    CHECK(run.points[k].energy > run.points[k - 1].energy);
  }
  for (const auto& p : run.points) {
    if (p.horizon >= 10.0) CHECK(std::abs(p.rate - 1.0) <= 2.0 / p.horizon);
  }
  c.max_points = 1000;
  CHECK_THROWS_AS(as_convergence(c, 1.5, 200.0), std::length_error);
  CHECK_THROWS(as_convergence(c, 1.0, 200.0));
}

TEST_CASE("compare: zero path gives zero gaps") {
  Deterministic z;
  ExperimentConfig c = small(z);
  c.replicas = 2;
  for (const CompareRow& r : compare_solvers(c)) {
    CHECK(r.sup_bvp_closed == 0.0);
    CHECK(r.sup_closed_stationary == 0.0);
    CHECK(r.l2_gap == 0.0);
    CHECK(r.max_ratio == 0.0);
  }
}

TEST_CASE("compare: Wiener gaps") {
  ExperimentConfig c = small(Wiener{});
  c.horizons = {10.0, 20.0, 40.0};
  c.replicas = 10;
  for (Extension ext : {Extension::zero, Extension::two_sided}) {
    c.extension = ext;
    const auto rows = compare_solvers(c);
    std::vector<double> T, l2;
    for (const auto& r : rows) {
      T.push_back(r.horizon + 1.0);
      l2.push_back(r.l2_gap);
      CHECK(r.sup_bvp_closed < 1e-4);
      CHECK(r.max_ratio_over_bound < 1.0);
    }
    CHECK(testing::loglog_slope(T, l2) < 0.6);
    CHECK(std::isnan(rows[0].core_sup_gap));
    CHECK(rows[2].core_sup_gap < 1e-8);
  }
}

TEST_CASE("core region") {
  const Interval r = core_region(40.0, Kappa{}, 1e-8);
  CHECK(r.lo < 20.0);
  CHECK(r.hi > 20.0);
  CHECK(std::exp(-r.lo) + std::exp(-40.0) + std::exp(-(40.0 - r.lo)) == doctest::Approx(1e-8));
  const Interval none = core_region(10.0, Kappa{}, 1e-8);
  CHECK(none.lo > none.hi);
}

TEST_CASE("closeness constant") {
  CHECK(closeness_constant(0.6) == doctest::Approx(13.9).epsilon(0.01));
  CHECK(closeness_constant(1.0) > closeness_constant(0.5));
}

TEST_CASE("constants table") {
  ModelSpec h25;
  h25.hurst = 0.25;
  ModelSpec levy;
  levy.family = ModelSpec::Family::levy;
  const auto rows = constants_table({h25, levy});
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].model == "fbm H=0.25");
  CHECK(rows[2].route == "closed_form");
  CHECK(rows[2].value == doctest::Approx(0.4431134627));
  CHECK(rows[3].route == "max_discrepancy");
  CHECK(rows[3].value < 1e-8);
  CHECK(rows[6].value == 0.5);
  CHECK(constants_table({h25}, Kappa{2.0}).size() == 5);
}

TEST_CASE("KL report") {
  const auto rows = kl_report({10.0, 200.0}, 100000);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].sigma == doctest::Approx(100.0).epsilon(0.01));
  CHECK(rows[1].deviation == doctest::Approx(rows[1].rate - 0.5));
  CHECK(to_csv(rows).rows().size() == 14);
}

TEST_CASE("CSV formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CsvTable t({"a", "b"});
  CHECK_THROWS(t.add_row({"1"}));
  t.add_row({"1", "2"});
  CHECK(t.body() == "a,b\n1,2\n");
}
