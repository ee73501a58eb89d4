#pragma once

// Monte Carlo and single-path experiments built on the solvers.
//
// Replica r of a run with seed S uses the path seed derive_seed(S, r) at
// every horizon. Replica results are stored by index and aggregated in index
// order, so reports do not depend on the number of worker threads.

#include <cstddef>
#include <string>
#include <vector>

#include "lea/csv.hpp"
#include "lea/energy_constants.hpp"
#include "lea/exact_solver.hpp"
#include "lea/path_models.hpp"

namespace lea {

enum class Extension { zero, two_sided };

const char* to_string(Extension e) noexcept;

struct ExperimentConfig {
  ProcessSpec process = Wiener{};
  std::vector<double> horizons{50.0};
  double step = 0.01;
  std::size_t replicas = 200;
  Seed seed{1};
  Kappa kappa{};
  Extension extension = Extension::zero;
  std::string output;          // empty or "-" means stdout
  std::size_t workers = 0;     // 0: hardware concurrency
  std::size_t max_points = 20'000'000;  // per simulated path
};

// Horizons positive and strictly increasing, replicas >= 1, step > 0,
// process valid.
void validate(const ExperimentConfig& config);

Seed replica_seed(Seed seed, std::size_t replica) noexcept;

// Spectral description of a process, when it has one with finite 𝒞.
SpectralModel spectral_model(const ProcessSpec& spec);
// Long-run rate constant for penalty κ²y² (the viscous constant).
double target_constant(const ProcessSpec& spec, Kappa kappa = {});

struct MCRow {
  double horizon = 0.0;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;  // sample sd / √replicas
  std::size_t replicas = 0;
  double target = 0.0;
  double z = 0.0;  // |mean - target| / stderr
};

struct MCReport {
  std::vector<MCRow> rows;  // ordered by T
  std::vector<std::vector<double>> rates;  // [horizon][replica]
};

MCReport mc_energy_rate(const ExperimentConfig& config);
CsvTable to_csv(const MCReport& report, const ExperimentConfig& config);

struct ConvergencePoint {
  double horizon = 0.0;
  double energy = 0.0;
  double rate = 0.0;
};

struct ConvergenceRun {
  std::vector<ConvergencePoint> points;
  double target = 0.0;
};

// One path on [0, T_max]; checkpoints a^k (k >= 1) snapped to the grid, each
// re-solved on [0, T_k]. Uses config.seed directly.
ConvergenceRun as_convergence(const ExperimentConfig& config, double base, double max_horizon);
CsvTable to_csv(const ConvergenceRun& run, const ExperimentConfig& config, double base);

struct CompareRow {
  double horizon = 0.0;
  double sup_bvp_closed = 0.0;        // max over replicas
  double sup_closed_stationary = 0.0;
  double sup_bvp_stationary = 0.0;
  double l2_gap = 0.0;                // mean over replicas, closed form vs stationary
  double l2_gap_derivative = 0.0;
  double max_ratio = 0.0;             // max over replicas and t
  double max_ratio_derivative = 0.0;
  double max_ratio_over_bound = 0.0;  // max_ratio_over_C / closeness_constant(p)
  double bulk_sup_gap = 0.0;          // relative to sup|B|, over bulk_region
  double core_sup_gap = 0.0;          // relative to sup|B|, where envelope <= core_level
};

struct CompareOptions {
  double growth_p = 0.6;
  double margin = 40.0;       // extension beyond [0, T] in units of 1/κ
  double core_level = 1e-8;
};

// All three methods on shared paths. The stationary filter runs on the path
// extended by `margin` on both sides (zero or two-sided on the left, the
// process itself on the right) and is compared on [0, T].
std::vector<CompareRow> compare_solvers(const ExperimentConfig& config,
                                        const CompareOptions& options = {});
CsvTable to_csv(const std::vector<CompareRow>& rows, const ExperimentConfig& config);

// {t : e^{-κt} + e^{-κT} + e^{-κ(T-t)} <= level} on [0, T]; lo > hi if empty.
Interval core_region(double horizon, Kappa kappa, double level);

// A_p for the bound |f_T - f̂| <= C A_p (T+1)^p (e^{-t} + e^{-T} + e^{-(T-t)})
// under |B(s)| <= C (|s|+1)^p, κ = 1.
double closeness_constant(double growth_p);

struct ModelSpec {
  enum class Family { fbm, levy };
  Family family = Family::fbm;
  double hurst = 0.5;
  double mean_b1 = 0.0;
  double var_b1 = 1.0;
  std::string label() const;
};

struct ConstantRow {
  std::string model;
  std::string route;
  double value = 0.0;
};

// Every applicable route per model plus the largest pairwise discrepancy.
// κ != 1 adds the viscous route.
std::vector<ConstantRow> constants_table(const std::vector<ModelSpec>& models, Kappa kappa = {});
CsvTable to_csv(const std::vector<ConstantRow>& rows);

struct KLRow {
  double horizon = 0.0;
  std::size_t order = 0;
  double sigma = 0.0;
  double expected_s2 = 0.0;
  double rate = 0.0;       // E ℰ_T / T
  double deviation = 0.0;  // rate - 1/2
};

std::vector<KLRow> kl_report(const std::vector<double>& horizons, std::size_t order);
CsvTable to_csv(const std::vector<KLRow>& rows);

}  // namespace lea
