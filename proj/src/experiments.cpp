#include "lea/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lea/kl_wiener.hpp"
#include "lea/quadrature.hpp"
#include "lea/stationary_filter.hpp"

namespace lea {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t worker_count(std::size_t requested, std::size_t tasks) {
  std::size_t w = requested;
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(w, tasks));
}

// Runs fn(i) for i in [0, n). The first failure (lowest index) is rethrown as
// "<what> i: message".
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, const char* what, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };
  const std::size_t w = worker_count(workers, n);
  if (w == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (std::size_t k = 0; k < w; ++k) pool.emplace_back(run);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(what) + " " + std::to_string(i) + ": " + e.what());
    }
  }
}

Grid horizon_grid(double start, double end, double step) { return Grid::spanning(start, end, step); }

void check_points(double length, double step, std::size_t cap, const char* what) {
  const double n = std::floor(length / step + 0.5) + 1.0;
  if (n > static_cast<double>(cap)) {
    std::ostringstream os;
    os << what << ": path would need " << static_cast<std::uint64_t>(n)
       << " grid points, above the cap of " << cap << " (raise max_points or enlarge the step)";
    throw std::length_error(os.str());
  }
}

std::string config_line(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "process=" << describe(c.process) << " dt=" << format_number(c.step)
     << " replicas=" << c.replicas << " seed=" << c.seed.value
     << " kappa=" << format_number(c.kappa.value()) << " extension=" << to_string(c.extension);
  return os.str();
}

}  // namespace

const char* to_string(Extension e) noexcept {
  return e == Extension::zero ? "zero" : "two-sided";
}

void validate(const ExperimentConfig& c) {
  validate(c.process);
  if (c.horizons.empty()) throw std::invalid_argument("config: no horizons given");
  for (std::size_t i = 0; i < c.horizons.size(); ++i) {
    if (!(c.horizons[i] > 0.0) || !std::isfinite(c.horizons[i])) {
      throw std::invalid_argument("config: horizons must be positive");
    }
    if (i > 0 && !(c.horizons[i] > c.horizons[i - 1])) {
      throw std::invalid_argument("config: horizons must be strictly increasing");
    }
  }
  if (!(c.step > 0.0) || !std::isfinite(c.step)) throw std::invalid_argument("config: dt must be positive");
  if (c.replicas < 1) throw std::invalid_argument("config: replicas must be >= 1");
  for (double t : c.horizons) (void)horizon_grid(0.0, t, c.step);  // alignment check
}

Seed replica_seed(Seed seed, std::size_t replica) noexcept { return derive_seed(seed, replica); }

SpectralModel spectral_model(const ProcessSpec& spec) {
  return std::visit(
      Overloaded{
          [](const Wiener&) { return SpectralModel::wiener(1.0); },
          [](const Fbm& f) { return SpectralModel::fbm(f.hurst); },
          [](const Levy& l) { return SpectralModel::levy(l.mean_at_one(), l.var_at_one()); },
          [](const Deterministic& d) {
            switch (d.kind) {
              case Deterministic::Kind::linear: return SpectralModel::drift(d.slope);
              case Deterministic::Kind::cosine: return SpectralModel::cosine(d.omega, d.amplitude);
              default: return SpectralModel{};
            }
          },
      },
      spec);
}

double target_constant(const ProcessSpec& spec, Kappa kappa) {
  const double k = kappa.value();
  return std::visit(
      Overloaded{
          [k](const Wiener&) { return 0.5 * k; },
          // Substituting u = κv scales the fBm integral by κ^{2-2H}.
          [k](const Fbm& f) { return std::pow(k, 2.0 - 2.0 * f.hurst) * constant_fbm(f.hurst); },
          [k](const Levy& l) {
            const double m = l.mean_at_one();
            return m * m + 0.5 * k * l.var_at_one();
          },
          [&](const Deterministic&) { return constant_viscous(spectral_model(spec), kappa); },
      },
      spec);
}

// ---------------------------------------------------------------------------

MCReport mc_energy_rate(const ExperimentConfig& config) {
  validate(config);
  const double t_max = config.horizons.back();
  check_points(t_max, config.step, config.max_points, "energy sweep");
  const Grid grid = horizon_grid(0.0, t_max, config.step);
  const std::size_t nh = config.horizons.size();

  std::vector<std::vector<double>> per_replica(config.replicas, std::vector<double>(nh));
  parallel_for(config.replicas, config.workers, "replica", [&](std::size_t r) {
    const SamplePath full = simulate(config.process, grid, replica_seed(config.seed, r));
    for (std::size_t h = 0; h < nh; ++h) {
      const SamplePath path = full.restrict(0.0, config.horizons[h]);
      const ApproximationResult fT = solve_bvp(path, config.kappa);
      per_replica[r][h] = energy(fT, path).rate;
    }
  });

  MCReport report;
  const double target = target_constant(config.process, config.kappa);
  report.rates.assign(nh, std::vector<double>(config.replicas));
  for (std::size_t h = 0; h < nh; ++h) {
    CompensatedSum sum;
    for (std::size_t r = 0; r < config.replicas; ++r) {
      report.rates[h][r] = per_replica[r][h];
      sum.add(per_replica[r][h]);
    }
    const double n = static_cast<double>(config.replicas);
    const double mean = sum.value() / n;
    CompensatedSum dev;
    for (double x : report.rates[h]) dev.add((x - mean) * (x - mean));
    MCRow row;
    row.horizon = config.horizons[h];
    row.mean_rate = mean;
    row.stderr_rate = config.replicas > 1 ? std::sqrt(dev.value() / (n - 1.0) / n) : 0.0;
    row.replicas = config.replicas;
    row.target = target;
    const double diff = std::abs(mean - target);
    if (row.stderr_rate > 0.0) {
      row.z = diff / row.stderr_rate;
    } else {
      row.z = diff <= 1e-12 * std::max(1.0, std::abs(target))
                  ? 0.0
                  : std::numeric_limits<double>::infinity();
    }
    report.rows.push_back(row);
  }
  return report;
}

CsvTable to_csv(const MCReport& report, const ExperimentConfig& config) {
  CsvTable t({"T", "statistic", "value"});
  t.comment("energy-sweep " + config_line(config));
  t.comment("rate = energy / T of the bvp solution; target = long-run rate constant");
  for (const auto& row : report.rows) {
    const std::string T = format_number(row.horizon);
    t.add_row({T, "mean_rate", format_number(row.mean_rate)});
    t.add_row({T, "stderr", format_number(row.stderr_rate)});
    t.add_row({T, "replicas", std::to_string(row.replicas)});
    t.add_row({T, "target", format_number(row.target)});
    t.add_row({T, "z", format_number(row.z)});
  }
  return t;
}

// ---------------------------------------------------------------------------

ConvergenceRun as_convergence(const ExperimentConfig& config, double base, double max_horizon) {
  validate(config.process);
  if (!(base > 1.0)) throw std::invalid_argument("as_convergence: checkpoint base must exceed 1");
  if (!(max_horizon > 0.0)) throw std::invalid_argument("as_convergence: T_max must be positive");
  if (!(config.step > 0.0)) throw std::invalid_argument("as_convergence: dt must be positive");

  std::vector<double> checkpoints;
  for (double a = base; a <= max_horizon * (1.0 + 1e-12); a *= base) {
    const double t = std::round(a / config.step) * config.step;
    if (t < 2.0 * config.step || t > max_horizon + 0.5 * config.step) continue;
    if (checkpoints.empty() || t > checkpoints.back()) checkpoints.push_back(t);
  }
  if (checkpoints.empty()) {
    throw std::invalid_argument("as_convergence: no checkpoint a^k fits in (2 dt, T_max]");
  }
  check_points(checkpoints.back(), config.step, config.max_points, "as_convergence");

  const Grid grid = horizon_grid(0.0, checkpoints.back(), config.step);
  const SamplePath full = simulate(config.process, grid, config.seed);

  ConvergenceRun run;
  run.target = target_constant(config.process, config.kappa);
  run.points.resize(checkpoints.size());
  parallel_for(checkpoints.size(), config.workers, "checkpoint", [&](std::size_t k) {
    const SamplePath path = full.restrict(0.0, checkpoints[k]);
    const EnergyBreakdown e = energy(solve_bvp(path, config.kappa), path);
    run.points[k] = ConvergencePoint{checkpoints[k], e.total, e.rate};
  });
  return run;
}

CsvTable to_csv(const ConvergenceRun& run, const ExperimentConfig& config, double base) {
  CsvTable t({"T", "statistic", "value"});
  t.comment("as-converge " + config_line(config) + " base=" + format_number(base));
  t.comment("single path, checkpoints T_k = base^k; no convergence rate is known, so any "
            "tolerance applied to these rates is an engineering choice");
  for (const auto& p : run.points) {
    const std::string T = format_number(p.horizon);
    t.add_row({T, "energy", format_number(p.energy)});
    t.add_row({T, "rate", format_number(p.rate)});
    t.add_row({T, "target", format_number(run.target)});
  }
  return t;
}

// ---------------------------------------------------------------------------

Interval core_region(double horizon, Kappa kappa, double level) {
  const double k = kappa.value();
  const double rest = level - std::exp(-k * horizon);
  if (!(rest > 0.0)) return Interval{1.0, 0.0};
  // e^{-κt} + e^{-κ(T-t)} = rest; with x = e^{-κt}: x + c/x = rest, c = e^{-κT}.
  const double c = std::exp(-k * horizon);
  const double disc = rest * rest - 4.0 * c;
  if (disc < 0.0) return Interval{1.0, 0.0};
  const double x_big = 0.5 * (rest + std::sqrt(disc));
  const double x_small = c / x_big;
  return Interval{-std::log(x_big) / k, -std::log(x_small) / k};
}

double closeness_constant(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("closeness_constant: p must be positive");
  QuadratureResult a1 =
      integrate_half_line([p](double u) { return std::pow(u + 1.0, p) * std::exp(-u); });
  const double g = std::tgamma(p + 1.0);
  const double a2 = std::pow(2.0, p - 1.0) * (1.0 + g);
  return 0.5 * a1.value + a2 + 2.0 * (1.0 + 2.0 * std::numbers::e * g);
}

std::vector<CompareRow> compare_solvers(const ExperimentConfig& config,
                                        const CompareOptions& options) {
  validate(config);
  const double k = config.kappa.value();
  const double margin = std::ceil(options.margin / k / config.step) * config.step;
  check_points(config.horizons.back() + 2.0 * margin, config.step, config.max_points, "compare");
  const double a_p = closeness_constant(options.growth_p);

  struct Sample {
    double sup_bc, sup_cs, sup_bs, l2, l2d, ratio, ratio_d, ratio_bound, bulk, core;
  };
  std::vector<CompareRow> out;
  for (double horizon : config.horizons) {
    std::vector<Sample> samples(config.replicas);
    parallel_for(config.replicas, config.workers, "replica", [&](std::size_t r) {
      const Seed seed = replica_seed(config.seed, r);
      SamplePath full = config.extension == Extension::zero
          ? extend_by_zero(simulate(config.process, horizon_grid(0.0, horizon + margin, config.step), seed),
                           -margin)
          : two_sided(config.process, horizon_grid(-margin, horizon + margin, config.step), seed);
      const SamplePath path = full.restrict(0.0, horizon);

      const ApproximationResult bvp = solve_bvp(path, config.kappa);
      const ApproximationResult cf = solve_closed_form(path, config.kappa);
      const ApproximationResult st = smooth(full, config.kappa).restrict(0.0, horizon);

      double growth_c = 0.0;
      const Grid& fg = full.grid();
      for (std::size_t i = 0; i < full.size(); ++i) {
        growth_c = std::max(growth_c, std::abs(full[i]) / std::pow(std::abs(fg[i]) + 1.0,
                                                                   options.growth_p));
      }
      const ClosenessReport rep =
          closeness_report(cf, st, options.growth_p, growth_c > 0.0 ? growth_c : 1.0);

      const double scale = path.sup_norm() > 0.0 ? path.sup_norm() : 1.0;
      const Interval bulk = bulk_region(path.grid(), config.kappa);
      const Interval core = core_region(horizon, config.kappa, options.core_level);
      Sample s{};
      const Grid& g = path.grid();
      for (std::size_t i = 0; i < path.size(); ++i) {
        const double bc = std::abs(bvp.f[i] - cf.f[i]);
        const double cs = std::abs(cf.f[i] - st.f[i]);
        const double bs = std::abs(bvp.f[i] - st.f[i]);
        s.sup_bc = std::max(s.sup_bc, bc);
        s.sup_cs = std::max(s.sup_cs, cs);
        s.sup_bs = std::max(s.sup_bs, bs);
        if (g[i] >= bulk.lo && g[i] <= bulk.hi) s.bulk = std::max(s.bulk, cs / scale);
        if (g[i] >= core.lo && g[i] <= core.hi) s.core = std::max(s.core, cs / scale);
      }
      if (core.lo > core.hi) s.core = std::numeric_limits<double>::quiet_NaN();
      if (bulk.lo > bulk.hi) s.bulk = std::numeric_limits<double>::quiet_NaN();
      s.l2 = rep.l2_gap;
      s.l2d = rep.l2_gap_derivative;
      s.ratio = rep.max_ratio;
      s.ratio_d = rep.max_ratio_derivative;
      s.ratio_bound = rep.max_ratio_over_C / a_p;
      samples[r] = s;
    });

    CompareRow row;
    row.horizon = horizon;
    CompensatedSum l2, l2d;
    for (const Sample& s : samples) {
      row.sup_bvp_closed = std::max(row.sup_bvp_closed, s.sup_bc);
      row.sup_closed_stationary = std::max(row.sup_closed_stationary, s.sup_cs);
      row.sup_bvp_stationary = std::max(row.sup_bvp_stationary, s.sup_bs);
      row.max_ratio = std::max(row.max_ratio, s.ratio);
      row.max_ratio_derivative = std::max(row.max_ratio_derivative, s.ratio_d);
      row.max_ratio_over_bound = std::max(row.max_ratio_over_bound, s.ratio_bound);
      row.bulk_sup_gap = std::isnan(s.bulk) ? s.bulk : std::max(row.bulk_sup_gap, s.bulk);
      row.core_sup_gap = std::isnan(s.core) ? s.core : std::max(row.core_sup_gap, s.core);
      l2.add(s.l2);
      l2d.add(s.l2d);
    }
    row.l2_gap = l2.value() / static_cast<double>(samples.size());
    row.l2_gap_derivative = l2d.value() / static_cast<double>(samples.size());
    out.push_back(row);
  }
  return out;
}

CsvTable to_csv(const std::vector<CompareRow>& rows, const ExperimentConfig& config) {
  CsvTable t({"T", "statistic", "value"});
  t.comment("compare " + config_line(config));
  t.comment("sup gaps are maxima over replicas; l2 gaps are replica means; bulk and core gaps "
            "are relative to sup|B| on [0, T]");
  for (const auto& r : rows) {
    const std::string T = format_number(r.horizon);
    t.add_row({T, "sup_bvp_closed_form", format_number(r.sup_bvp_closed)});
    t.add_row({T, "sup_closed_form_stationary", format_number(r.sup_closed_stationary)});
    t.add_row({T, "sup_bvp_stationary", format_number(r.sup_bvp_stationary)});
    t.add_row({T, "l2_gap", format_number(r.l2_gap)});
    t.add_row({T, "l2_gap_derivative", format_number(r.l2_gap_derivative)});
    t.add_row({T, "max_ratio", format_number(r.max_ratio)});
    t.add_row({T, "max_ratio_derivative", format_number(r.max_ratio_derivative)});
    t.add_row({T, "max_ratio_over_bound", format_number(r.max_ratio_over_bound)});
    t.add_row({T, "bulk_sup_gap", format_number(r.bulk_sup_gap)});
    t.add_row({T, "core_sup_gap", format_number(r.core_sup_gap)});
  }
  return t;
}

// ---------------------------------------------------------------------------

std::string ModelSpec::label() const {
  std::ostringstream os;
  if (family == Family::fbm) {
    os << "fbm H=" << format_number(hurst);
  } else {
    os << "levy mean=" << format_number(mean_b1) << " var=" << format_number(var_b1);
  }
  return os.str();
}

std::vector<ConstantRow> constants_table(const std::vector<ModelSpec>& models, Kappa kappa) {
  std::vector<ConstantRow> rows;
  for (const ModelSpec& m : models) {
    const std::string label = m.label();
    std::vector<ConstantRow> routes;
    SpectralModel sm;
    if (m.family == ModelSpec::Family::fbm) {
      sm = SpectralModel::fbm(m.hurst);
      routes.push_back({label, "spectral", constant_spectral(sm)});
      routes.push_back({label, "nonspectral", constant_nonspectral(VarianceFunction::fbm(m.hurst))});
      routes.push_back({label, "closed_form", constant_fbm(m.hurst)});
    } else {
      sm = SpectralModel::levy(m.mean_b1, m.var_b1);
      routes.push_back({label, "spectral", constant_spectral(sm)});
      routes.push_back(
          {label, "nonspectral", constant_nonspectral(VarianceFunction::levy(m.mean_b1, m.var_b1))});
      routes.push_back({label, "closed_form", constant_levy(m.mean_b1, m.var_b1)});
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < routes.size(); ++i) {
      for (std::size_t j = i + 1; j < routes.size(); ++j) {
        worst = std::max(worst, std::abs(routes[i].value - routes[j].value));
      }
    }
    rows.insert(rows.end(), routes.begin(), routes.end());
    rows.push_back({label, "max_discrepancy", worst});
    if (kappa.value() != 1.0) rows.push_back({label, "viscous", constant_viscous(sm, kappa)});
  }
  return rows;
}

CsvTable to_csv(const std::vector<ConstantRow>& rows) {
  CsvTable t({"model", "route", "value"});
  t.comment("constants: long-run energy rate by independent routes");
  for (const auto& r : rows) t.add_row({r.model, r.route, format_number(r.value)});
  return t;
}

std::vector<KLRow> kl_report(const std::vector<double>& horizons, std::size_t order) {
  std::vector<KLRow> rows;
  for (double horizon : horizons) {
    const std::size_t j = order > 0 ? order : kl_auto_order(horizon);
    const KLExpectedEnergy e = kl_expected_energy(horizon, j);
    KLRow row;
    row.horizon = horizon;
    row.order = j;
    row.sigma = e.sigma;
    row.expected_s2 = e.expected_s2;
    row.rate = e.expected_energy / horizon;
    row.deviation = row.rate - 0.5;
    rows.push_back(row);
  }
  return rows;
}

CsvTable to_csv(const std::vector<KLRow>& rows) {
  CsvTable t({"T", "statistic", "value"});
  t.comment("kl: Wiener expected energy from the truncated eigen-expansion");
  for (const auto& r : rows) {
    const std::string T = format_number(r.horizon);
    t.add_row({T, "order", std::to_string(r.order)});
    t.add_row({T, "sigma", format_number(r.sigma)});
    t.add_row({T, "sigma_over_half_T", format_number(r.sigma / (0.5 * r.horizon))});
    t.add_row({T, "expected_s2", format_number(r.expected_s2)});
    t.add_row({T, "expected_s2_times_T", format_number(r.expected_s2 * r.horizon)});
    t.add_row({T, "rate", format_number(r.rate)});
    t.add_row({T, "deviation", format_number(r.deviation)});
  }
  return t;
}

}  // namespace lea
