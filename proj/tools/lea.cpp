// lea: least-energy approximation experiments.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lea/csv.hpp"
#include "lea/energy_constants.hpp"
#include "lea/exact_solver.hpp"
#include "lea/experiments.hpp"
#include "lea/kl_wiener.hpp"
#include "lea/path_models.hpp"
#include "lea/stationary_filter.hpp"

namespace {

struct Options {
  std::string process = "wiener";
  double hurst = 0.5;
  double rate = 1.0;
  double jump_mean = 1.0;
  double jump_var = 0.0;
  bool centered = false;
  double drift = 0.0;
  double diffusion = 0.0;
  double value = 1.0;
  double omega = 1.0;
  double amplitude = 1.0;
  std::vector<double> horizons{50.0};
  double dt = 0.01;
  std::size_t replicas = 200;
  std::uint64_t seed = 1;
  double kappa = 1.0;
  std::string extension = "zero";
  std::string out = "-";
  std::size_t workers = 0;
  std::size_t max_points = 20'000'000;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw std::invalid_argument(std::string("bad ") + what + " value '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string("empty ") + what + " list");
  return out;
}

lea::ProcessSpec make_process(const Options& o) {
  using lea::Deterministic;
  if (o.process == "wiener") return lea::Wiener{};
  if (o.process == "fbm") return lea::Fbm{o.hurst};
  if (o.process == "levy") {
    return lea::Levy{o.drift, o.diffusion, o.rate, o.jump_mean, o.jump_var, o.centered};
  }
  Deterministic d;
  if (o.process == "linear") {
    d.kind = Deterministic::Kind::linear;
    d.slope = o.drift;
  } else if (o.process == "constant") {
    d.kind = Deterministic::Kind::constant;
    d.value = o.value;
  } else if (o.process == "cosine") {
    d.kind = Deterministic::Kind::cosine;
    d.omega = o.omega;
    d.amplitude = o.amplitude;
  } else if (o.process == "zero") {
    d.kind = Deterministic::Kind::zero;
  } else {
    throw std::invalid_argument("unknown process '" + o.process + "'");
  }
  return d;
}

lea::ExperimentConfig make_config(const Options& o) {
  lea::ExperimentConfig c;
  c.process = make_process(o);
  c.horizons = o.horizons;
  c.step = o.dt;
  c.replicas = o.replicas;
  c.seed = lea::Seed{o.seed};
  c.kappa = lea::Kappa{o.kappa};
  c.extension = o.extension == "zero" ? lea::Extension::zero : lea::Extension::two_sided;
  c.output = o.out;
  c.workers = o.workers;
  c.max_points = o.max_points;
  return c;
}

lea::CsvTable plot_data(const lea::Grid& g, std::span<const double> values, const std::string& note) {
  lea::CsvTable t({"t", "value"});
  t.comment(note);
  for (std::size_t i = 0; i < g.size(); ++i) {
    t.add_row({lea::format_number(g[i]), lea::format_number(values[i])});
  }
  return t;
}

std::string describe_run(const Options& o, const lea::ExperimentConfig& c) {
  std::ostringstream os;
  os << "process=" << lea::describe(c.process) << " T=";
  for (std::size_t i = 0; i < c.horizons.size(); ++i) {
    os << (i ? ";" : "") << lea::format_number(c.horizons[i]);
  }
  os << " dt="
     << lea::format_number(c.step) << " seed=" << c.seed.value
     << " kappa=" << lea::format_number(c.kappa.value()) << " extension=" << o.extension;
  return os.str();
}

int run_simulate(const Options& o) {
  const lea::ExperimentConfig c = make_config(o);
  validate(c);
  const double horizon = c.horizons.back();
  const lea::SamplePath path =
      c.extension == lea::Extension::zero
          ? lea::simulate(c.process, lea::Grid::spanning(0.0, horizon, c.step), c.seed)
          : lea::two_sided(c.process, lea::Grid::spanning(-horizon, horizon, c.step), c.seed);
  lea::write_table(plot_data(path.grid(), path.values(), "simulate " + describe_run(o, c)), c.output);
  return 0;
}

int run_approx(const Options& o, const std::string& method, const std::string& series,
               std::size_t order) {
  const lea::ExperimentConfig c = make_config(o);
  validate(c);
  const double horizon = c.horizons.back();
  const lea::Grid grid = lea::Grid::spanning(0.0, horizon, c.step);
  const lea::SamplePath path = lea::simulate(c.process, grid, c.seed);

  lea::ApproximationResult result{grid, {}, {}, lea::Method::bvp, c.kappa.value()};
  if (method == "bvp") {
    result = lea::solve_bvp(path, c.kappa);
  } else if (method == "closed-form") {
    result = lea::solve_closed_form(path, c.kappa);
  } else if (method == "stationary") {
    const double margin = std::ceil(40.0 / c.kappa.value() / c.step) * c.step;
    const lea::SamplePath full =
        c.extension == lea::Extension::zero
            ? lea::extend_by_zero(
                  lea::simulate(c.process, lea::Grid::spanning(0.0, horizon + margin, c.step), c.seed),
                  -margin)
            : lea::two_sided(c.process, lea::Grid::spanning(-margin, horizon + margin, c.step), c.seed);
    result = lea::smooth(full, c.kappa).restrict(0.0, horizon);
  } else if (method == "kl") {
    if (!std::holds_alternative<lea::Wiener>(c.process) || c.kappa.value() != 1.0) {
      throw std::invalid_argument("--method kl needs --process wiener and kappa 1");
    }
    // W̃(τ) = W(Tτ)/√T on [0, 1]; f(t) = √T f̃(t/T).
    const double root = std::sqrt(horizon);
    std::vector<double> scaled(path.values().begin(), path.values().end());
    for (double& v : scaled) v /= root;
    const lea::SamplePath unit(lea::Grid(0.0, c.step / horizon, grid.size()), std::move(scaled));
    const std::size_t j = order > 0 ? order : std::min<std::size_t>(grid.size(), 4000);
    lea::KLSolution kl = lea::kl_solve(unit, horizon, j);
    if (kl.under_resolved) std::cerr << "lea: warning: KL expansion under-resolved\n";
    result = lea::ApproximationResult{grid, std::move(kl.result.f), std::move(kl.result.f_prime),
                                      lea::Method::karhunen_loeve, 1.0};
    for (double& v : result.f) v *= root;
    for (double& v : result.f_prime) v /= root;
  } else {
    throw std::invalid_argument("unknown method '" + method + "'");
  }

  std::span<const double> values;
  if (series == "f") {
    values = result.f;
  } else if (series == "f_prime") {
    values = result.f_prime;
  } else if (series == "path") {
    values = path.values();
  } else {
    throw std::invalid_argument("unknown series '" + series + "'");
  }
  const lea::EnergyBreakdown e = lea::energy(result, path);
  lea::CsvTable t = plot_data(grid, values,
                              "approx method=" + method + " series=" + series + " " + describe_run(o, c));
  t.comment("energy=" + lea::format_number(e.total) + " rate=" + lea::format_number(e.rate));
  lea::write_table(t, c.output);
  return 0;
}

int run_constants(const Options& o, const std::string& hurst_list) {
  std::vector<lea::ModelSpec> models;
  for (double h : parse_list(hurst_list, "--H-list")) {
    lea::ModelSpec m;
    m.family = lea::ModelSpec::Family::fbm;
    m.hurst = h;
    models.push_back(m);
  }
  lea::ModelSpec levy;
  levy.family = lea::ModelSpec::Family::levy;
  if (o.process == "levy") {
    const lea::Levy l{o.drift, o.diffusion, o.rate, o.jump_mean, o.jump_var, o.centered};
    levy.mean_b1 = l.mean_at_one();
    levy.var_b1 = l.var_at_one();
  }
  models.push_back(levy);
  lea::write_table(lea::to_csv(lea::constants_table(models, lea::Kappa{o.kappa})), o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-energy approximation of processes with stationary increments"};
  app.name("lea");
  app.set_version_flag("--version", std::string(lea::kVersion));
  app.set_config("--config", "", "flat key=value file mirroring the long flags; flags win");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--process", o.process, "wiener|fbm|levy|linear|constant|cosine|zero")
      ->check(CLI::IsMember({"wiener", "fbm", "levy", "linear", "constant", "cosine", "zero"}));
  app.add_option("--hurst", o.hurst, "fBm Hurst index H in (0, 1)");
  app.add_option("--rate", o.rate, "Levy jump rate");
  app.add_option("--jump-mean", o.jump_mean, "Levy jump mean");
  app.add_option("--jump-var", o.jump_var, "Levy jump variance");
  app.add_flag("--centered", o.centered, "compensate the Levy jumps");
  app.add_option("--drift", o.drift, "slope (linear) or drift (levy)");
  app.add_option("--diffusion", o.diffusion, "Levy Brownian standard deviation");
  app.add_option("--value", o.value, "level of the constant process");
  app.add_option("--omega", o.omega, "cosine frequency");
  app.add_option("--amplitude", o.amplitude, "cosine amplitude");
  app.add_option("--T", o.horizons, "comma-separated horizons")->delimiter(',');
  app.add_option("--dt", o.dt, "grid step");
  app.add_option("--replicas", o.replicas, "Monte Carlo replicas");
  app.add_option("--seed", o.seed, "base seed");
  app.add_option("--kappa", o.kappa, "viscosity constant");
  app.add_option("--extension", o.extension, "extension to negative time: zero|two-sided")
      ->check(CLI::IsMember({"zero", "two-sided"}));
  app.add_option("--out", o.out, "output file, - for stdout");
  app.add_option("--workers", o.workers, "worker threads, 0 for all cores");
  app.add_option("--max-points", o.max_points, "largest grid allowed for one path");

  auto* sim = app.add_subcommand("simulate", "sample one path as (t, value)");
  auto* approx = app.add_subcommand("approx", "least-energy approximation of one path");
  std::string method = "bvp", series = "f";
  std::size_t order = 0;
  approx->add_option("--method", method, "bvp|closed-form|stationary|kl")
      ->check(CLI::IsMember({"bvp", "closed-form", "stationary", "kl"}));
  approx->add_option("--series", series, "f|f_prime|path")
      ->check(CLI::IsMember({"f", "f_prime", "path"}));
  approx->add_option("--J", order, "KL truncation order (kl method)");
  auto* sweep = app.add_subcommand("energy-sweep", "Monte Carlo mean energy rate per horizon");
  auto* conv = app.add_subcommand("as-converge", "energy rates of one path at T_k = a^k");
  double base = 1.5;
  conv->add_option("--checkpoint-base", base, "checkpoint ratio a > 1");
  auto* cmp = app.add_subcommand("compare", "bvp vs closed form vs stationary filter");
  lea::CompareOptions copts;
  cmp->add_option("--growth-p", copts.growth_p, "growth exponent p of |B(s)| <= C(|s|+1)^p");
  auto* cst = app.add_subcommand("constants", "rate constants by every route");
  std::string hurst_list = "0.1,0.2,0.25,0.3,0.4,0.5,0.6,0.7,0.75,0.8,0.9";
  cst->add_option("--H-list", hurst_list, "comma-separated Hurst indices");
  auto* kl = app.add_subcommand("kl", "Wiener expected energy from the KL expansion");
  std::size_t kl_order = 1'000'000;
  kl->add_option("--J", kl_order, "truncation order, 0 for automatic");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_simulate(o);
    if (approx->parsed()) return run_approx(o, method, series, order);
    if (sweep->parsed()) {
      const lea::ExperimentConfig c = make_config(o);
      lea::write_table(lea::to_csv(lea::mc_energy_rate(c), c), c.output);
    } else if (conv->parsed()) {
      const lea::ExperimentConfig c = make_config(o);
      const auto run = lea::as_convergence(c, base, c.horizons.back());
      lea::write_table(lea::to_csv(run, c, base), c.output);
    } else if (cmp->parsed()) {
      const lea::ExperimentConfig c = make_config(o);
      lea::write_table(lea::to_csv(lea::compare_solvers(c, copts), c), c.output);
    } else if (cst->parsed()) {
      return run_constants(o, hurst_list);
    } else if (kl->parsed()) {
      lea::write_table(lea::to_csv(lea::kl_report(o.horizons, kl_order)), o.out);
    }
  } catch (const std::exception& e) {
    std::cerr << "lea: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
