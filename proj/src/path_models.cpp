#include "lea/path_models.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lea {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed derive_seed(Seed seed, std::uint64_t stream) noexcept {
  return Seed{mix64(seed.value ^ mix64(stream + 0x9e3779b97f4a7c15ULL))};
}

double Deterministic::operator()(double t) const noexcept {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::constant: return value;
    case Kind::linear: return slope * t;
    case Kind::cosine: return amplitude * std::cos(omega * t);
  }
  return 0.0;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// The FFTW planner is not re-entrant; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class ComplexFft {
 public:
  explicit ComplexFft(std::size_t m) : m_(m) {
    in_ = fftw_alloc_complex(m);
    out_ = fftw_alloc_complex(m);
    if (!in_ || !out_) {
      release();
      throw std::bad_alloc();
    }
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(m), in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;
  ~ComplexFft() { release(); }

  std::complex<double>* input() { return reinterpret_cast<std::complex<double>*>(in_); }
  const std::complex<double>* output() const {
    return reinterpret_cast<const std::complex<double>*>(out_);
  }
  void execute() { fftw_execute(plan_); }

 private:
  void release() {
    std::lock_guard lock(fftw_planner_mutex());
    if (plan_) fftw_destroy_plan(plan_);
    if (in_) fftw_free(in_);
    if (out_) fftw_free(out_);
    plan_ = nullptr;
    in_ = out_ = nullptr;
  }

  std::size_t m_;
  fftw_complex* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

// Autocovariance of fractional Gaussian noise at lag k, unit step.
double fgn_autocov(double hurst, std::size_t k) {
  const double h2 = 2.0 * hurst;
  const double kd = static_cast<double>(k);
  return 0.5 * (std::pow(kd + 1.0, h2) - 2.0 * std::pow(kd, h2) + std::pow(std::abs(kd - 1.0), h2));
}

// N increments of fBm with unit step via circulant embedding. The embedding
// is doubled up to kMaxAugment times if it is not nonnegative definite.
std::vector<double> fgn_increments(double hurst, std::size_t count, std::mt19937_64& rng) {
  constexpr int kMaxAugment = 4;
  std::size_t half = count;
  for (int attempt = 0; attempt <= kMaxAugment; ++attempt, half *= 2) {
    const std::size_t m = 2 * half;
    ComplexFft fft(m);
    auto* c = fft.input();
    for (std::size_t j = 0; j <= half; ++j) c[j] = fgn_autocov(hurst, j);
    for (std::size_t j = half + 1; j < m; ++j) c[j] = c[m - j];
    fft.execute();

    std::vector<double> lambda(m);
    double lambda_max = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < m; ++k) lambda_max = std::max(lambda_max, fft.output()[k].real());
    for (std::size_t k = 0; k < m; ++k) {
      double l = fft.output()[k].real();
      if (l < 0.0) {
        if (l < -1e-10 * lambda_max) {
          ok = false;
          break;
        }
        l = 0.0;
      }
      lambda[k] = l;
    }
    if (!ok) continue;

    std::normal_distribution<double> normal(0.0, 1.0);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double a = std::sqrt(lambda[k] * inv_m);
      const double re = normal(rng);
      const double im = normal(rng);
      c[k] = std::complex<double>(a * re, a * im);
    }
    fft.execute();
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) out[j] = fft.output()[j].real();
    return out;
  }
  std::ostringstream msg;
  msg << "circulant embedding is not nonnegative definite for H = " << hurst
      << ", n = " << count + 1;
  throw std::runtime_error(msg.str());
}

std::vector<double> levy_increments(const Levy& p, std::size_t count, double dt,
                                    std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::poisson_distribution<long> poisson(p.jump_rate * dt);
  const double sd = p.diffusion_sd * std::sqrt(dt);
  const double compensator = p.centered ? p.jump_rate * p.jump_mean * dt : 0.0;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    double dx = p.drift * dt - compensator;
    if (sd > 0.0) dx += sd * normal(rng);
    if (p.jump_rate > 0.0) {
      const long k = poisson(rng);
      if (k > 0) {
        const double kd = static_cast<double>(k);
        dx += kd * p.jump_mean;
        if (p.jump_var > 0.0) dx += std::sqrt(kd * p.jump_var) * normal(rng);
      }
    }
    out[i] = dx;
  }
  return out;
}

SamplePath anchored_cumsum(const Grid& grid, const std::vector<double>& increments) {
  std::vector<double> v(grid.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = v[i - 1] + increments[i - 1];
  if (auto i0 = grid.index_of(0.0)) {
    const double b0 = v[*i0];
    for (double& x : v) x -= b0;
    v[*i0] = 0.0;
  }
  return SamplePath(grid, std::move(v));
}

}  // namespace

void validate(const ProcessSpec& spec) {
  std::visit(overloaded{
                 [](const Wiener&) {},
                 [](const Fbm& f) {
                   if (!(f.hurst > 0.0 && f.hurst < 1.0)) {
                     throw std::invalid_argument("fBm requires 0 < H < 1, got H = " +
                                                 std::to_string(f.hurst));
                   }
                 },
                 [](const Levy& l) {
                   if (!std::isfinite(l.drift) || !std::isfinite(l.jump_mean) ||
                       !(l.diffusion_sd >= 0.0) || !(l.jump_rate >= 0.0) ||
                       !(l.jump_var >= 0.0) || !std::isfinite(l.diffusion_sd) ||
                       !std::isfinite(l.jump_rate) || !std::isfinite(l.jump_var)) {
                     throw std::invalid_argument(
                         "Levy spec needs finite drift/jump moments and nonnegative "
                         "diffusion, rate and jump variance");
                   }
                 },
                 [](const Deterministic& d) {
                   if (!std::isfinite(d.value) || !std::isfinite(d.slope) ||
                       !std::isfinite(d.omega) || !std::isfinite(d.amplitude)) {
                     throw std::invalid_argument("deterministic spec has non-finite parameters");
                   }
                 },
             },
             spec);
}

std::string describe(const ProcessSpec& spec) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Wiener&) { os << "wiener"; },
                 [&](const Fbm& f) { os << "fbm(H=" << f.hurst << ")"; },
                 [&](const Levy& l) {
                   os << "levy(drift=" << l.drift << ",sd=" << l.diffusion_sd
                      << ",rate=" << l.jump_rate << ",jump_mean=" << l.jump_mean
                      << ",jump_var=" << l.jump_var << (l.centered ? ",centered" : "") << ")";
                 },
                 [&](const Deterministic& d) {
                   switch (d.kind) {
                     case Deterministic::Kind::zero: os << "zero"; break;
                     case Deterministic::Kind::constant: os << "constant(" << d.value << ")"; break;
                     case Deterministic::Kind::linear: os << "linear(" << d.slope << ")"; break;
                     case Deterministic::Kind::cosine:
                       os << "cosine(omega=" << d.omega << ",amplitude=" << d.amplitude << ")";
                       break;
                   }
                 },
             },
             spec);
  return os.str();
}

SamplePath simulate(const ProcessSpec& spec, const Grid& grid, Seed seed) {
  validate(spec);
  const std::size_t count = grid.size() - 1;
  const double dt = grid.step();
  std::mt19937_64 rng(derive_seed(seed, 0).value);

  return std::visit(
      overloaded{
          [&](const Wiener&) {
            std::normal_distribution<double> normal(0.0, std::sqrt(dt));
            std::vector<double> inc(count);
            for (double& x : inc) x = normal(rng);
            return anchored_cumsum(grid, inc);
          },
          [&](const Fbm& f) {
            std::vector<double> inc = fgn_increments(f.hurst, count, rng);
            const double scale = std::pow(dt, f.hurst);
            for (double& x : inc) x *= scale;
            return anchored_cumsum(grid, inc);
          },
          [&](const Levy& l) { return anchored_cumsum(grid, levy_increments(l, count, dt, rng)); },
          [&](const Deterministic& d) {
            std::vector<double> v(grid.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = d(grid[i]);
            return SamplePath(grid, std::move(v));
          },
      },
      spec);
}

SamplePath extend_by_zero(const SamplePath& path, double new_start) {
  const Grid& g = path.grid();
  if (new_start > g.start()) {
    throw std::invalid_argument("extend_by_zero: new start lies after the path start");
  }
  const double shift = (g.start() - new_start) / g.step();
  const double k = std::round(shift);
  if (std::abs(shift - k) > 1e-6) {
    throw std::invalid_argument("extend_by_zero: new start " + std::to_string(new_start) +
                                " is not aligned with the grid step");
  }
  const auto pad = static_cast<std::size_t>(k);
  std::vector<double> v(pad + path.size(), 0.0);
  std::copy(path.values().begin(), path.values().end(), v.begin() + static_cast<std::ptrdiff_t>(pad));
  Grid grid(g.start() - static_cast<double>(pad) * g.step(), g.step(), v.size());
  return SamplePath(std::move(grid), std::move(v));
}

SamplePath two_sided(const ProcessSpec& spec, const Grid& grid, Seed seed) {
  validate(spec);
  const std::size_t i0 = grid.require_index(0.0);
  if (std::holds_alternative<Deterministic>(spec) || i0 == 0) {
    return simulate(spec, grid, seed);
  }
  const std::size_t n = grid.size();
  std::vector<double> v(n, 0.0);
  if (i0 + 1 < n) {
    SamplePath pos = simulate(spec, Grid(0.0, grid.step(), n - i0), seed);
    for (std::size_t k = 0; k < pos.size(); ++k) v[i0 + k] = pos[k];
  }
  SamplePath neg = simulate(spec, Grid(0.0, grid.step(), i0 + 1), derive_seed(seed, 1));
  for (std::size_t k = 1; k <= i0; ++k) v[i0 - k] = -neg[k];
  v[i0] = 0.0;
  return SamplePath(grid, std::move(v));
}

}  // namespace lea
