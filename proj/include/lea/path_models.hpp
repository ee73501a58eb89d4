#pragma once

// Sampled paths of processes with stationary increments.
//
// Supported families:
//   Wiener         standard Brownian motion, Var B(t) = |t|
//   Fbm(H)         fractional Brownian motion, Var B(t) = |t|^{2H}, exact
//                  covariance synthesis by circulant embedding of the
//                  fractional Gaussian noise autocovariance
//   Levy           drift * t + diffusion_sd * W(t) + compound Poisson with
//                  N(jump_mean, jump_var) jumps; optionally compensated
//   Deterministic  zero, constant, linear or cosine functions of t
//
// Random paths are anchored so that B(0) = 0 whenever 0 is a grid point
// (otherwise B(start) = 0). Deterministic paths are evaluated as given.

#include <cstdint>
#include <string>
#include <variant>

#include "lea/grid.hpp"

namespace lea {

struct Seed {
  std::uint64_t value = 0;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Substream seed: mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15)).
// Used for replica seeds and for the independent half of two-sided paths.
Seed derive_seed(Seed seed, std::uint64_t stream) noexcept;

struct Wiener {};

struct Fbm {
  double hurst = 0.5;
};

struct Levy {
  double drift = 0.0;
  double diffusion_sd = 0.0;
  double jump_rate = 0.0;
  double jump_mean = 0.0;
  double jump_var = 0.0;
  bool centered = false;

  double mean_at_one() const noexcept {
    return drift + (centered ? 0.0 : jump_rate * jump_mean);
  }
  double var_at_one() const noexcept {
    return diffusion_sd * diffusion_sd + jump_rate * (jump_var + jump_mean * jump_mean);
  }
};

struct Deterministic {
  enum class Kind { zero, constant, linear, cosine };
  Kind kind = Kind::zero;
  double value = 0.0;      // constant level
  double slope = 0.0;      // linear slope d
  double omega = 1.0;      // cosine frequency
  double amplitude = 1.0;  // cosine amplitude

  double operator()(double t) const noexcept;
};

using ProcessSpec = std::variant<Wiener, Fbm, Levy, Deterministic>;

// Throws std::invalid_argument when the spec violates its invariants.
void validate(const ProcessSpec& spec);

std::string describe(const ProcessSpec& spec);

// Deterministic given (spec, grid, seed).
SamplePath simulate(const ProcessSpec& spec, const Grid& grid, Seed seed);

// Prepends zeros on [new_start, path.start).
SamplePath extend_by_zero(const SamplePath& path, double new_start);

// Path on a grid containing 0. The part on t >= 0 equals simulate() on
// [0, end] with the same seed; for t < 0, -B(-t) is an independent copy
// drawn from derive_seed(seed, 1).
SamplePath two_sided(const ProcessSpec& spec, const Grid& grid, Seed seed);

}  // namespace lea
