#pragma once

// Per-step wall-time measurements versus Hilbert-space dimension and
// log-log scaling fits.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcsplit/basis.hpp"

namespace tcsplit {

enum class BenchMethod { Exp, Linear, Dense };

std::string_view to_string(BenchMethod method);
BenchMethod parse_bench_method(std::string_view name);

struct BenchSample {
  BenchMethod method = BenchMethod::Linear;
  std::size_t dimension = 0;
  int n_cavity = 0;
  int two_j = 0;
  double step_time_ns_median = 0.0;
  double precompute_ms = 0.0;
  int reps = 0;
  int warmup = 0;
  std::size_t steps_per_rep = 0;
  bool skipped = false;
  std::string note;
};

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;  // natural log of the prefactor
  double r_squared = 0.0;
  std::size_t points = 0;
  double decades = 0.0;  // log10(D_max / D_min)
};

struct SweepSpec {
  std::vector<std::size_t> dimensions;  // targets; rounded to square systems
  std::vector<BenchMethod> methods{BenchMethod::Linear, BenchMethod::Exp};
  int reps = 7;
  int warmup = 2;
  double dt = 1e-4;
  double min_rep_seconds = 2e-3;
  std::size_t dense_limit = 1024;  // dense steps are O(D^3); stay well inside the oracle guard
  std::size_t exp_memory_limit_bytes = std::size_t{3} << 30;
  ModelParams frequencies;  // n_cavity / two_j are overwritten per point
};

/// 2 pi x (2.4, 3.6, 0.01, 1.0, 6.0) GHz for (omega_c, omega_s, g, Lambda, omega), in rad/ns.
/// The drive is resonant: omega_c + omega_s = omega.
ModelParams default_frequencies();

/// `target` rounded to the square system N_c = 2J + 1 = L, L = round(sqrt(target)).
ModelParams square_system(const ModelParams& frequencies, std::size_t target);

/// `count` log-spaced targets between lo and hi inclusive.
std::vector<std::size_t> log_spaced(double lo, double hi, int count);

/// Parses "d=1e3:1e5:6;methods=linear,exp;reps=7;warmup=2;dt=1e-4".
/// `d=lo:hi:count` or `d=1000,2000,...`; only `d` is required.
SweepSpec parse_sweep(std::string_view text);

/// Times one Strang step (or one dense midpoint substep) per swept dimension.
/// Precompute time is measured separately. Samples that do not fit in memory
/// or exceed the dense limit are returned with skipped = true.
std::vector<BenchSample> time_single_step(BenchMethod method, const SweepSpec& spec);

/// Least squares of log(time) on log(D) over the non-skipped samples.
/// Throws UsageError with fewer than 5 distinct dimensions.
ScalingFit fit_scaling(std::span<const BenchSample> samples);

void write_bench_csv(const std::filesystem::path& path, std::span<const BenchSample> samples);

}  // namespace tcsplit
