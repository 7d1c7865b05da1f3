#include "tcsplit/bench.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <new>
#include <numbers>
#include <set>

#include "tcsplit/errors.hpp"
#include "tcsplit/propagator.hpp"
#include "tcsplit/reference.hpp"

namespace tcsplit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("sweep: not a number: '" + std::string(s) + "'");
  }
  return v;
}

// Steps per repetition so that a repetition lasts at least min_seconds.
template <typename Step>
std::vector<double> time_reps(Step&& step, int warmup, int reps, double min_seconds,
                              std::size_t& steps_per_rep) {
  auto start = Clock::now();
  step();
  const double one = std::max(seconds_since(start), 1e-9);
  steps_per_rep = static_cast<std::size_t>(std::max(1.0, std::ceil(min_seconds / one)));
  for (int w = 0; w < warmup; ++w) {
    for (std::size_t k = 0; k < steps_per_rep; ++k) step();
  }
  std::vector<double> per_step;
  per_step.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    start = Clock::now();
    for (std::size_t k = 0; k < steps_per_rep; ++k) step();
    per_step.push_back(seconds_since(start) * 1e9 / static_cast<double>(steps_per_rep));
  }
  return per_step;
}

// Complex entries of both block-exponential sets for a square-ish system.
std::size_t exp_bytes_estimate(const ModelParams& p) {
  const auto states = enumerate_basis(p);
  std::size_t entries = 0;
  for (const auto& basis : {order_for_h0(states), order_for_v(states)}) {
    for (const auto& b : basis.blocks()) entries += b.size() * b.size();
  }
  return entries * sizeof(Complex);
}

}  // namespace

std::string_view to_string(BenchMethod method) {
  switch (method) {
    case BenchMethod::Exp: return "exp";
    case BenchMethod::Linear: return "linear";
    case BenchMethod::Dense: return "dense";
  }
  return "?";
}

BenchMethod parse_bench_method(std::string_view name) {
  if (name == "exp") return BenchMethod::Exp;
  if (name == "linear") return BenchMethod::Linear;
  if (name == "dense") return BenchMethod::Dense;
  throw ConfigError("unknown bench method '" + std::string(name) + "'");
}

ModelParams default_frequencies() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ModelParams p;
  p.omega_c = two_pi * 2.4;
  p.omega_s = two_pi * 3.6;
  p.g = two_pi * 0.01;
  p.lambda = two_pi * 1.0;
  p.omega_drive = two_pi * 6.0;
  return p;
}

ModelParams square_system(const ModelParams& frequencies, std::size_t target) {
  ModelParams p = frequencies;
  const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(target)))));
  p.n_cavity = side;
  p.two_j = side - 1;
  return p;
}

std::vector<std::size_t> log_spaced(double lo, double hi, int count) {
  if (!(lo >= 1.0) || !(hi >= lo) || count < 1) throw ConfigError("sweep: bad range");
  std::vector<std::size_t> out;
  for (int k = 0; k < count; ++k) {
    const double f = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    out.push_back(static_cast<std::size_t>(std::llround(lo * std::pow(hi / lo, f))));
  }
  return out;
}

SweepSpec parse_sweep(std::string_view text) {
  SweepSpec spec;
  spec.frequencies = default_frequencies();
  bool have_d = false;
  for (auto field : split(text, ';')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw ConfigError("sweep: expected key=value, got '" + std::string(field) + "'");
    const auto key = trim(field.substr(0, eq));
    const auto value = trim(field.substr(eq + 1));
    if (key == "d") {
      have_d = true;
      if (value.find(':') != std::string_view::npos) {
        const auto parts = split(value, ':');
        if (parts.size() != 3) throw ConfigError("sweep: d=lo:hi:count");
        spec.dimensions = log_spaced(to_number(parts[0]), to_number(parts[1]),
                                     static_cast<int>(to_number(parts[2])));
      } else {
        spec.dimensions.clear();
        for (auto v : split(value, ',')) spec.dimensions.push_back(static_cast<std::size_t>(to_number(v)));
      }
    } else if (key == "methods") {
      spec.methods.clear();
      for (auto m : split(value, ',')) spec.methods.push_back(parse_bench_method(m));
    } else if (key == "reps") {
      spec.reps = static_cast<int>(to_number(value));
    } else if (key == "warmup") {
      spec.warmup = static_cast<int>(to_number(value));
    } else if (key == "dt") {
      spec.dt = to_number(value);
    } else {
      throw ConfigError("sweep: unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_d || spec.dimensions.empty()) throw ConfigError("sweep: missing d=...");
  if (spec.reps < 5) throw ConfigError("sweep: reps must be >= 5");
  if (spec.warmup < 2) throw ConfigError("sweep: warmup must be >= 2");
  if (!(spec.dt > 0.0)) throw ConfigError("sweep: dt must be > 0");
  return spec;
}

std::vector<BenchSample> time_single_step(BenchMethod method, const SweepSpec& spec) {
  std::vector<BenchSample> out;
  std::set<std::size_t> seen;
  for (const std::size_t target : spec.dimensions) {
    const ModelParams p = square_system(spec.frequencies, target);
    const std::size_t d = p.dimension();
    if (!seen.insert(d).second) continue;

    BenchSample s;
    s.method = method;
    s.dimension = d;
    s.n_cavity = p.n_cavity;
    s.two_j = p.two_j;
    s.reps = spec.reps;
    s.warmup = spec.warmup;

    if (method == BenchMethod::Dense && d > spec.dense_limit) {
      s.skipped = true;
      s.note = "dense limit";
      out.push_back(s);
      continue;
    }
    if (method == BenchMethod::Exp && exp_bytes_estimate(p) > spec.exp_memory_limit_bytes) {
      s.skipped = true;
      s.note = "exp memory limit";
      out.push_back(s);
      continue;
    }

    try {
      std::vector<double> times;
      if (method == BenchMethod::Dense) {
        auto start = Clock::now();
        const DenseHamiltonian h = dense_build(p);
        s.precompute_ms = seconds_since(start) * 1e3;
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
        psi(0) = 1.0;
        double t = 0.0;
        times = time_reps(
            [&] {
              psi = dense_propagate(h, psi, t, 1, spec.dt).final_state;
              t += spec.dt;
            },
            spec.warmup, spec.reps, spec.min_rep_seconds, s.steps_per_rep);
      } else {
        const PropagatorPlan plan =
            make_plan(p, spec.dt, method == BenchMethod::Exp ? Method::Exp : Method::Linear);
        s.precompute_ms = plan.precompute_seconds * 1e3;
        StateVector psi = initial_state(plan);
        StepWorkspace ws;
        double t = 0.0;
        times = time_reps(
            [&] {
              strang_step(psi, t, plan, ws);
              t += spec.dt;
            },
            spec.warmup, spec.reps, spec.min_rep_seconds, s.steps_per_rep);
      }
      s.step_time_ns_median = median(times);
    } catch (const std::bad_alloc&) {
      s.skipped = true;
      s.note = "out of memory";
    }
    out.push_back(s);
  }
  return out;
}

ScalingFit fit_scaling(std::span<const BenchSample> samples) {
  std::map<std::size_t, double> points;
  for (const auto& s : samples) {
    if (s.skipped || !(s.step_time_ns_median > 0.0)) continue;
    points[s.dimension] = s.step_time_ns_median;
  }
  if (points.size() < 5) {
    throw UsageError("fit_scaling needs at least 5 distinct dimensions, got " +
                     std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [d, t] : points) {
    const double x = std::log(static_cast<double>(d));
    const double y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  ScalingFit fit;
  fit.points = points.size();
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.exponent * sx) / n;
  const double mean_y = sy / n;
  double ss_tot = 0, ss_res = 0;
  for (const auto& [d, t] : points) {
    const double x = std::log(static_cast<double>(d));
    const double y = std::log(t);
    ss_tot += (y - mean_y) * (y - mean_y);
    const double r = y - (fit.intercept + fit.exponent * x);
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.decades = std::log10(static_cast<double>(points.rbegin()->first) /
                           static_cast<double>(points.begin()->first));
  return fit;
}

void write_bench_csv(const std::filesystem::path& path, std::span<const BenchSample> samples) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "method,D,n_cavity,two_J,step_time_ns_median,precompute_ms,reps\n";
  out << std::setprecision(17);
  for (const auto& s : samples) {
    out << to_string(s.method) << ',' << s.dimension << ',' << s.n_cavity << ',' << s.two_j << ',';
    if (s.skipped) {
      out << "nan,nan,";
    } else {
      out << s.step_time_ns_median << ',' << s.precompute_ms << ',';
    }
    out << s.reps << '\n';
  }
}

}  // namespace tcsplit
