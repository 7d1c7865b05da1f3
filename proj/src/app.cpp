#include "tcsplit/app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <array>
#include <sstream>

#include "json.hpp"
#include "tcsplit/errors.hpp"
#include "tcsplit/propagator.hpp"
#include "tcsplit/reference.hpp"

namespace tcsplit {

namespace {

Method to_method(RunMethod m) { return m == RunMethod::Exp ? Method::Exp : Method::Linear; }

// Signed drift of the step in (prev, step] with the largest magnitude.
double window_drift(const std::vector<double>& norms, std::size_t prev, std::size_t step) {
  double worst = 0.0;
  for (std::size_t k = prev; k < step; ++k) {
    const double d = norms[k] - 1.0;
    if (std::abs(d) > std::abs(worst)) worst = d;
  }
  return worst;
}

TrajectoryRecord simulate_split(const RunConfig& c) {
  const PropagatorPlan plan = make_plan(c.params, c.dt, to_method(c.method));
  const CavityIndexMap map(plan.h0_basis);
  TrajectoryRecord rec;
  const StateVector psi0 = initial_state(plan);
  rec.rows.push_back(measure(psi0, map, plan.jz));

  std::vector<std::size_t> sampled;
  const Trajectory traj = propagate(psi0, 0.0, c.n_steps, plan,
                                    [&](std::size_t step, double t, const StateVector& psi) {
                                      if (step % c.stride != 0) return;
                                      ObservableRow row = measure(psi, map, plan.jz);
                                      row.t = t;
                                      rec.rows.push_back(row);
                                      sampled.push_back(step);
                                    });
  std::size_t prev = 0;
  for (std::size_t k = 0; k < sampled.size(); ++k) {
    rec.rows[k + 1].pre_renorm_norm_drift = window_drift(traj.pre_renorm_norms, prev, sampled[k]);
    prev = sampled[k];
  }
  return rec;
}

TrajectoryRecord simulate_dense(const RunConfig& c) {
  const DenseHamiltonian h = dense_build(c.params);
  const auto states = enumerate_basis(c.params);
  const OrderedBasis basis = order_for_h0(states);
  const CavityIndexMap map(basis);
  const JzDiagonal jz = build_jz(basis);

  StateVector psi0;
  psi0.amplitudes.assign(basis.size(), Complex{});
  psi0.amplitudes[basis.position_of({0, -c.params.two_j})] = 1.0;

  TrajectoryRecord rec;
  rec.rows.push_back(measure(psi0, map, jz));
  dense_propagate(h, to_canonical(psi0, basis), 0.0, c.n_steps, c.dt,
                  [&](std::size_t step, double t, const Eigen::VectorXcd& psi) {
                    if (step % c.stride != 0) return;
                    const StateVector s = from_canonical(psi, basis);
                    ObservableRow row = measure(s, map, jz);
                    row.t = t;
                    row.pre_renorm_norm_drift = s.norm() - 1.0;
                    rec.rows.push_back(row);
                  });
  return rec;
}

TrajectoryRecord simulate_hp(const RunConfig& c) {
  std::vector<double> grid;
  for (std::size_t step = 0; step <= c.n_steps; step += c.stride) {
    grid.push_back(static_cast<double>(step) * c.dt);
  }
  TrajectoryRecord rec;
  for (const HpSample& s : hp_covariance_propagate(c.params, grid, 0.25 * c.dt)) {
    ObservableRow row;
    row.t = s.t;
    row.lambda_minus = s.lambda_minus;
    row.lambda_plus = s.lambda_plus;
    row.mean_photon = s.mean_photon;
    row.jz_expect = s.spin_excitations - c.params.spin();
    rec.rows.push_back(row);
  }
  return rec;
}

double parse_field(std::string_view s, int line) {
  double v = 0.0;
  if (s == "nan") return std::nan("");
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("trajectory line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

TrajectoryRecord simulate(const RunConfig& config, std::ostream& log) {
  for (const auto& note : config.notes) log << "note: " << note << '\n';
  TrajectoryRecord rec;
  switch (config.method) {
    case RunMethod::Exp:
    case RunMethod::Linear: rec = simulate_split(config); break;
    case RunMethod::Dense: rec = simulate_dense(config); break;
    case RunMethod::Hp: rec = simulate_hp(config); break;
  }
  double worst = 0.0;
  for (const auto& row : rec.rows) worst = std::max(worst, row.top_fock_pop);
  if (worst > config.truncation_warning) {
    log << "warning: top Fock level population reached " << worst << " (threshold "
        << config.truncation_warning << "); increase n_cavity\n";
  }
  return rec;
}

void write_trajectory_csv(std::ostream& out, const RunConfig& config, const TrajectoryRecord& record) {
  out << "# tcsplit trajectory\n";
  std::istringstream cfg(format_config(config));
  for (std::string line; std::getline(cfg, line);) out << "# " << line << '\n';
  out << kTrajectoryColumns << '\n';
  out << std::setprecision(17);
  for (const auto& r : record.rows) {
    out << r.t << ',' << r.lambda_minus << ',' << r.lambda_plus << ',' << r.mean_photon << ','
        << r.jz_expect << ',' << r.pre_renorm_norm_drift << ',' << r.top_fock_pop << '\n';
  }
}

TrajectoryRecord read_trajectory_csv(std::istream& in) {
  TrajectoryRecord rec;
  bool header = false;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kTrajectoryColumns) throw ConfigError("trajectory: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::array<double, 7> v{};
    std::size_t start = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const std::size_t comma = line.find(',', start);
      if ((comma == std::string::npos) != (k + 1 == v.size())) {
        throw ConfigError("trajectory line " + std::to_string(line_no) + ": expected 7 columns");
      }
      v[k] = parse_field(std::string_view(line).substr(start, comma - start), line_no);
      start = comma + 1;
    }
    rec.rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  if (!header) throw ConfigError("trajectory: missing header row");
  return rec;
}

RunConfig config_from_trajectory(std::istream& in) {
  std::string text;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("# ", 0) != 0) break;
    if (line.find('=') == std::string::npos) continue;
    text += line.substr(2) + '\n';
  }
  return parse_config(text);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

double spectral_bound(const PropagatorPlan& plan) {
  auto row_bound = [](const TridiagonalOperator& op) {
    double worst = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) {
      double s = std::abs(op.diag[i]);
      if (i > 0) s += std::abs(op.off[i - 1]);
      if (i + 1 < op.size()) s += std::abs(op.off[i]);
      worst = std::max(worst, s);
    }
    return worst;
  };
  const auto& p = plan.params;
  return row_bound(plan.h0) + row_bound(plan.v) + (std::abs(p.omega_s) + std::abs(p.lambda)) * p.spin();
}

double infidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return 1.0 - std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

struct SplitRun {
  Eigen::VectorXcd final_canonical;
  std::vector<std::pair<double, double>> eigenvalues;  // per step, including t = 0
  std::vector<double> pre_renorm_norms;
  double min_uncertainty_product = 1.0;
};

SplitRun run_split(const ModelParams& params, double dt, std::size_t steps, Method method) {
  const PropagatorPlan plan = make_plan(params, dt, method);
  const CavityIndexMap map(plan.h0_basis);
  SplitRun run;
  auto record = [&](const StateVector& psi) {
    const auto ev = covariance_eigenvalues(covariance_from_moments(cavity_moments(psi, map)));
    run.eigenvalues.push_back(ev);
    run.min_uncertainty_product = std::min(run.min_uncertainty_product, ev.first * ev.second);
  };
  const StateVector psi0 = initial_state(plan);
  record(psi0);
  const Trajectory traj =
      propagate(psi0, 0.0, steps, plan, [&](std::size_t, double, const StateVector& psi) { record(psi); });
  run.final_canonical = to_canonical(traj.final_state, plan.h0_basis);
  run.pre_renorm_norms = traj.pre_renorm_norms;
  return run;
}

Eigen::VectorXcd run_final(const ModelParams& params, double dt, std::size_t steps, Method method) {
  const PropagatorPlan plan = make_plan(params, dt, method);
  return to_canonical(propagate(initial_state(plan), 0.0, steps, plan).final_state, plan.h0_basis);
}

double energy_drift(const ModelParams& params, double dt, std::size_t steps, Method method) {
  const PropagatorPlan plan = make_plan(params, dt, method);
  const StateVector psi0 = initial_state(plan);
  const double e0 = energy_expectation(psi0, plan, 0.0);
  double worst = 0.0;
  propagate(psi0, 0.0, steps, plan, [&](std::size_t, double t, const StateVector& psi) {
    worst = std::max(worst, std::abs(energy_expectation(psi, plan, t) - e0));
  });
  return worst;
}

CheckResult at_most(std::string name, double measured, double threshold, std::string detail = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> validate(const RunConfig& config, std::ostream& log) {
  const ModelParams& p = config.params;
  const std::size_t d = p.dimension();
  if (d > kOracleDimensionLimit) {
    throw ConfigError("validate needs D <= " + std::to_string(kOracleDimensionLimit) + ", got " +
                      std::to_string(d));
  }
  const DenseHamiltonian dense = dense_build(p);
  const double dt = config.dt;
  const std::size_t steps = std::max<std::size_t>(config.n_steps, 1);
  const double horizon = static_cast<double>(steps) * dt;

  const PropagatorPlan probe = make_plan(p, dt, Method::Linear);
  const Eigen::VectorXcd psi0 = to_canonical(initial_state(probe), probe.h0_basis);
  // Asymptotic step: a few hundredths of a radian per step at the spectral edge.
  const double rho = std::max(spectral_bound(probe), 1e-12);
  const double fine_dt = std::min(dt, 0.025 / rho);

  std::vector<CheckResult> checks;

  log << "building converged dense reference (D = " << d << ", T = " << horizon << " ns)\n";
  const ConvergedReference ref = converged_reference(dense, psi0, 0.0, horizon, fine_dt, 1e-9, 2);
  log << "  reference dt_oracle = " << ref.dt_oracle << ", last change = " << ref.last_change
      << (ref.converged ? "" : " (not below 1e-9)") << '\n';

  const SplitRun exp_run = run_split(p, dt, steps, Method::Exp);
  const SplitRun lin_run = run_split(p, dt, steps, Method::Linear);

  checks.push_back(at_most("accuracy_exp", infidelity(exp_run.final_canonical, ref.state), 1e-6,
                           "final-state infidelity vs dense oracle"));
  checks.push_back(at_most("accuracy_linear", infidelity(lin_run.final_canonical, ref.state), 1e-6,
                           "final-state infidelity vs dense oracle"));

  double max_step = 0.0, accumulated = 0.0;
  for (double n : lin_run.pre_renorm_norms) {
    max_step = std::max(max_step, std::abs(n - 1.0));
    accumulated += std::abs(n - 1.0);
  }
  checks.push_back(at_most("unitarity_linear_step", max_step, 1e-12, "max |norm - 1| before renormalization"));
  checks.push_back(at_most("unitarity_linear_accumulated", accumulated, 1e-10, "sum of per-step drifts"));

  double disagreement = 0.0;
  for (std::size_t k = 0; k < exp_run.eigenvalues.size(); ++k) {
    disagreement = std::max({disagreement,
                             std::abs(exp_run.eigenvalues[k].first - lin_run.eigenvalues[k].first),
                             std::abs(exp_run.eigenvalues[k].second - lin_run.eigenvalues[k].second)});
  }
  checks.push_back(at_most("method_agreement", disagreement, 1e-5, "max covariance-eigenvalue difference"));

  const double bound = std::min(exp_run.min_uncertainty_product, lin_run.min_uncertainty_product);
  checks.push_back({"uncertainty_bound", bound >= 1.0 / 16.0 - 1e-8, bound, 1.0 / 16.0 - 1e-8,
                    "min lambda_minus * lambda_plus"});

  // Convergence order on an asymptotic ladder, independent of the configured dt.
  {
    const double h = fine_dt;
    const double quantum = 4.0 * h;
    const double t_order = quantum * std::ceil(std::clamp(horizon, 800.0 * h, 4000.0 * h) / quantum);
    const ConvergedReference oref = converged_reference(dense, psi0, 0.0, t_order, h, 1e-11, 1);
    for (Method m : {Method::Exp, Method::Linear}) {
      std::array<double, 3> err{};
      for (int k = 0; k < 3; ++k) {
        const double step = quantum / std::pow(2.0, k);
        const auto n = static_cast<std::size_t>(std::llround(t_order / step));
        err[static_cast<std::size_t>(k)] = (run_final(p, step, n, m) - oref.state).norm();
      }
      const double r1 = err[0] / err[1];
      const double r2 = err[1] / err[2];
      const bool ok = r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5;
      std::ostringstream detail;
      detail << "E ratios " << r1 << ", " << r2 << " on dt = " << quantum << ", " << quantum / 2 << ", "
             << quantum / 4;
      checks.push_back({"convergence_order_" + std::string(to_string(m)), ok, std::min(r1, r2), 3.5,
                        detail.str()});
    }
  }

  if (p.lambda == 0.0) {
    const std::size_t n = 10000;
    const double coarse = energy_drift(p, dt, n, Method::Linear);
    const double fine = energy_drift(p, 0.5 * dt, 2 * n, Method::Linear);
    const double c = coarse / (dt * dt);
    std::ostringstream detail;
    detail << "drift " << coarse << " at dt, " << fine << " at dt/2; c = " << c;
    checks.push_back(at_most("energy_drift", fine, 1.25 * c * 0.25 * dt * dt, detail.str()));
  }
  return checks;
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const TrajectoryRecord rec = simulate(config, err);
    std::ofstream file(config.out);
    if (!file) {
      err << "error: cannot write " << config.out << '\n';
      return kExitUsage;
    }
    write_trajectory_csv(file, config, rec);
    out << "wrote " << rec.rows.size() << " rows to " << config.out << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    for (const auto& note : config.notes) out << "note: " << note << '\n';
    const auto checks = validate(config, out);
    bool all = true;
    out << std::setprecision(6);
    for (const auto& c : checks) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << c.measured
          << " threshold=" << c.threshold;
      if (!c.detail.empty()) out << "  (" << c.detail << ')';
      out << '\n';
      all = all && c.passed;
    }
    return all ? kExitOk : kExitValidation;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run_bench(const SweepSpec& spec, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err) {
  try {
    std::filesystem::create_directories(out_dir);
    std::vector<BenchSample> all;
    nlohmann::json report;
    report["threads"] = 1;
    report["dt_ns"] = spec.dt;
    report["reps"] = spec.reps;
    report["warmup"] = spec.warmup;
    report["sweep"] = spec.dimensions;
    for (BenchMethod m : spec.methods) {
      const auto samples = time_single_step(m, spec);
      const std::string name(to_string(m));
      for (const auto& s : samples) {
        out << name << " D=" << s.dimension;
        if (s.skipped) {
          out << " skipped (" << s.note << ")\n";
        } else {
          out << " step=" << s.step_time_ns_median << " ns precompute=" << s.precompute_ms << " ms\n";
        }
      }
      try {
        const ScalingFit fit = fit_scaling(samples);
        report[name + "_exponent"] = fit.exponent;
        report[name + "_r_squared"] = fit.r_squared;
        report[name + "_points"] = fit.points;
        report[name + "_decades"] = fit.decades;
        out << name << " exponent " << fit.exponent << " (R^2 " << fit.r_squared << ")\n";
      } catch (const UsageError& e) {
        report[name + "_exponent"] = nullptr;
        out << name << " fit refused: " << e.what() << '\n';
      }
      all.insert(all.end(), samples.begin(), samples.end());
    }
    write_bench_csv(out_dir / "bench_samples.csv", all);
    std::ofstream(out_dir / "bench_report.json") << report.dump(2) << '\n';
    out << "wrote " << (out_dir / "bench_samples.csv").string() << " and "
        << (out_dir / "bench_report.json").string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace tcsplit
