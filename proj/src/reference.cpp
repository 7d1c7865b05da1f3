#include "tcsplit/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tcsplit/errors.hpp"

namespace tcsplit {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Connected components of the sparsity graph of a symmetric matrix.
std::vector<std::vector<Eigen::Index>> sectors(const Eigen::MatrixXd& pattern) {
  const Eigen::Index d = pattern.rows();
  std::vector<Eigen::Index> label(static_cast<std::size_t>(d), -1);
  std::vector<std::vector<Eigen::Index>> out;
  for (Eigen::Index seed = 0; seed < d; ++seed) {
    if (label[seed] >= 0) continue;
    const auto id = static_cast<Eigen::Index>(out.size());
    out.emplace_back();
    std::vector<Eigen::Index> stack{seed};
    label[seed] = id;
    while (!stack.empty()) {
      const Eigen::Index i = stack.back();
      stack.pop_back();
      out.back().push_back(i);
      for (Eigen::Index j = 0; j < d; ++j) {
        if (label[j] < 0 && pattern(i, j) != 0.0) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

}  // namespace

Eigen::MatrixXd DenseHamiltonian::at(double t) const {
  return h0 + v + delta_at(t, DriveSchedule(params)) * jz;
}

DenseHamiltonian dense_build(const ModelParams& params) {
  const std::size_t d = params.dimension();
  if (d > kOracleDimensionLimit) {
    throw ConfigError("dense oracle refused: D = " + std::to_string(d) + " exceeds the limit of " +
                      std::to_string(kOracleDimensionLimit));
  }
  const int nc = params.n_cavity;
  const int ns = params.two_j + 1;
  const double j = params.spin();

  // a|n> = sqrt(n)|n-1>
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nc, nc);
  for (int n = 1; n < nc; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  // a^dag a|n> = n|n>, set directly: sqrt(n)^2 is not exactly n.
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(nc, nc);
  for (int n = 0; n < nc; ++n) num(n, n) = n;

  // Spin index k <-> m = -J + k. J+|m> = sqrt(J(J+1) - m(m+1)) |m+1>
  Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(ns, ns);
  Eigen::MatrixXd jzs = Eigen::MatrixXd::Zero(ns, ns);
  for (int k = 0; k < ns; ++k) {
    const double m = -j + k;
    jzs(k, k) = m;
    if (k + 1 < ns) jp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Eigen::MatrixXd jm = jp.transpose();
  const Eigen::MatrixXd ic = Eigen::MatrixXd::Identity(nc, nc);
  const Eigen::MatrixXd is = Eigen::MatrixXd::Identity(ns, ns);
  const Eigen::MatrixXd ad = a.transpose();

  DenseHamiltonian h;
  h.params = params;
  h.h0 = params.omega_c * kron(num, is) + params.g * (kron(a, jp) + kron(ad, jm));
  h.v = params.g * (kron(a, jm) + kron(ad, jp));
  h.jz = kron(ic, jzs);
  return h;
}

Eigen::MatrixXd scatter_to_canonical(const TridiagonalOperator& op, const OrderedBasis& basis) {
  if (op.ordering != basis.ordering() || op.size() != basis.size()) {
    throw UsageError("scatter_to_canonical: operator and basis disagree");
  }
  const auto d = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  const int two_j = basis.two_j();
  for (std::size_t i = 0; i < op.size(); ++i) {
    const auto ci = static_cast<Eigen::Index>(canonical_index(basis[i], two_j));
    out(ci, ci) += op.diag[i];
    if (i + 1 < op.size()) {
      const auto cj = static_cast<Eigen::Index>(canonical_index(basis[i + 1], two_j));
      out(ci, cj) += op.off[i];
      out(cj, ci) += op.off[i];
    }
  }
  return out;
}

Eigen::VectorXcd to_canonical(const StateVector& state, const OrderedBasis& basis) {
  if (state.ordering != basis.ordering() || state.size() != basis.size()) {
    throw UsageError("to_canonical: state and basis disagree");
  }
  Eigen::VectorXcd out(static_cast<Eigen::Index>(state.size()));
  for (std::size_t i = 0; i < state.size(); ++i) {
    out(static_cast<Eigen::Index>(canonical_index(basis[i], basis.two_j()))) = state.amplitudes[i];
  }
  return out;
}

StateVector from_canonical(const Eigen::VectorXcd& psi, const OrderedBasis& basis) {
  if (static_cast<std::size_t>(psi.size()) != basis.size()) {
    throw UsageError("from_canonical: length mismatch");
  }
  StateVector out;
  out.ordering = basis.ordering();
  out.amplitudes.resize(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out.amplitudes[i] = psi(static_cast<Eigen::Index>(canonical_index(basis[i], basis.two_j())));
  }
  return out;
}

DenseTrajectory dense_propagate(const DenseHamiltonian& h, const Eigen::VectorXcd& initial,
                                double t0, std::size_t n_steps, double dt_oracle,
                                const DenseObserver& observer) {
  if (initial.size() != h.h0.rows()) throw UsageError("dense_propagate: length mismatch");
  if (!(dt_oracle >= 0.0)) throw UsageError("dense_propagate: dt_oracle must be >= 0");

  const Eigen::MatrixXd pattern = h.h0.cwiseAbs() + h.v.cwiseAbs() + h.jz.cwiseAbs();
  const auto parts = sectors(pattern);
  const Eigen::MatrixXd fixed = h.h0 + h.v;
  const DriveSchedule drive(h.params);

  DenseTrajectory out;
  out.final_state = initial;
  Eigen::VectorXcd& psi = out.final_state;
  double t = t0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  for (std::size_t step = 1; step <= n_steps; ++step) {
    const double delta = delta_at(t + 0.5 * dt_oracle, drive);
    for (const auto& idx : parts) {
      const auto s = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd sub(s, s);
      Eigen::VectorXcd x(s);
      for (Eigen::Index r = 0; r < s; ++r) {
        x(r) = psi(idx[r]);
        for (Eigen::Index c = 0; c < s; ++c) {
          sub(r, c) = fixed(idx[r], idx[c]) + delta * h.jz(idx[r], idx[c]);
        }
      }
      solver.compute(sub, Eigen::ComputeEigenvectors);
      if (solver.info() != Eigen::Success) {
        throw NumericalError("dense oracle: eigendecomposition failed at substep " +
                             std::to_string(step));
      }
      const Eigen::MatrixXd& q = solver.eigenvectors();
      Eigen::VectorXcd coeff = q.transpose() * x;
      for (Eigen::Index k = 0; k < s; ++k) {
        coeff(k) *= std::polar(1.0, -dt_oracle * solver.eigenvalues()(k));
      }
      x = q * coeff;
      for (Eigen::Index r = 0; r < s; ++r) psi(idx[r]) = x(r);
    }
    t = t0 + static_cast<double>(step) * dt_oracle;
    if (observer) observer(step, t, psi);
  }
  out.t_final = t;
  return out;
}

ConvergedReference converged_reference(const DenseHamiltonian& h, const Eigen::VectorXcd& initial,
                                       double t0, double horizon, double dt_start,
                                       double tolerance, int max_halvings) {
  if (!(dt_start > 0.0) || !(horizon >= 0.0)) throw UsageError("converged_reference: bad grid");
  auto run = [&](double dt) {
    const auto steps = std::max<long long>(1, std::llround(horizon / dt));
    return dense_propagate(h, initial, t0, static_cast<std::size_t>(steps),
                           horizon / static_cast<double>(steps))
        .final_state;
  };
  // The midpoint rule is symmetric, so its error expands in even powers of
  // the substep and one Richardson step (4 psi(h/2) - psi(h)) / 3 is O(h^4).
  auto extrapolate = [](const Eigen::VectorXcd& coarse, const Eigen::VectorXcd& fine) {
    Eigen::VectorXcd r = (4.0 * fine - coarse) / 3.0;
    return Eigen::VectorXcd(r / r.norm());
  };

  ConvergedReference ref;
  double dt = dt_start;
  Eigen::VectorXcd coarse = run(dt);
  dt *= 0.5;
  Eigen::VectorXcd fine = run(dt);
  ref.state = extrapolate(coarse, fine);
  ref.dt_oracle = dt;
  ref.last_change = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_halvings; ++k) {
    coarse = std::move(fine);
    dt *= 0.5;
    fine = run(dt);
    Eigen::VectorXcd next = extrapolate(coarse, fine);
    ref.last_change = (next - ref.state).norm();
    ref.state = std::move(next);
    ref.dt_oracle = dt;
    if (ref.last_change < tolerance) {
      ref.converged = true;
      break;
    }
  }
  return ref;
}

Eigen::Matrix4d hp_drift(const ModelParams& params, double t) {
  const double delta = delta_at(t, DriveSchedule(params));
  const double coupling = 2.0 * params.g * std::sqrt(2.0 * params.spin());
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 1) = params.omega_c;
  m(1, 0) = -params.omega_c;
  m(1, 2) = -coupling;
  m(2, 3) = delta;
  m(3, 2) = -delta;
  m(3, 0) = -coupling;
  return m;
}

namespace {

struct Moments {
  Eigen::Vector4d mean;
  Eigen::Matrix4d cov;
};

Moments hp_rate(const ModelParams& params, double t, const Moments& x) {
  const Eigen::Matrix4d m = hp_drift(params, t);
  return {m * x.mean, m * x.cov + x.cov * m.transpose()};
}

Moments axpy(const Moments& x, double h, const Moments& k) {
  return {x.mean + h * k.mean, x.cov + h * k.cov};
}

HpSample sample(double t, const Moments& x) {
  HpSample s;
  s.t = t;
  const Eigen::Matrix2d ca = 0.5 * (x.cov.topLeftCorner<2, 2>() +
                                    x.cov.topLeftCorner<2, 2>().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(ca, Eigen::EigenvaluesOnly);
  s.lambda_minus = eig.eigenvalues()(0);
  s.lambda_plus = eig.eigenvalues()(1);
  // <a^dag a> = <X^2> + <Y^2> - 1/2, likewise for b.
  s.mean_photon = ca.trace() + x.mean.head<2>().squaredNorm() - 0.5;
  s.spin_excitations =
      x.cov(2, 2) + x.cov(3, 3) + x.mean.tail<2>().squaredNorm() - 0.5;
  return s;
}

}  // namespace

std::vector<HpSample> hp_covariance_propagate(const ModelParams& params,
                                              std::span<const double> t_grid, double max_step) {
  params.validate();
  if (params.two_j <= 0) throw UsageError("Holstein-Primakoff comparator needs J > 0");
  if (!(max_step > 0.0)) throw UsageError("hp_covariance_propagate: max_step must be > 0");

  Moments x{Eigen::Vector4d::Zero(), 0.25 * Eigen::Matrix4d::Identity()};
  std::vector<HpSample> out;
  out.reserve(t_grid.size());
  if (t_grid.empty()) return out;

  double t = t_grid.front();
  out.push_back(sample(t, x));
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t;
    if (span < 0.0) throw UsageError("hp_covariance_propagate: t_grid must be increasing");
    const auto sub = std::max<long long>(1, static_cast<long long>(std::ceil(span / max_step - 1e-9)));
    const double h = span / static_cast<double>(sub);
    for (long long i = 0; i < sub; ++i) {
      const double ti = t + static_cast<double>(i) * h;
      const Moments k1 = hp_rate(params, ti, x);
      const Moments k2 = hp_rate(params, ti + 0.5 * h, axpy(x, 0.5 * h, k1));
      const Moments k3 = hp_rate(params, ti + 0.5 * h, axpy(x, 0.5 * h, k2));
      const Moments k4 = hp_rate(params, ti + h, axpy(x, h, k3));
      x.mean += (h / 6.0) * (k1.mean + 2.0 * k2.mean + 2.0 * k3.mean + k4.mean);
      x.cov += (h / 6.0) * (k1.cov + 2.0 * k2.cov + 2.0 * k3.cov + k4.cov);
    }
    t = t_grid[k];
    if (!(x.cov.norm() <= 1e6)) {
      throw NumericalError("Holstein-Primakoff covariance diverged at t = " + std::to_string(t));
    }
    out.push_back(sample(t, x));
  }
  return out;
}

}  // namespace tcsplit
