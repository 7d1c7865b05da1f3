#include "tcsplit/propagator.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "tcsplit/errors.hpp"

namespace tcsplit {

namespace {

void require_ordering(const StateVector& state, Ordering expected, const char* who) {
  if (state.ordering != expected) {
    throw UsageError(std::string(who) + ": state is in the " +
                     std::string(to_string(state.ordering)) + " ordering, expected " +
                     std::string(to_string(expected)));
  }
}

}  // namespace

std::string_view to_string(Method method) {
  return method == Method::Exp ? "exp" : "linear";
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum);
}

std::size_t BlockExponentialSet::stored_entries() const {
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.matrix.size();
  return total;
}

BlockExponentialSet precompute_block_exponentials(const TridiagonalOperator& op, double theta) {
  if (!std::isfinite(theta)) throw UsageError("block exponential: non-finite theta");
  BlockExponentialSet set;
  set.ordering = op.ordering;
  set.theta = theta;
  set.dimension = op.size();
  set.blocks.reserve(op.blocks.size());

  for (std::size_t b = 0; b < op.blocks.size(); ++b) {
    const BlockRange range = op.blocks[b];
    const std::size_t s = range.size();
    set.max_block = std::max(set.max_block, s);
    BlockExponential block{range, {}};
    if (s == 1) {
      block.matrix = {std::polar(1.0, -theta * op.diag[range.begin])};
      set.blocks.push_back(std::move(block));
      continue;
    }

    TridiagonalEigen eig;
    try {
      eig = tridiag_eigendecompose(
          std::span<const double>(op.diag).subspan(range.begin, s),
          std::span<const double>(op.off).subspan(range.begin, s - 1));
    } catch (const NumericalError& e) {
      throw NumericalError("block " + std::to_string(b) + ": " + e.what());
    }

    // U = Q diag(exp(-i theta lambda)) Q^T; complex symmetric since Q is real.
    std::vector<Complex> weighted(s * s);
    for (std::size_t k = 0; k < s; ++k) {
      const Complex phase = std::polar(1.0, -theta * eig.values[k]);
      for (std::size_t i = 0; i < s; ++i) weighted[i * s + k] = eig.vectors[i * s + k] * phase;
    }
    block.matrix.assign(s * s, Complex{});
    for (std::size_t i = 0; i < s; ++i) {
      const Complex* wi = &weighted[i * s];
      for (std::size_t j = i; j < s; ++j) {
        const double* qj = &eig.vectors[j * s];
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < s; ++k) {
          re += wi[k].real() * qj[k];
          im += wi[k].imag() * qj[k];
        }
        block.matrix[i * s + j] = {re, im};
        block.matrix[j * s + i] = {re, im};
      }
    }
    set.blocks.push_back(std::move(block));
  }
  return set;
}

namespace {

void apply_blocks(const BlockExponentialSet& set, StateVector& state, std::vector<Complex>& tmp) {
  require_ordering(state, set.ordering, "apply_block_exponentials");
  if (state.size() != set.dimension) throw UsageError("apply_block_exponentials: length mismatch");
  tmp.resize(set.max_block);
  Complex* psi = state.amplitudes.data();
  for (const auto& block : set.blocks) {
    const std::size_t s = block.range.size();
    Complex* x = psi + block.range.begin;
    if (s == 1) {
      x[0] *= block.matrix[0];
      continue;
    }
    const Complex* row = block.matrix.data();
    for (std::size_t i = 0; i < s; ++i, row += s) {
      double re = 0.0, im = 0.0;
      for (std::size_t k = 0; k < s; ++k) {
        re += row[k].real() * x[k].real() - row[k].imag() * x[k].imag();
        im += row[k].real() * x[k].imag() + row[k].imag() * x[k].real();
      }
      tmp[i] = {re, im};
    }
    std::copy_n(tmp.begin(), s, x);
  }
}

}  // namespace

void apply_block_exponentials(const BlockExponentialSet& set, StateVector& state) {
  std::vector<Complex> tmp;
  apply_blocks(set, state, tmp);
}

CayleyFactor::CayleyFactor(const TridiagonalOperator& op, double beta)
    : ordering_(op.ordering), beta_(beta), diag_(op.diag), off_(op.off) {
  if (!std::isfinite(beta)) throw UsageError("Cayley factor: non-finite beta");
  const std::size_t d = op.size();
  if (d == 0) throw UsageError("Cayley factor: empty operator");
  const Complex ib{0.0, beta};
  std::vector<Complex> plus_diag(d), plus_off(op.off.size());
  for (std::size_t i = 0; i < d; ++i) plus_diag[i] = 1.0 + ib * op.diag[i];
  for (std::size_t i = 0; i < op.off.size(); ++i) plus_off[i] = ib * op.off[i];
  factor_ = ThomasFactorization(plus_off, plus_diag, plus_off);
}

void CayleyFactor::apply(StateVector& state, std::vector<Complex>& scratch) const {
  require_ordering(state, ordering_, "cayley_apply");
  const std::size_t d = size();
  if (state.size() != d) throw UsageError("cayley_apply: length mismatch");
  scratch.resize(d);

  const Complex* psi = state.amplitudes.data();
  Complex* x = scratch.data();
  const double* hd = diag_.data();
  const double* ho = off_.data();
  const Complex* cp = factor_.upper_scaled().data();
  const Complex* inv = factor_.inv_pivot().data();
  const double b = beta_;

  // Right-hand side (I - i beta H) psi fused with forward elimination; the
  // sub-diagonal of I + i beta H is i beta off.
  Complex hx = hd[0] * psi[0];
  if (d > 1) hx += ho[0] * psi[1];
  x[0] = Complex(psi[0].real() + b * hx.imag(), psi[0].imag() - b * hx.real()) * inv[0];
  for (std::size_t i = 1; i < d; ++i) {
    hx = hd[i] * psi[i] + ho[i - 1] * psi[i - 1];
    if (i + 1 < d) hx += ho[i] * psi[i + 1];
    const double bl = b * ho[i - 1];
    const Complex r(psi[i].real() + b * hx.imag() + bl * x[i - 1].imag(),
                    psi[i].imag() - b * hx.real() - bl * x[i - 1].real());
    x[i] = r * inv[i];
  }
  for (std::size_t i = d - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];

  state.amplitudes.swap(scratch);
}

void cayley_apply(const TridiagonalOperator& op, double beta, StateVector& state) {
  CayleyFactor factor(op, beta);
  std::vector<Complex> scratch;
  factor.apply(state, scratch);
}

void permute(const Permutation& p, StateVector& state, std::vector<Complex>& scratch) {
  require_ordering(state, p.from, "permute");
  scratch.resize(state.size());
  p.apply(state.amplitudes, scratch);
  state.amplitudes.swap(scratch);
  state.ordering = p.to;
}

PropagatorPlan make_plan(const ModelParams& params, double dt, Method method) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw UsageError("make_plan: dt must be finite and >= 0");
  const auto start = std::chrono::steady_clock::now();

  PropagatorPlan plan;
  plan.method = method;
  plan.dt = dt;
  plan.params = params;
  const auto states = enumerate_basis(params);
  plan.h0_basis = order_for_h0(states);
  plan.v_basis = order_for_v(states);
  plan.h0 = build_h0(params, plan.h0_basis);
  plan.v = build_v(params, plan.v_basis);
  plan.h0_to_v = build_permutation(plan.h0_basis, plan.v_basis);
  plan.v_to_h0 = build_permutation(plan.v_basis, plan.h0_basis);
  plan.jz = build_jz(plan.h0_basis);
  plan.drive = DriveSchedule(params);

  if (method == Method::Exp) {
    plan.exp_h0_half = precompute_block_exponentials(plan.h0, 0.5 * dt);
    plan.exp_v_full = precompute_block_exponentials(plan.v, dt);
  } else {
    plan.cayley_h0.emplace(plan.h0, 0.25 * dt);
    plan.cayley_v.emplace(plan.v, 0.5 * dt);
  }

  plan.precompute_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return plan;
}

StateVector initial_state(const PropagatorPlan& plan) {
  StateVector psi;
  psi.ordering = Ordering::H0;
  psi.amplitudes.assign(plan.dimension(), Complex{});
  psi.amplitudes[plan.h0_basis.position_of({0, -plan.params.two_j})] = 1.0;
  return psi;
}

StepDiagnostics strang_step(StateVector& state, double t, const PropagatorPlan& plan,
                            StepWorkspace& ws) {
  require_ordering(state, Ordering::H0, "strang_step");
  if (state.size() != plan.dimension()) throw UsageError("strang_step: length mismatch");

  const double dt = plan.dt;
  const double delta = delta_at(t + 0.5 * dt, plan.drive);

  // Half-step phases exp(-i dt/2 Delta m), one per m value.
  const int two_j = plan.jz.two_j;
  ws.phases.resize(static_cast<std::size_t>(two_j) + 1);
  for (int k = 0; k <= two_j; ++k) {
    const double m = 0.5 * (2 * k - two_j);
    ws.phases[static_cast<std::size_t>(k)] = std::polar(1.0, -0.5 * dt * delta * m);
  }

  StateVector& w = ws.work;
  w.ordering = Ordering::H0;
  w.amplitudes.resize(state.size());
  const int* slot = plan.jz.m_slot.data();
  for (std::size_t i = 0; i < state.size(); ++i) {
    w.amplitudes[i] = state.amplitudes[i] * ws.phases[static_cast<std::size_t>(slot[i])];
  }

  if (plan.method == Method::Exp) {
    apply_blocks(*plan.exp_h0_half, w, ws.scratch);
    permute(plan.h0_to_v, w, ws.scratch);
    apply_blocks(*plan.exp_v_full, w, ws.scratch);
    permute(plan.v_to_h0, w, ws.scratch);
    apply_blocks(*plan.exp_h0_half, w, ws.scratch);
  } else {
    plan.cayley_h0->apply(w, ws.scratch);
    permute(plan.h0_to_v, w, ws.scratch);
    plan.cayley_v->apply(w, ws.scratch);
    permute(plan.v_to_h0, w, ws.scratch);
    plan.cayley_h0->apply(w, ws.scratch);
  }

  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w.amplitudes[i] *= ws.phases[static_cast<std::size_t>(slot[i])];
    sum += std::norm(w.amplitudes[i]);
  }
  const double norm = std::sqrt(sum);
  if (!std::isfinite(norm) || norm == 0.0) {
    throw NumericalError("state norm became " + std::to_string(norm));
  }
  const double inv = 1.0 / norm;
  for (auto& a : w.amplitudes) a *= inv;

  state.amplitudes.swap(w.amplitudes);
  return {norm};
}

StepDiagnostics strang_step(StateVector& state, double t, const PropagatorPlan& plan) {
  StepWorkspace ws;
  return strang_step(state, t, plan, ws);
}

Trajectory propagate(const StateVector& initial, double t0, std::size_t n_steps,
                     const PropagatorPlan& plan, const Observer& observer) {
  Trajectory traj;
  traj.final_state = initial;
  traj.pre_renorm_norms.reserve(n_steps);
  StepWorkspace ws;
  double t = t0;
  for (std::size_t step = 1; step <= n_steps; ++step) {
    StepDiagnostics diag;
    try {
      diag = strang_step(traj.final_state, t, plan, ws);
    } catch (const NumericalError& e) {
      throw StepError(step, e.what());
    }
    traj.pre_renorm_norms.push_back(diag.pre_renorm_norm);
    // t0 + step * dt avoids accumulating roundoff in the clock.
    t = t0 + static_cast<double>(step) * plan.dt;
    if (observer) observer(step, t, traj.final_state);
  }
  traj.t_final = t;
  return traj;
}

}  // namespace tcsplit
