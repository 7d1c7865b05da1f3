#pragma once

// Symmetric split-operator propagation for the driven Tavis-Cummings model.
// One step of size dt applies
//
//   exp(-i dt/2 D Jz) exp(-i dt/2 H0) exp(-i dt V) exp(-i dt/2 H0) exp(-i dt/2 D Jz)
//
// with D = Delta(t + dt/2), then renormalizes. H0 and V are tridiagonal in
// their own orderings; switching between them is a precomputed permutation.
// The tridiagonal factors are either exact block exponentials (Method::Exp)
// or Cayley transforms solved with the Thomas algorithm (Method::Linear).

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tcsplit/basis.hpp"
#include "tcsplit/hamiltonian.hpp"
#include "tcsplit/tridiagonal.hpp"

namespace tcsplit {

enum class Method { Exp, Linear };

std::string_view to_string(Method method);

/// Complex amplitudes tagged with the ordering that currently indexes them.
struct StateVector {
  std::vector<Complex> amplitudes;
  Ordering ordering = Ordering::H0;

  std::size_t size() const { return amplitudes.size(); }
  double norm() const;
};

/// exp(-i theta H_block) for one block, dense row-major.
struct BlockExponential {
  BlockRange range;
  std::vector<Complex> matrix;
};

struct BlockExponentialSet {
  Ordering ordering = Ordering::Canonical;
  double theta = 0.0;
  std::size_t dimension = 0;
  std::size_t max_block = 0;
  std::vector<BlockExponential> blocks;

  /// Stored complex entries; sum of squared block sizes.
  std::size_t stored_entries() const;
};

BlockExponentialSet precompute_block_exponentials(const TridiagonalOperator& op, double theta);

/// Per-block dense mat-vec. Throws UsageError if the orderings differ.
void apply_block_exponentials(const BlockExponentialSet& set, StateVector& state);

/// (I + i beta H)^{-1} (I - i beta H) for a fixed tridiagonal H, the unitary
/// Cayley approximant of exp(-2 i beta H).
class CayleyFactor {
public:
  CayleyFactor(const TridiagonalOperator& op, double beta);

  Ordering ordering() const { return ordering_; }
  double beta() const { return beta_; }
  std::size_t size() const { return diag_.size(); }

  /// `scratch` is resized as needed and left holding the previous amplitudes.
  void apply(StateVector& state, std::vector<Complex>& scratch) const;

private:
  Ordering ordering_;
  double beta_;
  // Both I + i beta H and I - i beta H are rebuilt from the real entries on
  // the fly, so a sweep streams two real and two complex arrays.
  std::vector<double> diag_, off_;
  ThomasFactorization factor_;
};

/// One-shot Cayley application; builds the factor each call.
void cayley_apply(const TridiagonalOperator& op, double beta, StateVector& state);

/// Switches the state's indexing between two orderings.
void permute(const Permutation& p, StateVector& state, std::vector<Complex>& scratch);

/// Everything a run needs, fixed at construction.
struct PropagatorPlan {
  Method method = Method::Linear;
  double dt = 0.0;
  ModelParams params;
  OrderedBasis h0_basis;
  OrderedBasis v_basis;
  TridiagonalOperator h0;
  TridiagonalOperator v;
  Permutation h0_to_v;
  Permutation v_to_h0;
  JzDiagonal jz;
  DriveSchedule drive;

  // Exp: exp(-i dt/2 H0) and exp(-i dt V).
  std::optional<BlockExponentialSet> exp_h0_half;
  std::optional<BlockExponentialSet> exp_v_full;
  // Linear: beta = dt/4 for H0 and dt/2 for V.
  std::optional<CayleyFactor> cayley_h0;
  std::optional<CayleyFactor> cayley_v;

  double precompute_seconds = 0.0;

  std::size_t dimension() const { return h0_basis.size(); }
};

PropagatorPlan make_plan(const ModelParams& params, double dt, Method method);

/// |0> (x) |J, -J> in the H0 ordering.
StateVector initial_state(const PropagatorPlan& plan);

struct StepDiagnostics {
  double pre_renorm_norm = 1.0;
};

/// Reusable buffers for strang_step.
struct StepWorkspace {
  StateVector work;
  std::vector<Complex> scratch;
  std::vector<Complex> phases;
};

/// Advances `state` from t to t + dt. On error `state` is left untouched.
StepDiagnostics strang_step(StateVector& state, double t, const PropagatorPlan& plan,
                            StepWorkspace& workspace);
StepDiagnostics strang_step(StateVector& state, double t, const PropagatorPlan& plan);

/// Called after each completed (renormalized) step with (step, time, state).
using Observer = std::function<void(std::size_t, double, const StateVector&)>;

struct Trajectory {
  StateVector final_state;
  double t_final = 0.0;
  std::vector<double> pre_renorm_norms;  // one per step
};

/// Runs n_steps Strang steps from t0. Step failures rethrow as StepError.
Trajectory propagate(const StateVector& initial, double t0, std::size_t n_steps,
                     const PropagatorPlan& plan, const Observer& observer = {});

}  // namespace tcsplit
