#pragma once

// Brute-force oracles. Everything here works in the canonical
// (n ascending, m ascending) indexing with dense Eigen matrices and shares no
// code with the tridiagonal propagators it is meant to check.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "tcsplit/basis.hpp"
#include "tcsplit/hamiltonian.hpp"
#include "tcsplit/propagator.hpp"

namespace tcsplit {

inline constexpr std::size_t kOracleDimensionLimit = 4096;

/// H(t) = h0 + v + Delta(t) jz, each D x D real symmetric, assembled from the
/// ladder operators a, a^dag, J+-, Jz by Kronecker products.
struct DenseHamiltonian {
  ModelParams params;
  Eigen::MatrixXd h0;  // w_c a^dag a + g (a J+ + a^dag J-)
  Eigen::MatrixXd v;   // g (a J- + a^dag J+)
  Eigen::MatrixXd jz;

  std::size_t dimension() const { return static_cast<std::size_t>(h0.rows()); }
  Eigen::MatrixXd at(double t) const;
};

/// Throws ConfigError when D exceeds kOracleDimensionLimit.
DenseHamiltonian dense_build(const ModelParams& params);

/// Writes a tridiagonal operator back into canonical dense form.
Eigen::MatrixXd scatter_to_canonical(const TridiagonalOperator& op, const OrderedBasis& basis);

Eigen::VectorXcd to_canonical(const StateVector& state, const OrderedBasis& basis);
StateVector from_canonical(const Eigen::VectorXcd& psi, const OrderedBasis& basis);

/// Called after each substep with (substep, time, canonical state).
using DenseObserver = std::function<void(std::size_t, double, const Eigen::VectorXcd&)>;

struct DenseTrajectory {
  Eigen::VectorXcd final_state;
  double t_final = 0.0;
};

/// Exact exponential of the midpoint-frozen Hamiltonian per substep:
/// psi <- exp(-i h H(t + h/2)) psi. The Hamiltonian is split into its
/// connected components (sectors) before each eigendecomposition.
DenseTrajectory dense_propagate(const DenseHamiltonian& h, const Eigen::VectorXcd& initial,
                                double t0, std::size_t n_steps, double dt_oracle,
                                const DenseObserver& observer = {});

struct ConvergedReference {
  Eigen::VectorXcd state;
  double dt_oracle = 0.0;
  double last_change = 0.0;  // change between the last two extrapolants
  bool converged = false;
};

/// Richardson-extrapolated midpoint runs at dt_start, dt_start/2, ... Keeps
/// halving until successive extrapolated final states differ by less than
/// `tolerance` (2-norm) or `max_halvings` extra halvings have been spent.
/// The returned state is normalized.
ConvergedReference converged_reference(const DenseHamiltonian& h, const Eigen::VectorXcd& initial,
                                       double t0, double horizon, double dt_start,
                                       double tolerance, int max_halvings);

/// One point of the Holstein-Primakoff Gaussian comparator.
struct HpSample {
  double t = 0.0;
  double lambda_minus = 0.25;
  double lambda_plus = 0.25;
  double mean_photon = 0.0;
  double spin_excitations = 0.0;  // <b^dag b>
};

/// 4 x 4 drift matrix M(t) of (X_a, Y_a, X_b, Y_b) for the quadratic model
///   w_c a^dag a + Delta(t) b^dag b + g sqrt(2J) (a + a^dag)(b + b^dag),
/// so that d<v>/dt = M <v> and dC/dt = M C + C M^T.
Eigen::Matrix4d hp_drift(const ModelParams& params, double t);

/// Integrates the Gaussian moments from the double vacuum with classical RK4,
/// using substeps no larger than max_step, and samples at every t_grid point.
/// Throws NumericalError if the covariance norm exceeds 1e6.
std::vector<HpSample> hp_covariance_propagate(const ModelParams& params,
                                              std::span<const double> t_grid, double max_step);

}  // namespace tcsplit
