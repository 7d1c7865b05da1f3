#pragma once

#include <utility>
#include <vector>

#include "tcsplit/basis.hpp"
#include "tcsplit/propagator.hpp"

namespace tcsplit {

/// Populations above this on the top Fock level flag a truncation problem.
inline constexpr double kTruncationWarning = 1e-6;

struct CavityMoments {
  Complex mean_a;
  Complex mean_a2;
  double mean_n = 0.0;
};

/// Covariance of the quadratures X = (a + a^dag)/2, Y = (a - a^dag)/(2i);
/// cxy is the symmetrized <XY + YX>/2 - <X><Y>. Vacuum is diag(1/4, 1/4).
struct CovarianceMatrix2x2 {
  double cxx = 0.0;
  double cyy = 0.0;
  double cxy = 0.0;
};

/// Precomputed photon-lowering neighbours over one ordering:
/// lower1[i] is the slot of (n-1, m), lower2[i] of (n-2, m), or npos.
class CavityIndexMap {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit CavityIndexMap(const OrderedBasis& basis);

  Ordering ordering() const { return ordering_; }
  std::size_t size() const { return n_.size(); }

  const std::vector<std::size_t>& lower1() const { return lower1_; }
  const std::vector<std::size_t>& lower2() const { return lower2_; }
  const std::vector<int>& photons() const { return n_; }
  int top_level() const { return top_; }

private:
  Ordering ordering_;
  int top_;
  std::vector<int> n_;
  std::vector<std::size_t> lower1_;
  std::vector<std::size_t> lower2_;
};

CavityMoments cavity_moments(const StateVector& state, const CavityIndexMap& map);
CovarianceMatrix2x2 covariance_from_moments(const CavityMoments& m);

/// (lambda_minus, lambda_plus), ascending.
std::pair<double, double> covariance_eigenvalues(const CovarianceMatrix2x2& c);

double spin_jz_expectation(const StateVector& state, const JzDiagonal& jz);
double top_fock_population(const StateVector& state, const CavityIndexMap& map);
double norm(const StateVector& state);

/// One sampled row of a trajectory file.
struct ObservableRow {
  double t = 0.0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double mean_photon = 0.0;
  double jz_expect = 0.0;
  double pre_renorm_norm_drift = 0.0;
  double top_fock_pop = 0.0;

  friend bool operator==(const ObservableRow&, const ObservableRow&) = default;
};

/// Evaluates every column except t and the drift.
ObservableRow measure(const StateVector& state, const CavityIndexMap& map, const JzDiagonal& jz);

/// <H(t)> = <H0> + <V> + Delta(t) <Jz> from the plan's tridiagonal operators, O(D).
double energy_expectation(const StateVector& state, const PropagatorPlan& plan, double t);

}  // namespace tcsplit
