#include "tcsplit/observables.hpp"

#include <cmath>

#include "tcsplit/errors.hpp"

namespace tcsplit {

CavityIndexMap::CavityIndexMap(const OrderedBasis& basis)
    : ordering_(basis.ordering()), top_(basis.n_cavity() - 1) {
  const std::size_t d = basis.size();
  n_.resize(d);
  lower1_.assign(d, npos);
  lower2_.assign(d, npos);
  for (std::size_t i = 0; i < d; ++i) {
    const BasisState& s = basis[i];
    n_[i] = s.n;
    if (s.n >= 1) lower1_[i] = basis.position_of({s.n - 1, s.two_m});
    if (s.n >= 2) lower2_[i] = basis.position_of({s.n - 2, s.two_m});
  }
}

namespace {

void check(const StateVector& state, const CavityIndexMap& map) {
  if (state.ordering != map.ordering() || state.size() != map.size()) {
    throw UsageError("observable map does not match the state's ordering");
  }
}

}  // namespace

CavityMoments cavity_moments(const StateVector& state, const CavityIndexMap& map) {
  check(state, map);
  const auto& psi = state.amplitudes;
  const auto& n = map.photons();
  CavityMoments out;
  Complex a{}, a2{};
  double nn = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const int ni = n[i];
    if (ni == 0) continue;
    nn += ni * std::norm(psi[i]);
    // <a> = sum conj(psi[n-1]) sqrt(n) psi[n]
    a += std::conj(psi[map.lower1()[i]]) * psi[i] * std::sqrt(static_cast<double>(ni));
    if (ni >= 2) {
      a2 += std::conj(psi[map.lower2()[i]]) * psi[i] *
            std::sqrt(static_cast<double>(ni) * (ni - 1));
    }
  }
  out.mean_a = a;
  out.mean_a2 = a2;
  out.mean_n = nn;
  return out;
}

CovarianceMatrix2x2 covariance_from_moments(const CavityMoments& m) {
  const double ra = m.mean_a.real();
  const double ia = m.mean_a.imag();
  CovarianceMatrix2x2 c;
  c.cxx = 0.25 * (2.0 * m.mean_n + 1.0 + 2.0 * m.mean_a2.real()) - ra * ra;
  c.cyy = 0.25 * (2.0 * m.mean_n + 1.0 - 2.0 * m.mean_a2.real()) - ia * ia;
  c.cxy = 0.5 * m.mean_a2.imag() - ra * ia;
  return c;
}

std::pair<double, double> covariance_eigenvalues(const CovarianceMatrix2x2& c) {
  const double mean = 0.5 * (c.cxx + c.cyy);
  const double radius = std::hypot(0.5 * (c.cxx - c.cyy), c.cxy);
  return {mean - radius, mean + radius};
}

double spin_jz_expectation(const StateVector& state, const JzDiagonal& jz) {
  if (state.ordering != Ordering::H0 || state.size() != jz.size()) {
    throw UsageError("spin_jz_expectation: state must be in the H0 ordering");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) sum += jz.m_values[i] * std::norm(state.amplitudes[i]);
  return sum;
}

double top_fock_population(const StateVector& state, const CavityIndexMap& map) {
  check(state, map);
  double sum = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (map.photons()[i] == map.top_level()) sum += std::norm(state.amplitudes[i]);
  }
  return sum;
}

double norm(const StateVector& state) { return state.norm(); }

ObservableRow measure(const StateVector& state, const CavityIndexMap& map, const JzDiagonal& jz) {
  const CavityMoments m = cavity_moments(state, map);
  const auto [lo, hi] = covariance_eigenvalues(covariance_from_moments(m));
  ObservableRow row;
  row.lambda_minus = lo;
  row.lambda_plus = hi;
  row.mean_photon = m.mean_n;
  row.jz_expect = spin_jz_expectation(state, jz);
  row.top_fock_pop = top_fock_population(state, map);
  return row;
}

namespace {

double quadratic_form(const TridiagonalOperator& op, std::span<const Complex> psi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    sum += op.diag[i] * std::norm(psi[i]);
    if (i + 1 < psi.size()) sum += 2.0 * op.off[i] * (std::conj(psi[i]) * psi[i + 1]).real();
  }
  return sum;
}

}  // namespace

double energy_expectation(const StateVector& state, const PropagatorPlan& plan, double t) {
  if (state.ordering != Ordering::H0 || state.size() != plan.dimension()) {
    throw UsageError("energy_expectation: state must be in the H0 ordering");
  }
  std::vector<Complex> in_v(state.size());
  plan.h0_to_v.apply(state.amplitudes, in_v);
  return quadratic_form(plan.h0, state.amplitudes) + quadratic_form(plan.v, in_v) +
         delta_at(t, plan.drive) * spin_jz_expectation(state, plan.jz);
}

}  // namespace tcsplit
