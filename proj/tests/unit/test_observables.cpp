#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "tcsplit/errors.hpp"
#include "tcsplit/observables.hpp"
#include "tcsplit/reference.hpp"

using namespace tcsplit;

namespace {

ModelParams sys(int nc, int tj) {
  ModelParams p;
  p.omega_c = 1.1;
  p.omega_s = 0.9;
  p.g = 0.3;
  p.lambda = 0.4;
  p.omega_drive = 1.7;
  p.n_cavity = nc;
  p.two_j = tj;
  return p;
}

// Cavity-only state placed on m = -J.
StateVector cavity_state(const PropagatorPlan& plan, const std::vector<Complex>& fock) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(plan.dimension()));
  for (std::size_t n = 0; n < fock.size(); ++n) {
    psi(static_cast<Eigen::Index>(canonical_index({static_cast<int>(n), -plan.params.two_j},
                                                  plan.params.two_j))) = fock[n];
  }
  return from_canonical(psi, plan.h0_basis);
}

// Squeezed vacuum S(r e^{i phi}) |0>, amplitudes from the closed form.
std::vector<Complex> squeezed_vacuum(int levels, double r, double phi) {
  std::vector<Complex> c(levels, 0.0);
  double coef = 1.0 / std::sqrt(std::cosh(r));
  for (int k = 0; 2 * k < levels; ++k) {
    if (k > 0) coef *= -std::tanh(r) * std::sqrt((2.0 * k) * (2.0 * k - 1.0)) / (2.0 * k);
    c[2 * k] = coef * std::exp(Complex(0.0, k * phi));
  }
  return c;
}

}  // namespace

TEST_CASE("covariance from moments") {
  SUBCASE("vacuum") {
    const auto c = covariance_from_moments({});
    CHECK(c.cxx == 0.25);
    CHECK(c.cyy == 0.25);
    CHECK(c.cxy == 0.0);
  }
  SUBCASE("Fock |1>") {
    CavityMoments m;
    m.mean_n = 1.0;
    const auto [lo, hi] = covariance_eigenvalues(covariance_from_moments(m));
    CHECK(lo == doctest::Approx(0.75));
    CHECK(hi == doctest::Approx(0.75));
  }
  SUBCASE("coherent moments give vacuum noise") {
    CavityMoments m;
    m.mean_a = {0.6, -1.1};
    m.mean_a2 = m.mean_a * m.mean_a;
    m.mean_n = std::norm(m.mean_a);
    const auto c = covariance_from_moments(m);
    CHECK(c.cxx == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(c.cyy == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(std::abs(c.cxy) <= 1e-15);
  }
  SUBCASE("explicit entries") {
    CavityMoments m;
    m.mean_a = {0.1, 0.2};
    m.mean_a2 = {0.3, -0.4};
    m.mean_n = 0.5;
    const auto c = covariance_from_moments(m);
    CHECK(c.cxx == doctest::Approx((2 * 0.3 + 2 * 0.5 + 1) / 4 - 0.01));
    CHECK(c.cyy == doctest::Approx((-2 * 0.3 + 2 * 0.5 + 1) / 4 - 0.04));
    CHECK(c.cxy == doctest::Approx(-0.4 / 2 - 0.1 * 0.2));
  }
  SUBCASE("eigenvalues of a general matrix") {
    const auto [lo, hi] = covariance_eigenvalues({0.5, 0.3, 0.1});
    const double mid = 0.4, rad = std::hypot(0.1, 0.1);
    CHECK(lo == doctest::Approx(mid - rad).epsilon(1e-15));
    CHECK(hi == doctest::Approx(mid + rad).epsilon(1e-15));
  }
}

TEST_CASE("squeezed vacuum eigenvalues are exp(-+2r)/4") {
  const ModelParams p = sys(80, 1);
  const PropagatorPlan plan = make_plan(p, 1e-3, Method::Linear);
  const CavityIndexMap map(plan.h0_basis);
  for (double phi : {0.0, 1.1}) {
    const double r = 0.4;
    const StateVector s = cavity_state(plan, squeezed_vacuum(80, r, phi));
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-13));
    const ObservableRow row = measure(s, map, plan.jz);
    CHECK(row.lambda_minus == doctest::Approx(std::exp(-2 * r) / 4).epsilon(1e-12));
    CHECK(row.lambda_plus == doctest::Approx(std::exp(2 * r) / 4).epsilon(1e-12));
    CHECK(row.lambda_minus * row.lambda_plus == doctest::Approx(1.0 / 16).epsilon(1e-12));
    CHECK(row.mean_photon == doctest::Approx(std::sinh(r) * std::sinh(r)).epsilon(1e-12));
    CHECK(row.jz_expect == doctest::Approx(-0.5));
    CHECK(row.top_fock_pop <= 1e-20);
  }
}

TEST_CASE("index-map moments agree with dense operators") {
  std::mt19937 rng(9);
  std::normal_distribution<double> gauss;
  for (auto [nc, tj] : {std::pair{1, 0}, {2, 1}, {6, 3}, {9, 8}, {17, 2}}) {
    CAPTURE(nc);
    CAPTURE(tj);
    const ModelParams p = sys(nc, tj);
    const PropagatorPlan plan = make_plan(p, 1e-3, Method::Linear);
    const auto d = static_cast<Eigen::Index>(plan.dimension());
    Eigen::VectorXcd psi(d);
    for (Eigen::Index i = 0; i < d; ++i) psi(i) = {gauss(rng), gauss(rng)};
    psi.normalize();
    const StateVector s = from_canonical(psi, plan.h0_basis);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nc, nc);
    for (int n = 1; n < nc; ++n) a(n - 1, n) = std::sqrt(n);
    const Eigen::MatrixXd id_s = Eigen::MatrixXd::Identity(tj + 1, tj + 1);
    const Eigen::MatrixXcd big_a = Eigen::kroneckerProduct(a, id_s).eval().cast<Complex>();
    const Eigen::MatrixXd jz = dense_build(p).jz;

    const CavityIndexMap map(plan.h0_basis);
    const CavityMoments m = cavity_moments(s, map);
    CHECK(std::abs(m.mean_a - psi.dot(big_a * psi)) <= 1e-12);
    CHECK(std::abs(m.mean_a2 - psi.dot(big_a * big_a * psi)) <= 1e-12);
    CHECK(std::abs(m.mean_n - psi.dot(big_a.adjoint() * big_a * psi).real()) <= 1e-12);
    CHECK(std::abs(spin_jz_expectation(s, plan.jz) - psi.dot(jz.cast<Complex>() * psi).real()) <= 1e-12);

    double top = 0.0;
    for (int k = 0; k <= tj; ++k) top += std::norm(psi((nc - 1) * (tj + 1) + k));
    CHECK(std::abs(top_fock_population(s, map) - top) <= 1e-14);

    // Energy from the tridiagonal pieces vs the dense Hamiltonian.
    const DenseHamiltonian dense = dense_build(p);
    for (double t : {0.0, 0.37}) {
      const double e = psi.dot(dense.at(t).cast<Complex>() * psi).real();
      CHECK(std::abs(energy_expectation(s, plan, t) - e) <= 1e-12 * (1 + std::abs(e)));
    }
  }
}

TEST_CASE("single Fock level: every state sits at the top") {
  const PropagatorPlan plan = make_plan(sys(1, 2), 1e-3, Method::Linear);
  const CavityIndexMap map(plan.h0_basis);
  const StateVector s = initial_state(plan);
  CHECK(top_fock_population(s, map) == 1.0);
  const ObservableRow row = measure(s, map, plan.jz);
  CHECK(row.lambda_minus == 0.25);
  CHECK(row.lambda_plus == 0.25);
  CHECK(row.mean_photon == 0.0);
  CHECK(row.jz_expect == -1.0);
}

TEST_CASE("observables refuse a state in the wrong ordering") {
  const PropagatorPlan plan = make_plan(sys(3, 2), 1e-3, Method::Linear);
  const CavityIndexMap map(plan.h0_basis);
  StateVector s = initial_state(plan);
  s.ordering = Ordering::V;
  CHECK_THROWS_AS(cavity_moments(s, map), UsageError);
  CHECK_THROWS_AS(spin_jz_expectation(s, plan.jz), UsageError);
}
