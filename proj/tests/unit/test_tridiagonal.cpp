#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "tcsplit/errors.hpp"
#include "tcsplit/tridiagonal.hpp"

using namespace tcsplit;
using C = std::complex<double>;

TEST_CASE("eigenvalues of small tridiagonal matrices") {
  SUBCASE("1x1") {
    const auto e = tridiag_eigendecompose(std::vector<double>{2.5}, std::vector<double>{});
    CHECK(e.values == std::vector<double>{2.5});
    CHECK(e.vector(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("2x2 [[0,1],[1,0]]") {
    const auto e = tridiag_eigendecompose(std::vector<double>{0, 0}, std::vector<double>{1});
    CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(e.vector(0, 1)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(e.vector(0, 1) * e.vector(1, 1) > 0.0);
    CHECK(e.vector(0, 0) * e.vector(1, 0) < 0.0);
  }
  SUBCASE("free-particle chain: 2 cos(k pi / (n + 1))") {
    const std::size_t n = 9;
    const auto e = tridiag_eigendecompose(std::vector<double>(n, 0.0), std::vector<double>(n - 1, 1.0));
    for (std::size_t k = 0; k < n; ++k) {
      const double expect = -2.0 * std::cos((k + 1) * M_PI / (n + 1));
      CHECK(e.values[k] == doctest::Approx(expect).epsilon(1e-14).scale(1.0));
    }
  }
  SUBCASE("zero couplings keep the diagonal") {
    const auto e = tridiag_eigendecompose(std::vector<double>{3, -1, 2}, std::vector<double>{0, 0});
    CHECK(e.values == std::vector<double>{-1, 2, 3});
  }
}

TEST_CASE("random tridiagonal eigenpairs match Eigen") {
  std::mt19937 rng(11);
  std::normal_distribution<double> gauss;
  for (std::size_t n : {2u, 3u, 7u, 30u, 120u}) {
    CAPTURE(n);
    std::vector<double> d(n), o(n - 1);
    for (auto& x : d) x = gauss(rng);
    for (auto& x : o) x = gauss(rng);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = d[i];
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = o[i];
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    const auto e = tridiag_eigendecompose(d, o);
    Eigen::MatrixXd q(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) q(i, k) = e.vector(i, k);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(e.values[k] - ref.eigenvalues()(k)) <= 1e-12 * n);
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12 * n);
    const Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(e.values.data(), n);
    CHECK((a * q - q * lam.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-12 * n);
  }
}

TEST_CASE("eigensolver rejects non-finite input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(tridiag_eigendecompose(std::vector<double>{1, nan}, std::vector<double>{1}), NumericalError);
  CHECK_THROWS_AS(tridiag_eigendecompose(std::vector<double>{1, 2}, std::vector<double>{INFINITY}),
                  NumericalError);
}

TEST_CASE("Thomas solve matches a dense LU solve") {
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss;
  for (std::size_t n : {1u, 2u, 5u, 64u, 500u}) {
    CAPTURE(n);
    std::vector<C> lo(n ? n - 1 : 0), di(n), up(n ? n - 1 : 0), rhs(n);
    for (auto& x : lo) x = {gauss(rng), gauss(rng)};
    for (auto& x : up) x = {gauss(rng), gauss(rng)};
    for (auto& x : di) x = {4.0 + gauss(rng), gauss(rng)};  // diagonally dominant on average
    for (auto& x : rhs) x = {gauss(rng), gauss(rng)};
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = di[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      a(i + 1, i) = lo[i];
      a(i, i + 1) = up[i];
    }
    const Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(rhs.data(), n);
    const Eigen::VectorXcd ref = a.partialPivLu().solve(b);
    const auto x = thomas_solve(lo, di, up, rhs);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - ref(i)) <= 1e-10);

    const ThomasFactorization f(lo, di, up);
    auto y = rhs;
    f.solve_in_place(y);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - x[i]) <= 1e-14 * (1 + std::abs(x[i])));
  }
}

TEST_CASE("Thomas solve reports a vanishing pivot") {
  // [[1, 1], [1, 1]] is singular; the second pivot is exactly zero.
  const std::vector<C> lo{1.0}, di{1.0, 1.0}, up{1.0}, rhs{1.0, 2.0};
  CHECK_THROWS_AS(thomas_solve(lo, di, up, rhs), NumericalError);
  CHECK_THROWS_AS(ThomasFactorization(lo, di, up), NumericalError);
  const std::vector<C> zero{0.0};
  CHECK_THROWS_AS(thomas_solve(std::vector<C>{}, zero, std::vector<C>{}, std::vector<C>{1.0}), NumericalError);
}
