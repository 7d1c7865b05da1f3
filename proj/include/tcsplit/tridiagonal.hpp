#pragma once

// Dependency-free kernels for symmetric tridiagonal matrices: an implicit QL
// eigensolver (EISPACK tql2 lineage) and the Thomas algorithm for complex
// tridiagonal systems.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tcsplit {

/// Eigenpairs of a real symmetric tridiagonal matrix.
/// vectors is size x size, row-major; column k holds the eigenvector of values[k].
struct TridiagonalEigen {
  std::vector<double> values;
  std::vector<double> vectors;
  std::size_t size = 0;

  double vector(std::size_t row, std::size_t k) const { return vectors[row * size + k]; }
};

/// Implicit QL with shifts. Eigenvalues come back ascending.
/// Throws NumericalError if the total iteration count exceeds 50 * size.
TridiagonalEigen tridiag_eigendecompose(std::span<const double> diag, std::span<const double> off);

/// Solves the tridiagonal system A x = rhs with
///   A(i, i) = diag[i], A(i+1, i) = lower[i], A(i, i+1) = upper[i].
/// No pivoting. Throws NumericalError when a pivot falls below 1e-14 times
/// its row scale.
std::vector<std::complex<double>> thomas_solve(std::span<const std::complex<double>> lower,
                                               std::span<const std::complex<double>> diag,
                                               std::span<const std::complex<double>> upper,
                                               std::span<const std::complex<double>> rhs);

/// Forward-elimination coefficients of a fixed tridiagonal matrix, so repeated
/// solves cost one forward and one backward sweep.
class ThomasFactorization {
public:
  ThomasFactorization() = default;
  ThomasFactorization(std::span<const std::complex<double>> lower,
                      std::span<const std::complex<double>> diag,
                      std::span<const std::complex<double>> upper);

  std::size_t size() const { return inv_pivot_.size(); }

  /// Solves in place: on entry `x` holds the right-hand side.
  void solve_in_place(std::span<std::complex<double>> x) const;

  const std::vector<std::complex<double>>& lower() const { return lower_; }
  const std::vector<std::complex<double>>& upper_scaled() const { return upper_scaled_; }
  const std::vector<std::complex<double>>& inv_pivot() const { return inv_pivot_; }

private:
  std::vector<std::complex<double>> lower_;
  std::vector<std::complex<double>> upper_scaled_;  // c'_i = upper[i] / pivot_i
  std::vector<std::complex<double>> inv_pivot_;
};

}  // namespace tcsplit
