#include "tcsplit/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tcsplit/errors.hpp"

namespace tcsplit {

TridiagonalEigen tridiag_eigendecompose(std::span<const double> diag,
                                        std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0) throw UsageError("tridiag_eigendecompose: empty matrix");
  if (off.size() + 1 != n) throw UsageError("tridiag_eigendecompose: off must have size-1 entries");

  for (double x : diag) if (!std::isfinite(x)) throw NumericalError("tridiag_eigendecompose: non-finite input");
  for (double x : off) if (!std::isfinite(x)) throw NumericalError("tridiag_eigendecompose: non-finite input");

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t max_iterations = 50 * n;
  std::size_t iterations = 0;
  double shift_total = 0.0;
  double tst1 = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    // Find a negligible subdiagonal element e[m]; e[n-1] is zero.
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      do {
        if (++iterations > max_iterations) {
          throw NumericalError("tridiagonal eigensolver did not converge after " +
                               std::to_string(max_iterations) + " iterations");
        }
        // Shift from the leading 2x2 eigenvalue closest to d[l].
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        shift_total += h;

        // Implicit QL sweep from m-1 down to l.
        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            double& zk0 = z[k * n + ii];
            double& zk1 = z[k * n + ii + 1];
            const double t = zk1;
            zk1 = s * zk0 + c * t;
            zk0 = c * zk0 - s * t;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += shift_total;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.size = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    for (std::size_t row = 0; row < n; ++row) out.vectors[row * n + k] = z[row * n + order[k]];
  }
  return out;
}

namespace {

using C = std::complex<double>;

void check_lengths(std::size_t lower, std::size_t diag, std::size_t upper) {
  if (diag == 0) throw UsageError("thomas: empty system");
  if (lower + 1 != diag || upper + 1 != diag) {
    throw UsageError("thomas: lower/upper must have size-1 entries");
  }
}

C checked_pivot(C pivot, double row_scale, std::size_t row) {
  if (!(std::abs(pivot) >= 1e-14 * row_scale) || row_scale == 0.0) {
    throw NumericalError("thomas: near-singular pivot at row " + std::to_string(row));
  }
  return pivot;
}

double row_scale(std::span<const C> lower, std::span<const C> diag, std::span<const C> upper,
                 std::size_t i) {
  double s = std::abs(diag[i]);
  if (i > 0) s += std::abs(lower[i - 1]);
  if (i + 1 < diag.size()) s += std::abs(upper[i]);
  return s;
}

}  // namespace

ThomasFactorization::ThomasFactorization(std::span<const C> lower, std::span<const C> diag,
                                         std::span<const C> upper) {
  check_lengths(lower.size(), diag.size(), upper.size());
  const std::size_t n = diag.size();
  lower_.assign(lower.begin(), lower.end());
  upper_scaled_.assign(n > 0 ? n - 1 : 0, C{});
  inv_pivot_.resize(n);
  C pivot = checked_pivot(diag[0], row_scale(lower, diag, upper, 0), 0);
  inv_pivot_[0] = 1.0 / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    upper_scaled_[i - 1] = upper[i - 1] * inv_pivot_[i - 1];
    pivot = checked_pivot(diag[i] - lower[i - 1] * upper_scaled_[i - 1],
                          row_scale(lower, diag, upper, i), i);
    inv_pivot_[i] = 1.0 / pivot;
  }
}

void ThomasFactorization::solve_in_place(std::span<C> x) const {
  const std::size_t n = size();
  if (x.size() != n) throw UsageError("thomas: rhs length mismatch");
  x[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i - 1] * x[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper_scaled_[i] * x[i + 1];
}

std::vector<C> thomas_solve(std::span<const C> lower, std::span<const C> diag,
                            std::span<const C> upper, std::span<const C> rhs) {
  check_lengths(lower.size(), diag.size(), upper.size());
  if (rhs.size() != diag.size()) throw UsageError("thomas: rhs length mismatch");
  ThomasFactorization f(lower, diag, upper);
  std::vector<C> x(rhs.begin(), rhs.end());
  f.solve_in_place(x);
  return x;
}

}  // namespace tcsplit
