#pragma once

#include <span>
#include <vector>

#include "tcsplit/basis.hpp"

namespace tcsplit {

/// Real-symmetric tridiagonal operator in one basis ordering.
/// off[i] couples positions i and i+1 and is exactly 0.0 across block
/// boundaries, so whole-vector sweeps decouple the blocks automatically.
struct TridiagonalOperator {
  Ordering ordering = Ordering::Canonical;
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<BlockRange> blocks;

  std::size_t size() const { return diag.size(); }
};

/// Delta(t) = omega_s + Lambda sin(omega t).
struct DriveSchedule {
  double omega_s = 0.0;
  double lambda = 0.0;
  double omega_drive = 0.0;

  DriveSchedule() = default;
  explicit DriveSchedule(const ModelParams& p)
      : omega_s(p.omega_s), lambda(p.lambda), omega_drive(p.omega_drive) {}
};

double delta_at(double t, const DriveSchedule& schedule);

/// Jz eigenvalues over the H0 ordering. m_slot[i] = (two_m + 2J) / 2 indexes
/// a per-m table of length 2J + 1.
struct JzDiagonal {
  std::vector<double> m_values;
  std::vector<int> m_slot;
  int two_j = 0;

  std::size_t size() const { return m_values.size(); }
};

TridiagonalOperator build_h0(const ModelParams& params, const OrderedBasis& h0_basis);
TridiagonalOperator build_v(const ModelParams& params, const OrderedBasis& v_basis);
JzDiagonal build_jz(const OrderedBasis& basis);

/// amplitude[i] *= exp(-i * angle_coeff * m_i)
void diagonal_phase(std::span<Complex> amplitudes, const JzDiagonal& jz, double angle_coeff);

/// y = T x
void multiply(const TridiagonalOperator& op, std::span<const Complex> x, std::span<Complex> y);

}  // namespace tcsplit
