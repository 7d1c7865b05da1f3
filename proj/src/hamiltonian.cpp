#include "tcsplit/hamiltonian.hpp"

#include <cmath>

#include "tcsplit/errors.hpp"

namespace tcsplit {

namespace {

// J(J+1) - m(m+s) from doubled integers, exact until the final division.
double ladder_factor(int two_j, int two_m, int sign) {
  const long num = static_cast<long>(two_j) * (two_j + 2) -
                   static_cast<long>(two_m) * (two_m + 2 * sign);
  return static_cast<double>(num) / 4.0;
}

void require_ordering(const OrderedBasis& basis, Ordering expected) {
  if (basis.ordering() != expected) {
    throw UsageError("operator expects the " + std::string(to_string(expected)) +
                     " ordering, got " + std::string(to_string(basis.ordering())));
  }
}

}  // namespace

double delta_at(double t, const DriveSchedule& schedule) {
  return schedule.omega_s + schedule.lambda * std::sin(schedule.omega_drive * t);
}

TridiagonalOperator build_h0(const ModelParams& params, const OrderedBasis& h0_basis) {
  require_ordering(h0_basis, Ordering::H0);
  const std::size_t d = h0_basis.size();
  TridiagonalOperator op;
  op.ordering = Ordering::H0;
  op.blocks = h0_basis.blocks();
  op.diag.resize(d);
  op.off.assign(d > 0 ? d - 1 : 0, 0.0);
  for (std::size_t i = 0; i < d; ++i) op.diag[i] = params.omega_c * h0_basis[i].n;

  // Within a block m ascends, so neighbours are (n, m) -> (n-1, m+1):
  // <n-1, m+1| g a J+ |n, m> = g sqrt(n [J(J+1) - m(m+1)]).
  for (const auto& block : op.blocks) {
    for (std::size_t i = block.begin; i + 1 < block.end; ++i) {
      const BasisState& s = h0_basis[i];
      op.off[i] = params.g * std::sqrt(s.n * ladder_factor(params.two_j, s.two_m, +1));
    }
  }
  return op;
}

TridiagonalOperator build_v(const ModelParams& params, const OrderedBasis& v_basis) {
  require_ordering(v_basis, Ordering::V);
  const std::size_t d = v_basis.size();
  TridiagonalOperator op;
  op.ordering = Ordering::V;
  op.blocks = v_basis.blocks();
  op.diag.assign(d, 0.0);
  op.off.assign(d > 0 ? d - 1 : 0, 0.0);

  // Neighbours are (n, m) -> (n+1, m+1):
  // <n+1, m+1| g a^dag J+ |n, m> = g sqrt((n+1) [J(J+1) - m(m+1)]).
  for (const auto& block : op.blocks) {
    for (std::size_t i = block.begin; i + 1 < block.end; ++i) {
      const BasisState& s = v_basis[i];
      op.off[i] = params.g * std::sqrt((s.n + 1) * ladder_factor(params.two_j, s.two_m, +1));
    }
  }
  return op;
}

JzDiagonal build_jz(const OrderedBasis& basis) {
  JzDiagonal jz;
  jz.two_j = basis.two_j();
  jz.m_values.reserve(basis.size());
  jz.m_slot.reserve(basis.size());
  for (const auto& s : basis.states()) {
    jz.m_values.push_back(s.m());
    jz.m_slot.push_back((s.two_m + basis.two_j()) / 2);
  }
  return jz;
}

void diagonal_phase(std::span<Complex> amplitudes, const JzDiagonal& jz, double angle_coeff) {
  if (amplitudes.size() != jz.size()) throw UsageError("diagonal_phase: length mismatch");
  std::vector<Complex> table(static_cast<std::size_t>(jz.two_j) + 1);
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double m = 0.5 * (2.0 * static_cast<double>(k) - jz.two_j);
    table[k] = std::polar(1.0, -angle_coeff * m);
  }
  for (std::size_t i = 0; i < amplitudes.size(); ++i) amplitudes[i] *= table[jz.m_slot[i]];
}

void multiply(const TridiagonalOperator& op, std::span<const Complex> x, std::span<Complex> y) {
  const std::size_t d = op.size();
  if (x.size() != d || y.size() != d) throw UsageError("multiply: length mismatch");
  for (std::size_t i = 0; i < d; ++i) {
    Complex acc = op.diag[i] * x[i];
    if (i > 0) acc += op.off[i - 1] * x[i - 1];
    if (i + 1 < d) acc += op.off[i] * x[i + 1];
    y[i] = acc;
  }
}

}  // namespace tcsplit
