#pragma once

// Product basis |n> (x) |J,m> of a truncated cavity mode and a collective spin,
// plus the two orderings in which the number-conserving and the
// counter-rotating parts of the coupling become tridiagonal.

#include <compare>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace tcsplit {

using Complex = std::complex<double>;

/// Model parameters in internal units: angular frequencies in rad/ns, time in ns.
struct ModelParams {
  double omega_c = 0.0;
  double omega_s = 0.0;
  double g = 0.0;
  double lambda = 0.0;       // drive amplitude on the spin frequency
  double omega_drive = 0.0;  // drive angular frequency
  int n_cavity = 1;          // Fock truncation N_c
  int two_j = 0;             // 2J, so half-integer spins stay exact

  double spin() const { return 0.5 * two_j; }

  /// D = N_c (2J + 1). Throws ConfigError if it overflows std::size_t.
  std::size_t dimension() const;

  /// Throws ConfigError on n_cavity < 1, two_j < 0, g < 0 or non-finite values.
  void validate() const;
};

/// |n> (x) |J, m> with m stored doubled.
struct BasisState {
  int n = 0;
  int two_m = 0;

  double m() const { return 0.5 * two_m; }
  friend auto operator<=>(const BasisState&, const BasisState&) = default;
};

enum class Ordering { Canonical, H0, V };

std::string_view to_string(Ordering ordering);

/// Half-open index range [begin, end).
struct BlockRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

/// Index of a state in the canonical (n ascending, m ascending) enumeration.
inline std::size_t canonical_index(const BasisState& s, int two_j) {
  return static_cast<std::size_t>(s.n) * static_cast<std::size_t>(two_j + 1) +
         static_cast<std::size_t>((s.two_m + two_j) / 2);
}

/// A full enumeration of the basis in a fixed order, with the contiguous
/// blocks that share one value of the ordering's conserved key.
class OrderedBasis {
public:
  OrderedBasis() = default;
  OrderedBasis(Ordering ordering, int n_cavity, int two_j,
               std::vector<BasisState> states);

  Ordering ordering() const { return ordering_; }
  int n_cavity() const { return n_cavity_; }
  int two_j() const { return two_j_; }
  std::size_t size() const { return states_.size(); }

  const std::vector<BasisState>& states() const { return states_; }
  const BasisState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<BlockRange>& blocks() const { return blocks_; }

  /// Position of `s` in this ordering.
  std::size_t position_of(const BasisState& s) const {
    return position_of_canonical_[canonical_index(s, two_j_)];
  }

  /// Doubled conserved key: 2n + 2m + 2J for H0, 2n - 2m for V, canonical
  /// index for the canonical ordering.
  long conserved_key(const BasisState& s) const;

private:
  Ordering ordering_ = Ordering::Canonical;
  int n_cavity_ = 0;
  int two_j_ = 0;
  std::vector<BasisState> states_;
  std::vector<BlockRange> blocks_;
  std::vector<std::size_t> position_of_canonical_;
};

/// Index maps between two orderings of the same state set.
/// forward[i] is the position in `to` of the state at position i in `from`.
struct Permutation {
  Ordering from = Ordering::Canonical;
  Ordering to = Ordering::Canonical;
  std::vector<std::size_t> forward;
  std::vector<std::size_t> inverse;

  std::size_t size() const { return forward.size(); }

  /// out[forward[i]] = in[i]; `out` must not alias `in`.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  /// out[inverse[j]] = in[j].
  void apply_inverse(std::span<const Complex> in, std::span<Complex> out) const;
};

/// All D states, n ascending then m ascending.
///
/// The order_* functions below take any complete enumeration (every (n, m)
/// of some N_c, 2J exactly once) and throw UsageError otherwise.
std::vector<BasisState> enumerate_basis(const ModelParams& params);

/// Sort by (n + m + J, m). H0 = w_c a^dag a + g (a J+ + a^dag J-) is tridiagonal here.
OrderedBasis order_for_h0(std::span<const BasisState> states);

/// Sort by (n - m, m). V = g (a J- + a^dag J+) is tridiagonal here.
OrderedBasis order_for_v(std::span<const BasisState> states);

/// Identity-ordered wrapper over the canonical enumeration.
OrderedBasis order_canonical(std::span<const BasisState> states);

Permutation build_permutation(const OrderedBasis& from, const OrderedBasis& to);

}  // namespace tcsplit
