#include "tcsplit/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tcsplit/errors.hpp"

namespace tcsplit {

std::size_t ModelParams::dimension() const {
  validate();
  const auto nc = static_cast<std::size_t>(n_cavity);
  const auto ns = static_cast<std::size_t>(two_j) + 1;
  // Largest length a std::vector<Complex> can hold on this platform.
  const std::size_t limit = std::vector<Complex>().max_size();
  if (nc > limit / ns) {
    throw ConfigError("Hilbert-space dimension overflows the index range");
  }
  return nc * ns;
}

void ModelParams::validate() const {
  if (n_cavity < 1) throw ConfigError("n_cavity must be >= 1");
  if (two_j < 0) throw ConfigError("two_j must be >= 0");
  for (double v : {omega_c, omega_s, g, lambda, omega_drive}) {
    if (!std::isfinite(v)) throw ConfigError("model frequencies must be finite");
  }
  if (g < 0.0) throw ConfigError("coupling g must be >= 0");
}

std::string_view to_string(Ordering ordering) {
  switch (ordering) {
    case Ordering::Canonical: return "canonical";
    case Ordering::H0: return "h0";
    case Ordering::V: return "v";
  }
  return "?";
}

namespace {

struct Extent {
  int n_cavity;
  int two_j;
};

// Validates that `states` is a complete enumeration and returns its extent.
Extent check_complete(std::span<const BasisState> states) {
  if (states.empty()) throw UsageError("empty basis");
  int max_n = 0;
  int max_two_m = std::numeric_limits<int>::min();
  for (const auto& s : states) {
    max_n = std::max(max_n, s.n);
    max_two_m = std::max(max_two_m, s.two_m);
  }
  const Extent ext{max_n + 1, max_two_m};
  if (ext.two_j < 0) throw UsageError("basis has negative spin");
  const std::size_t expected =
      static_cast<std::size_t>(ext.n_cavity) * static_cast<std::size_t>(ext.two_j + 1);
  if (states.size() != expected) {
    throw UsageError("basis is not a complete enumeration: expected " +
                     std::to_string(expected) + " states, got " +
                     std::to_string(states.size()));
  }
  std::vector<char> seen(expected, 0);
  for (const auto& s : states) {
    if (s.n < 0 || s.two_m < -ext.two_j || s.two_m > ext.two_j ||
        ((s.two_m + ext.two_j) & 1) != 0) {
      throw UsageError("basis state out of range");
    }
    auto& flag = seen[canonical_index(s, ext.two_j)];
    if (flag) throw UsageError("duplicate basis state");
    flag = 1;
  }
  return ext;
}

OrderedBasis sorted_by(Ordering ordering, std::span<const BasisState> states) {
  const Extent ext = check_complete(states);
  std::vector<BasisState> sorted(states.begin(), states.end());
  const int two_j = ext.two_j;
  auto key = [ordering, two_j](const BasisState& s) -> long {
    switch (ordering) {
      case Ordering::H0: return 2L * s.n + s.two_m + two_j;
      case Ordering::V: return 2L * s.n - s.two_m;
      case Ordering::Canonical: break;
    }
    return static_cast<long>(canonical_index(s, two_j));
  };
  std::sort(sorted.begin(), sorted.end(), [&](const BasisState& a, const BasisState& b) {
    const long ka = key(a);
    const long kb = key(b);
    if (ka != kb) return ka < kb;
    return a.two_m < b.two_m;
  });
  return OrderedBasis(ordering, ext.n_cavity, ext.two_j, std::move(sorted));
}

}  // namespace

OrderedBasis::OrderedBasis(Ordering ordering, int n_cavity, int two_j,
                           std::vector<BasisState> states)
    : ordering_(ordering), n_cavity_(n_cavity), two_j_(two_j), states_(std::move(states)) {
  const std::size_t d = states_.size();
  position_of_canonical_.assign(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t c = canonical_index(states_[i], two_j_);
    if (c >= d || position_of_canonical_[c] != d) {
      throw UsageError("ordered basis does not enumerate the product basis");
    }
    position_of_canonical_[c] = i;
  }
  if (ordering_ == Ordering::Canonical) {
    blocks_.push_back({0, d});
    return;
  }
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= d; ++i) {
    if (i == d || conserved_key(states_[i]) != conserved_key(states_[begin])) {
      blocks_.push_back({begin, i});
      begin = i;
    }
  }
}

long OrderedBasis::conserved_key(const BasisState& s) const {
  switch (ordering_) {
    case Ordering::H0: return 2L * s.n + s.two_m + two_j_;
    case Ordering::V: return 2L * s.n - s.two_m;
    case Ordering::Canonical: break;
  }
  return static_cast<long>(canonical_index(s, two_j_));
}

void Permutation::apply(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != forward.size() || out.size() != forward.size()) {
    throw UsageError("permutation length mismatch");
  }
  // Gather through the inverse map: sequential writes.
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = in[inverse[j]];
}

void Permutation::apply_inverse(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != forward.size() || out.size() != forward.size()) {
    throw UsageError("permutation length mismatch");
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[forward[i]];
}

std::vector<BasisState> enumerate_basis(const ModelParams& params) {
  const std::size_t d = params.dimension();
  std::vector<BasisState> states;
  states.reserve(d);
  for (int n = 0; n < params.n_cavity; ++n) {
    for (int two_m = -params.two_j; two_m <= params.two_j; two_m += 2) {
      states.push_back({n, two_m});
    }
  }
  return states;
}

OrderedBasis order_for_h0(std::span<const BasisState> states) {
  return sorted_by(Ordering::H0, states);
}

OrderedBasis order_for_v(std::span<const BasisState> states) {
  return sorted_by(Ordering::V, states);
}

OrderedBasis order_canonical(std::span<const BasisState> states) {
  return sorted_by(Ordering::Canonical, states);
}

Permutation build_permutation(const OrderedBasis& from, const OrderedBasis& to) {
  if (from.size() != to.size() || from.n_cavity() != to.n_cavity() ||
      from.two_j() != to.two_j()) {
    throw UsageError("permutation between different state sets");
  }
  const std::size_t d = from.size();
  Permutation p;
  p.from = from.ordering();
  p.to = to.ordering();
  p.forward.resize(d);
  p.inverse.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t j = to.position_of(from[i]);
    if (j >= d || to[j] != from[i]) throw UsageError("state-set mismatch in permutation");
    p.forward[i] = j;
    p.inverse[j] = i;
  }
  return p;
}

}  // namespace tcsplit
