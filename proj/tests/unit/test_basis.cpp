#include <algorithm>
#include <climits>
#include <random>

#include "doctest.h"
#include "tcsplit/basis.hpp"
#include "tcsplit/errors.hpp"

using namespace tcsplit;

namespace {

ModelParams system(int n_cavity, int two_j) {
  ModelParams p;
  p.n_cavity = n_cavity;
  p.two_j = two_j;
  return p;
}

std::vector<std::size_t> block_sizes(const OrderedBasis& b) {
  std::vector<std::size_t> out;
  for (const auto& r : b.blocks()) out.push_back(r.size());
  return out;
}

}  // namespace

TEST_CASE("enumerate_basis lists every (n, m) once in canonical order") {
  const auto one = enumerate_basis(system(1, 0));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == BasisState{0, 0});

  const auto four = enumerate_basis(system(2, 1));
  const std::vector<BasisState> expected{{0, -1}, {0, 1}, {1, -1}, {1, 1}};
  CHECK(four == expected);

  CHECK(enumerate_basis(system(30, 19)).size() == 600);
  CHECK(system(30, 19).dimension() == 600);
}

TEST_CASE("invalid parameters are configuration errors") {
  CHECK_THROWS_AS(system(0, 1).dimension(), ConfigError);
  CHECK_THROWS_AS(system(2, -1).dimension(), ConfigError);
  ModelParams p = system(2, 1);
  p.g = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  // 2^31 x 2^31 states cannot be indexed by a vector of complex amplitudes.
  CHECK_THROWS_AS(system(INT_MAX, INT_MAX - 1).dimension(), ConfigError);
}

TEST_CASE("H0 ordering sorts by n + m + J, then m") {
  const auto states = enumerate_basis(system(2, 1));
  const OrderedBasis h0 = order_for_h0(states);
  const std::vector<BasisState> expected{{0, -1}, {1, -1}, {0, 1}, {1, 1}};
  CHECK(h0.states() == expected);
  CHECK(block_sizes(h0) == std::vector<std::size_t>{1, 2, 1});

  CHECK(block_sizes(order_for_h0(enumerate_basis(system(1, 0)))) == std::vector<std::size_t>{1});
  CHECK(block_sizes(order_for_h0(enumerate_basis(system(3, 2)))) ==
        std::vector<std::size_t>{1, 2, 3, 2, 1});
}

TEST_CASE("V ordering sorts by n - m, then m") {
  const auto states = enumerate_basis(system(2, 1));
  const OrderedBasis v = order_for_v(states);
  const std::vector<BasisState> expected{{0, 1}, {0, -1}, {1, 1}, {1, -1}};
  CHECK(v.states() == expected);
  CHECK(block_sizes(v) == std::vector<std::size_t>{1, 2, 1});

  CHECK(block_sizes(order_for_v(enumerate_basis(system(1, 0)))) == std::vector<std::size_t>{1});
  CHECK(block_sizes(order_for_v(enumerate_basis(system(3, 2)))) ==
        std::vector<std::size_t>{1, 2, 3, 2, 1});
}

TEST_CASE("orderings reject incomplete enumerations") {
  auto states = enumerate_basis(system(3, 2));
  states.pop_back();
  CHECK_THROWS_AS(order_for_h0(states), UsageError);
  states.push_back(states.front());
  CHECK_THROWS_AS(order_for_v(states), UsageError);
}

TEST_CASE("permutation between orderings") {
  const auto states = enumerate_basis(system(2, 1));
  const OrderedBasis h0 = order_for_h0(states);
  const OrderedBasis v = order_for_v(states);

  const Permutation same = build_permutation(h0, h0);
  for (std::size_t i = 0; i < same.size(); ++i) CHECK(same.forward[i] == i);

  const Permutation p = build_permutation(h0, v);
  CHECK(h0.position_of({1, -1}) == 1);
  CHECK(v.position_of({1, -1}) == 3);
  CHECK(p.forward[1] == 3);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.inverse[p.forward[i]] == i);

  const OrderedBasis other = order_for_h0(enumerate_basis(system(3, 1)));
  CHECK_THROWS_AS(build_permutation(h0, other), UsageError);
}

TEST_CASE("ordering invariants hold across system sizes") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> nc_dist(1, 120);
  std::uniform_int_distribution<int> tj_dist(0, 90);
  std::normal_distribution<double> gauss;
  int tried = 0;
  while (tried < 40) {
    const ModelParams p = system(nc_dist(rng), tj_dist(rng));
    if (p.dimension() > 10000) continue;
    ++tried;
    CAPTURE(p.n_cavity);
    CAPTURE(p.two_j);
    const auto canonical = enumerate_basis(p);
    auto sorted_canonical = canonical;
    std::sort(sorted_canonical.begin(), sorted_canonical.end());

    for (const OrderedBasis& b : {order_for_h0(canonical), order_for_v(canonical)}) {
      auto copy = b.states();
      std::sort(copy.begin(), copy.end());
      CHECK(copy == sorted_canonical);

      std::size_t covered = 0;
      std::size_t expect_begin = 0;
      for (const auto& block : b.blocks()) {
        CHECK(block.begin == expect_begin);
        expect_begin = block.end;
        covered += block.size();
        for (std::size_t i = block.begin; i < block.end; ++i) {
          CHECK(b.conserved_key(b[i]) == b.conserved_key(b[block.begin]));
          if (i > block.begin) CHECK(b[i].two_m > b[i - 1].two_m);
        }
        if (block.end < b.size()) CHECK(b.conserved_key(b[block.end]) > b.conserved_key(b[block.begin]));
      }
      CHECK(covered == p.dimension());
    }

    // Round trip on a random vector.
    const OrderedBasis h0 = order_for_h0(canonical);
    const OrderedBasis v = order_for_v(canonical);
    const Permutation fwd = build_permutation(h0, v);
    const Permutation back = build_permutation(v, h0);
    std::vector<Complex> x(p.dimension()), y(x.size()), z(x.size());
    for (auto& a : x) a = {gauss(rng), gauss(rng)};
    fwd.apply(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[fwd.forward[i]] == x[i]);
    back.apply(y, z);
    CHECK(z == x);
    fwd.apply_inverse(y, z);
    CHECK(z == x);
  }
}

TEST_CASE("square system H0 blocks peak at 2J + 1") {
  for (int side : {1, 2, 5, 16}) {
    const OrderedBasis h0 = order_for_h0(enumerate_basis(system(side, side - 1)));
    std::size_t largest = 0;
    for (const auto& b : h0.blocks()) largest = std::max(largest, b.size());
    CHECK(largest == static_cast<std::size_t>(side));
  }
}
