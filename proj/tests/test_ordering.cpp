#include <doctest.h>

#include <vector>

#include "imra/error.hpp"
#include "imra/ordering.hpp"

using namespace imra;

namespace {

// closed form of the square spiral, written out branch by branch
LatticePoint spiral(std::uint64_t k) {
  if (k == 0) return {0, 0};
  std::int64_t m = 0;
  while (static_cast<std::uint64_t>((2 * m + 3) * (2 * m + 3)) <= k) ++m;
  const std::int64_t r = static_cast<std::int64_t>(k) - (2 * m + 1) * (2 * m + 1);
  if (r <= 2 * m + 1) return {-m + r, -m - 1};
  if (r <= 4 * m + 3) return {m + 1, -m - 1 + (r - 2 * m - 1)};
  if (r <= 6 * m + 5) return {m + 1 - (r - 4 * m - 3), m + 1};
  return {-m - 1, m + 1 - (r - 6 * m - 5)};
}

}  // namespace

TEST_CASE("plane ordering values") {
  CHECK(plane_ordering(0) == LatticePoint{0, 0});
  CHECK(plane_ordering(1) == LatticePoint{0, -1});
  CHECK(plane_ordering(8) == LatticePoint{-1, -1});
  for (std::uint64_t k = 0; k < 10000; ++k) REQUIRE(plane_ordering(k) == spiral(k));
}

TEST_CASE("shell sizes") {
  CHECK(shell_size(1, 0) == 2);
  CHECK(shell_size(2, 0) == 8);
  CHECK(shell_size(3, 1) == 125 - 27);
  for (int dim = 1; dim <= 4; ++dim) {
    for (int k = 0; k < 3; ++k) CHECK(shell_ordering(dim, k).size() == shell_size(dim, k));
  }
}

TEST_CASE("one-dimensional zigzag") {
  const auto p = cube_ordering_prefix(1, 5);
  CHECK(p == std::vector<LatticePoint>{{0}, {-1}, {1}, {-2}, {2}});
}

TEST_CASE("cube orderings verify") {
  CHECK(verify_ordering(2, 5).ok());
  CHECK(verify_ordering(2, 5).points == 121);
  CHECK(verify_ordering(3, 3).ok());
  CHECK(verify_ordering(3, 3).points == 343);
  CHECK(verify_ordering(4, 2).ok());
}

TEST_CASE("the one-dimensional zigzag is not neighbour preserving") {
  const OrderingReport r = verify_ordering(1, 3);
  CHECK(r.bijection);
  CHECK(r.cubes);
  CHECK_FALSE(r.neighbours);
}

TEST_CASE("an injected swap is caught") {
  std::vector<LatticePoint> seq = cube_ordering_prefix(2, 49);
  std::swap(seq[20], seq[22]);
  const OrderingReport r = verify_sequence(seq, 2, 3);
  CHECK_FALSE(r.neighbours);
  REQUIRE(r.first_violation);
  CHECK(r.first_violation->index == 20);
}

TEST_CASE("iterator matches the prefix") {
  CubeOrdering it(3);
  const auto prefix = cube_ordering_prefix(3, 200);
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    CHECK(it.index() == i);
    CHECK(it.next() == prefix[i]);
  }
  CHECK(sup_distance({1, -2, 0}, {0, 1, 0}) == 3);
}
