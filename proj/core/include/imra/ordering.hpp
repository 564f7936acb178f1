#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imra/lattice.hpp"

namespace imra {

/// Square spiral sigma_pl : N -> Z^2. Shell m (sup-norm m+1) occupies
/// indices (2m+1)^2 .. (2m+3)^2 - 1 and ends at (-m-1, -m-1).
LatticePoint plane_ordering(std::uint64_t k);

/// Number of lattice points with sup-norm exactly k+1 in dimension n.
std::uint64_t shell_size(int dim, int k);

/// Ordered shell of sup-norm k+1 in dimension n (1 <= n <= 4). Dimension 2
/// uses the spiral, higher dimensions the recursive construction from the
/// (n-1)-dimensional shells; dimension 1 is the zigzag -(k+1), k+1. Results
/// are memoized and shared between threads.
const std::vector<LatticePoint>& shell_ordering(int dim, int k);

/// Streams 0, then every shell in order.
class CubeOrdering {
 public:
  explicit CubeOrdering(int dim);

  int dim() const noexcept { return dim_; }
  /// Index of the point that the next call to next() returns.
  std::uint64_t index() const noexcept { return index_; }
  LatticePoint next();

 private:
  int dim_;
  std::uint64_t index_ = 0;
  int shell_ = -1;
  std::size_t pos_ = 0;
};

/// First `count` points of the cube ordering.
std::vector<LatticePoint> cube_ordering_prefix(int dim, std::size_t count);

struct OrderingViolation {
  std::uint64_t index = 0;
  std::string check;
  std::string message;
};

struct OrderingReport {
  int dim = 0;
  int shells = 0;  // K
  std::uint64_t points = 0;
  bool bijection = true;
  bool neighbours = true;
  bool cubes = true;          // shell monotonicity
  bool endpoints = true;      // each shell ends at (-k-1, ..., -k-1)
  bool shell_conditions = true;  // neighbour conditions between shell ends and starts
  std::optional<OrderingViolation> first_violation;

  bool ok() const noexcept {
    return bijection && neighbours && cubes && endpoints && shell_conditions;
  }
};

/// Checks a sequence that should enumerate [-K, K]^n: bijection, sup-norm
/// step 1, shell monotonicity and shell endpoints.
OrderingReport verify_sequence(const std::vector<LatticePoint>& seq, int dim, int K);

/// verify_sequence on the first (2K+1)^n points of the cube ordering, plus
/// the shell-level neighbour conditions for dimensions >= 2. Throws
/// Error(Resource) when (2K+1)^n exceeds 10^7.
OrderingReport verify_ordering(int dim, int K);

/// Sup-norm distance.
std::int64_t sup_distance(const LatticePoint& a, const LatticePoint& b);

}  // namespace imra
