#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace imra {

using LatticePoint = std::vector<std::int64_t>;

/// Closed integer interval [lo, hi]; empty when hi < lo.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  bool empty() const noexcept { return hi < lo; }
  std::uint64_t extent() const noexcept {
    return empty() ? 0 : static_cast<std::uint64_t>(hi - lo + 1);
  }
  bool contains(std::int64_t k) const noexcept { return lo <= k && k <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned box of the integer lattice Z^n.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> axes) : axes_(std::move(axes)) {}

  /// [lo, hi]^n
  static Box cube(int dim, std::int64_t lo, std::int64_t hi);

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  const Interval& axis(int l) const { return axes_.at(static_cast<std::size_t>(l)); }
  Interval& axis(int l) { return axes_.at(static_cast<std::size_t>(l)); }
  const std::vector<Interval>& axes() const noexcept { return axes_; }

  bool empty() const noexcept;
  std::uint64_t size() const noexcept;
  bool contains(const LatticePoint& p) const noexcept;

  Box intersect(const Box& other) const;

  std::string to_string() const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> axes_;
};

/// Floor and ceiling of a / 2 for any sign.
constexpr std::int64_t floor_half(std::int64_t a) noexcept { return a >= 0 ? a / 2 : -((-a + 1) / 2); }
constexpr std::int64_t ceil_half(std::int64_t a) noexcept { return a >= 0 ? (a + 1) / 2 : -((-a) / 2); }

}  // namespace imra
