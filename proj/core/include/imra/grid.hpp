#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "imra/lattice.hpp"

namespace imra {

/// Samples f(lambda / 2^level) over an integer box, stored row-major with the
/// last axis fastest. f is taken to vanish outside the box.
class GridFunction {
 public:
  GridFunction() = default;
  /// Zero grid.
  GridFunction(int level, Box box);
  /// Throws Error(Shape) when the value count does not match the box and
  /// Error(NonFinite) on NaN or infinite entries.
  GridFunction(int level, Box box, std::vector<double> values);

  int dim() const noexcept { return box_.dim(); }
  int level() const noexcept { return level_; }
  const Box& box() const noexcept { return box_; }
  std::size_t size() const noexcept { return values_.size(); }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  /// Row-major offset of a point inside the box.
  std::size_t offset(std::span<const std::int64_t> p) const;
  /// Point at a row-major offset.
  LatticePoint point(std::size_t offset) const;

  /// Value at p; zero outside the box.
  double at(std::span<const std::int64_t> p) const;
  double& ref(std::span<const std::int64_t> p) { return values_[offset(p)]; }

  /// Calls fn(point, value&) for every site in row-major order.
  void for_each(const std::function<void(const LatticePoint&, double&)>& fn);
  void for_each(const std::function<void(const LatticePoint&, double)>& fn) const;

  double max_abs() const noexcept;

 private:
  int level_ = 0;
  Box box_;
  std::vector<double> values_;
};

/// max |a - b| over the sites of `region` (zero extension outside each box).
double max_abs_difference(const GridFunction& a, const GridFunction& b, const Box& region);

/// Row-major strides of a box (last axis stride 1).
std::vector<std::size_t> strides_of(const Box& box);

/// Calls fn for every point of a box in row-major order.
void for_each_point(const Box& box, const std::function<void(const LatticePoint&)>& fn);

}  // namespace imra
