#include "imra/grid.hpp"

#include <cmath>
#include <sstream>

#include "imra/error.hpp"

namespace imra {

Box Box::cube(int dim, std::int64_t lo, std::int64_t hi) {
  return Box(std::vector<Interval>(static_cast<std::size_t>(dim), Interval{lo, hi}));
}

bool Box::empty() const noexcept {
  for (const auto& a : axes_) {
    if (a.empty()) return true;
  }
  return false;
}

std::uint64_t Box::size() const noexcept {
  if (axes_.empty() || empty()) return 0;
  std::uint64_t n = 1;
  for (const auto& a : axes_) n *= a.extent();
  return n;
}

bool Box::contains(const LatticePoint& p) const noexcept {
  if (p.size() != axes_.size()) return false;
  for (std::size_t l = 0; l < axes_.size(); ++l) {
    if (!axes_[l].contains(p[l])) return false;
  }
  return true;
}

Box Box::intersect(const Box& other) const {
  if (other.dim() != dim()) {
    throw Error(ErrorKind::Dimension, "cannot intersect boxes of dimension " +
                                          std::to_string(dim()) + " and " +
                                          std::to_string(other.dim()));
  }
  std::vector<Interval> out(axes_.size());
  for (std::size_t l = 0; l < axes_.size(); ++l) {
    out[l] = {std::max(axes_[l].lo, other.axes_[l].lo), std::min(axes_[l].hi, other.axes_[l].hi)};
  }
  return Box(std::move(out));
}

std::string Box::to_string() const {
  std::ostringstream os;
  for (std::size_t l = 0; l < axes_.size(); ++l) {
    if (l) os << " x ";
    os << '[' << axes_[l].lo << ',' << axes_[l].hi << ']';
  }
  return os.str();
}

std::vector<std::size_t> strides_of(const Box& box) {
  std::vector<std::size_t> s(static_cast<std::size_t>(box.dim()), 1);
  for (int l = box.dim() - 2; l >= 0; --l) {
    s[static_cast<std::size_t>(l)] =
        s[static_cast<std::size_t>(l + 1)] * box.axis(l + 1).extent();
  }
  return s;
}

void for_each_point(const Box& box, const std::function<void(const LatticePoint&)>& fn) {
  if (box.dim() == 0 || box.empty()) return;
  const auto n = static_cast<std::size_t>(box.dim());
  LatticePoint p(n);
  for (std::size_t l = 0; l < n; ++l) p[l] = box.axes()[l].lo;
  while (true) {
    fn(p);
    std::size_t l = n;
    while (l > 0) {
      --l;
      if (p[l] < box.axes()[l].hi) {
        ++p[l];
        break;
      }
      p[l] = box.axes()[l].lo;
      if (l == 0) return;
    }
  }
}

GridFunction::GridFunction(int level, Box box)
    : level_(level), box_(std::move(box)), values_(box_.size(), 0.0) {}

GridFunction::GridFunction(int level, Box box, std::vector<double> values)
    : level_(level), box_(std::move(box)), values_(std::move(values)) {
  if (values_.size() != box_.size()) {
    throw Error(ErrorKind::Shape, "grid box " + box_.to_string() + " holds " +
                                      std::to_string(box_.size()) + " values, got " +
                                      std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      const LatticePoint p = point(i);
      std::string where;
      for (std::size_t l = 0; l < p.size(); ++l) where += (l ? "," : "") + std::to_string(p[l]);
      throw Error(ErrorKind::NonFinite, "non-finite grid value at (" + where + ")");
    }
  }
}

std::size_t GridFunction::offset(std::span<const std::int64_t> p) const {
  std::size_t off = 0;
  for (int l = 0; l < dim(); ++l) {
    const Interval& a = box_.axis(l);
    off = off * a.extent() + static_cast<std::size_t>(p[static_cast<std::size_t>(l)] - a.lo);
  }
  return off;
}

LatticePoint GridFunction::point(std::size_t off) const {
  LatticePoint p(static_cast<std::size_t>(dim()));
  for (int l = dim() - 1; l >= 0; --l) {
    const Interval& a = box_.axis(l);
    p[static_cast<std::size_t>(l)] = a.lo + static_cast<std::int64_t>(off % a.extent());
    off /= a.extent();
  }
  return p;
}

double GridFunction::at(std::span<const std::int64_t> p) const {
  if (p.size() != static_cast<std::size_t>(dim())) return 0.0;
  for (int l = 0; l < dim(); ++l) {
    if (!box_.axis(l).contains(p[static_cast<std::size_t>(l)])) return 0.0;
  }
  return values_[offset(p)];
}

void GridFunction::for_each(const std::function<void(const LatticePoint&, double&)>& fn) {
  std::size_t i = 0;
  for_each_point(box_, [&](const LatticePoint& p) { fn(p, values_[i++]); });
}

void GridFunction::for_each(const std::function<void(const LatticePoint&, double)>& fn) const {
  std::size_t i = 0;
  for_each_point(box_, [&](const LatticePoint& p) { fn(p, values_[i++]); });
}

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (const double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_difference(const GridFunction& a, const GridFunction& b, const Box& region) {
  double m = 0.0;
  for_each_point(region, [&](const LatticePoint& p) {
    m = std::max(m, std::abs(a.at(p) - b.at(p)));
  });
  return m;
}

}  // namespace imra
