#include "imra/scaling.hpp"

#include <cmath>

#include "imra/error.hpp"

namespace imra {

namespace {

constexpr std::int64_t kMaxTableEntries = std::int64_t{1} << 27;

template <typename T>
T filter_value(const IndexedFilter& f, int k);

template <>
double filter_value<double>(const IndexedFilter& f, int k) {
  return f.value(k);
}

template <>
Dyadic filter_value<Dyadic>(const IndexedFilter& f, int k) {
  return f.at(k);
}

template <typename T>
BasicDyadicTable<T> cascade(const FilterBank& bank, int resolution) {
  if (resolution < 0) {
    throw Error(ErrorKind::Resolution, "resolution must be nonnegative");
  }
  if (resolution > kMaxResolution) {
    throw Error(ErrorKind::Resource, "resolution " + std::to_string(resolution) +
                                         " exceeds the supported maximum of " +
                                         std::to_string(kMaxResolution));
  }
  const IndexedFilter& h = bank.h;
  const std::int64_t lo0 = h.lo();
  const std::int64_t hi0 = h.hi();
  if ((hi0 - lo0) * (std::int64_t{1} << resolution) + 1 > kMaxTableEntries) {
    throw Error(ErrorKind::Resource, "table for resolution " + std::to_string(resolution) +
                                         " would exceed 2^27 entries");
  }

  BasicDyadicTable<T> table;
  table.resolution = 0;
  table.lo = lo0;
  table.hi = hi0;
  table.values.assign(static_cast<std::size_t>(hi0 - lo0 + 1), T{});
  table.values[static_cast<std::size_t>(-lo0)] = T(1);

  for (int m = 1; m <= resolution; ++m) {
    BasicDyadicTable<T> next;
    next.resolution = m;
    next.lo = lo0 << m;
    next.hi = hi0 << m;
    next.values.resize(static_cast<std::size_t>(next.hi - next.lo + 1));
    const std::int64_t step = std::int64_t{1} << (m - 1);
    for (std::int64_t k = next.lo; k <= next.hi; ++k) {
      T v{};
      if (k % 2 == 0) {
        v = table.at(k / 2);
      } else {
        // phi(k/2^m) = sum_i h_i phi((k - i 2^(m-1)) / 2^(m-1))
        for (int i = h.lo(); i <= h.hi(); ++i) {
          const T c = filter_value<T>(h, i);
          if (c == T{}) continue;
          v += c * table.at(k - i * step);
        }
      }
      next.values[static_cast<std::size_t>(k - next.lo)] = v;
    }
    table = std::move(next);
  }
  return table;
}

template <typename T>
BasicDyadicTable<T> wavelet_from(const FilterBank& bank, int resolution) {
  if (resolution < 1) {
    throw Error(ErrorKind::Resolution,
                "psi at resolution 0 needs phi at half-integers; use resolution >= 1");
  }
  BasicDyadicTable<T> t = cascade<T>(bank, resolution - 1);
  const std::int64_t shift = std::int64_t{1} << (resolution - 1);
  t.resolution = resolution;
  t.lo += shift;
  t.hi += shift;
  return t;
}

}  // namespace

DyadicFunctionTable refine_scaling(const FilterBank& bank, int resolution) {
  return cascade<double>(bank, resolution);
}

ExactFunctionTable refine_scaling_exact(const FilterBank& bank, int resolution) {
  return cascade<Dyadic>(bank, resolution);
}

DyadicFunctionTable refine_wavelet(const FilterBank& bank, int resolution) {
  return wavelet_from<double>(bank, resolution);
}

ExactFunctionTable refine_wavelet_exact(const FilterBank& bank, int resolution) {
  return wavelet_from<Dyadic>(bank, resolution);
}

double table_sup(const DyadicFunctionTable& table) {
  double m = 0.0;
  for (const double v : table.values) m = std::max(m, std::abs(v));
  return m;
}

ScalingEvaluator::ScalingEvaluator(FilterBankPtr bank, int max_resolution)
    : bank_(std::move(bank)), max_resolution_(max_resolution) {
  if (max_resolution < 1 || max_resolution > kMaxResolution) {
    throw Error(ErrorKind::Resource, "evaluator resolution must lie in 1.." +
                                         std::to_string(kMaxResolution));
  }
}

const DyadicFunctionTable& ScalingEvaluator::table() const {
  std::call_once(once_, [this] { table_ = refine_scaling(*bank_, max_resolution_); });
  return table_;
}

double ScalingEvaluator::phi_at(std::int64_t k, int r) const {
  if (r < 0 || r > max_resolution_) {
    throw Error(ErrorKind::Resolution, "point needs resolution " + std::to_string(r) +
                                           ", evaluator holds " +
                                           std::to_string(max_resolution_));
  }
  const auto& t = table();
  const int shift = max_resolution_ - r;
  if (k < (t.lo >> shift) - 1 || k > (t.hi >> shift) + 1) return 0.0;
  return t.at(k * (std::int64_t{1} << shift));
}

double ScalingEvaluator::phi(const Dyadic& x) const {
  if (x.exponent() > max_resolution_) {
    throw Error(ErrorKind::Resolution, "point " + x.to_string() + " needs resolution " +
                                           std::to_string(x.exponent()) + ", evaluator holds " +
                                           std::to_string(max_resolution_));
  }
  const auto& t = table();
  const Dyadic::Int bound = Dyadic::Int{1} << 62;
  if (x.numerator() > bound || x.numerator() < -bound) return 0.0;
  const Dyadic::Int scaled = x.numerator() * (Dyadic::Int{1} << (max_resolution_ - x.exponent()));
  if (scaled < t.lo || scaled > t.hi) return 0.0;
  return t.at(static_cast<std::int64_t>(scaled));
}

double ScalingEvaluator::psi(const Dyadic& x) const { return phi(x.times_pow2(1) - Dyadic(1)); }

double tensor_point_eval(const ScalingEvaluator& eval, const Orientation& s, int level,
                         std::span<const std::int64_t> lambda, std::span<const Dyadic> x) {
  const auto n = static_cast<std::size_t>(s.dim());
  if (lambda.size() != n || x.size() != n) {
    throw Error(ErrorKind::Dimension, "tensor_point_eval: orientation has " + std::to_string(n) +
                                          " axes, got lattice point of " +
                                          std::to_string(lambda.size()) + " and point of " +
                                          std::to_string(x.size()));
  }
  double product = 1.0;
  for (std::size_t l = 0; l < n; ++l) {
    const Dyadic y = x[l].times_pow2(level) - Dyadic(lambda[l]);
    const double v = eval.eval(s.bit(static_cast<int>(l)), y);
    if (v == 0.0) return 0.0;
    product *= v;
  }
  return product;
}

double tensor_point_eval(const FilterBankPtr& bank, const Orientation& s, int level,
                         std::span<const std::int64_t> lambda, std::span<const Dyadic> x) {
  int needed = 1;
  for (std::size_t l = 0; l < x.size(); ++l) {
    const Dyadic y = x[l].times_pow2(level);
    needed = std::max(needed, y.exponent() + 1);
  }
  if (needed > kMaxResolution) {
    throw Error(ErrorKind::Resolution, "point needs resolution " + std::to_string(needed) +
                                           " after the affine map, maximum is " +
                                           std::to_string(kMaxResolution));
  }
  const ScalingEvaluator eval(bank, needed);
  return tensor_point_eval(eval, s, level, lambda, x);
}

CoverNumber cover_number_report(const FilterBank& bank, int dim, int resolution) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::Dimension, "cover number supports dimensions 1.." + std::to_string(kMaxDim));
  }
  resolution = std::max(resolution, 8);
  const DyadicFunctionTable t = refine_scaling(bank, resolution);
  const std::int64_t period = std::int64_t{1} << resolution;

  int best = 0;
  for (std::int64_t m = 0; m < period; ++m) {
    int count = 0;
    // x = m / 2^r; translates k with x - k inside the table range
    for (std::int64_t k = (m - t.hi) / period - 1; k <= (m - t.lo) / period + 1; ++k) {
      if (t.at(m - k * period) != 0.0) ++count;
    }
    best = std::max(best, count);
  }

  CoverNumber report;
  report.per_axis = best;
  report.upper_bound = bank.h.hi() - bank.h.lo();
  report.confirmed = best == report.upper_bound;
  report.value = 1;
  for (int l = 0; l < dim; ++l) report.value *= best;
  return report;
}

int cover_number(const FilterBank& bank, int dim) { return cover_number_report(bank, dim).value; }

double polynomial_reproduction_check(const FilterBank& bank, int degree, std::int64_t lo,
                                     std::int64_t hi, int resolution) {
  const DyadicFunctionTable t = refine_scaling(bank, resolution);
  const std::int64_t scale = std::int64_t{1} << resolution;
  double worst = 0.0;
  for (std::int64_t m = lo * scale; m <= hi * scale; ++m) {
    const double x = std::ldexp(static_cast<double>(m), -resolution);
    for (int d = 0; d <= degree; ++d) {
      double sum = 0.0;
      for (std::int64_t k = (m - t.hi) / scale - 1; k <= (m - t.lo) / scale + 1; ++k) {
        const double v = t.at(m - k * scale);
        if (v == 0.0) continue;
        sum += std::pow(static_cast<double>(k), d) * v;
      }
      worst = std::max(worst, std::abs(sum - std::pow(x, d)));
    }
  }
  return worst;
}

}  // namespace imra
