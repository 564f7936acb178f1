#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "imra/dyadic.hpp"
#include "imra/filters.hpp"
#include "imra/lattice.hpp"
#include "imra/tensor.hpp"

namespace imra {

constexpr int kMaxResolution = 24;

/// Values of a compactly supported function at the dyadic points k / 2^r,
/// lo <= k <= hi. Points outside [lo, hi] are implicitly zero.
template <typename T>
struct BasicDyadicTable {
  int resolution = 0;
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  std::vector<T> values;

  /// Value at k / 2^resolution.
  T at(std::int64_t k) const {
    if (k < lo || k > hi) return T{};
    return values[static_cast<std::size_t>(k - lo)];
  }
  std::size_t size() const noexcept { return values.size(); }
};

using DyadicFunctionTable = BasicDyadicTable<double>;
using ExactFunctionTable = BasicDyadicTable<Dyadic>;

/// phi(k / 2^r) by r steps of the refinement cascade phi(x) = sum_k h_k phi(2x - k),
/// starting from phi(k) = delta_(k,0). Throws Error(Resource) for r > 24 or
/// tables over 2^27 entries.
DyadicFunctionTable refine_scaling(const FilterBank& bank, int resolution);

/// Same cascade in exact dyadic arithmetic; throws Error(Overflow) when the
/// values outgrow 128-bit numerators.
ExactFunctionTable refine_scaling_exact(const FilterBank& bank, int resolution);

/// psi(k / 2^r) with psi(x) = phi(2x - 1), by reindexing the phi table at
/// resolution r - 1. Throws Error(Resolution) for r = 0.
DyadicFunctionTable refine_wavelet(const FilterBank& bank, int resolution);
ExactFunctionTable refine_wavelet_exact(const FilterBank& bank, int resolution);

/// Largest absolute table value.
double table_sup(const DyadicFunctionTable& table);

/// Evaluates phi and psi at arbitrary dyadic points up to a fixed resolution
/// budget. Tables are built on first use and shared between threads.
class ScalingEvaluator {
 public:
  explicit ScalingEvaluator(FilterBankPtr bank, int max_resolution = 12);

  const FilterBank& bank() const noexcept { return *bank_; }
  int max_resolution() const noexcept { return max_resolution_; }

  /// phi(x); throws Error(Resolution) when x needs more than max_resolution bits.
  double phi(const Dyadic& x) const;
  double psi(const Dyadic& x) const;
  /// phi or psi by orientation bit.
  double eval(int bit, const Dyadic& x) const { return bit == 0 ? phi(x) : psi(x); }

  /// phi(k / 2^r) for r <= max_resolution.
  double phi_at(std::int64_t k, int r) const;

 private:
  const DyadicFunctionTable& table() const;

  FilterBankPtr bank_;
  int max_resolution_;
  mutable std::once_flag once_;
  mutable DyadicFunctionTable table_;
};

/// Orientation-s tensor wavelet psi^[n]_s(2^j x - lambda), with x given as exact
/// dyadic coordinates. Zero outside the tensor support box.
double tensor_point_eval(const ScalingEvaluator& eval, const Orientation& s, int level,
                         std::span<const std::int64_t> lambda, std::span<const Dyadic> x);
double tensor_point_eval(const FilterBankPtr& bank, const Orientation& s, int level,
                         std::span<const std::int64_t> lambda, std::span<const Dyadic> x);

struct CoverNumber {
  int value = 0;        // N(phi^[n]) = N1^n
  int per_axis = 0;     // N1 from sampled counts
  int upper_bound = 0;  // integers in an open interval of the support length, per axis
  bool confirmed = false;  // sampled maximum reaches the support bound
};

/// Maximum number of simultaneously nonzero integer translates of phi^[n].
/// The 1-D count is sampled over one period at resolution `resolution` (>= 8)
/// and confirmed against the count implied by the support interval.
CoverNumber cover_number_report(const FilterBank& bank, int dim, int resolution = 8);
int cover_number(const FilterBank& bank, int dim);

/// max over x = m / 2^r in [lo, hi] and monomials p(x) = x^d, d <= degree, of
/// |sum_k p(k) phi(x - k) - p(x)|.
double polynomial_reproduction_check(const FilterBank& bank, int degree, std::int64_t lo,
                                     std::int64_t hi, int resolution = 6);

}  // namespace imra
