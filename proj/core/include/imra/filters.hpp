#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imra/dyadic.hpp"

namespace imra {

/// Finitely supported sequence (c_k) with exact dyadic entries.
///
/// Stored as a dense run starting at `offset`; construction trims zero
/// entries at both ends so the first and last stored coefficients are
/// nonzero. The empty filter is the zero sequence.
class IndexedFilter {
 public:
  IndexedFilter() = default;
  IndexedFilter(int offset, std::vector<Dyadic> coeffs);

  /// Single nonzero entry `value` at `index`.
  static IndexedFilter delta(int index, Dyadic value = Dyadic(1));

  bool empty() const noexcept { return coeffs_.empty(); }
  int offset() const noexcept { return offset_; }
  /// Lowest and highest index with a nonzero coefficient; only valid when
  /// the filter is not empty.
  int lo() const noexcept { return offset_; }
  int hi() const noexcept { return offset_ + static_cast<int>(coeffs_.size()) - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  const std::vector<Dyadic>& coeffs() const noexcept { return coeffs_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Exact coefficient at k (zero outside the stored run).
  Dyadic at(int k) const;
  /// Binary64 view of the coefficient at k.
  double value(int k) const noexcept;

  Dyadic sum() const;

  friend bool operator==(const IndexedFilter& a, const IndexedFilter& b) {
    return a.offset_ == b.offset_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int offset_ = 0;
  std::vector<Dyadic> coeffs_;
  std::vector<double> values_;
};

/// The four filters of one interpolating multiresolution analysis:
/// h (refinement mask, h_k = phi(k/2)), g = delta_1, hdual = delta_0 and
/// gdual_k = (-1)^(k-1) h_(1-k).
struct FilterBank {
  int order = 0;  // Deslauriers-Dubuc order L, 0 for a custom mask
  IndexedFilter h;
  IndexedFilter g;
  IndexedFilter hdual;
  IndexedFilter gdual;
  /// Radius of supp phi (the mask support interval is [-r, r] for symmetric masks).
  int support_radius = 0;

  /// Short identifier: `dd<L>` or `custom`.
  std::string id() const;

  /// Primal (g^(0) = h, g^(1) = g) or dual (h~, g~) filter for one axis bit.
  const IndexedFilter& axis_filter(int bit, bool dual) const noexcept {
    if (dual) return bit == 0 ? hdual : gdual;
    return bit == 0 ? h : g;
  }
};

using FilterBankPtr = std::shared_ptr<const FilterBank>;

constexpr int kMaxOrder = 16;

/// Deslauriers-Dubuc refinement mask of order L (1 <= L <= 16): h_0 = 1,
/// h_(2k) = 0 otherwise, and h_(2j-1) is the weight of node 2j-1 in the
/// Lagrange interpolant through the 2L odd nodes +-1, +-3, ..., +-(2L-1)
/// evaluated at 0.
IndexedFilter dd_scaling_filter(int order);

/// Builds g, hdual and gdual from an interpolating mask. Throws
/// Error(InvalidFilter) naming the failing index when h_(2k) != delta_(k,0)
/// or when sum h != 2.
FilterBank derive_bank(const IndexedFilter& h, int order = 0);

/// Convenience: derive_bank(dd_scaling_filter(L), L), shared.
FilterBankPtr make_dd_bank(int order);

/// Resolves `dd<L>` identifiers.
FilterBankPtr bank_from_id(const std::string& id);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  bool warning_only = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  /// True when every non-warning check passed.
  bool ok() const;
  const ValidationCheck* find(const std::string& name) const;
};

/// Gate for user-supplied masks: even-index cardinality, sum = 2, finite
/// support, and symmetry (warning only). Never throws.
ValidationReport custom_bank_validate(const IndexedFilter& h);

/// Text format, one line per filter: `name index:num/den ...` for the names
/// h, g, hd, gd. Integers are written without a denominator.
std::string format_filter_line(const std::string& name, const IndexedFilter& f);
std::string format_bank(const FilterBank& bank);

/// Parses the text format. Requires the `h` line; the other three lines, when
/// present, must agree with the values derived from h.
FilterBank parse_bank(const std::string& text);

}  // namespace imra
