#pragma once

#include <span>
#include <string>
#include <vector>

#include "imra/dyadic.hpp"
#include "imra/filters.hpp"
#include "imra/lattice.hpp"

namespace imra {

constexpr int kMaxDim = 4;

/// s in {0,1}^n. Axis 0 is the most significant bit of the mask so that
/// numeric mask order is lexicographic tuple order; mask 0 is the scaling
/// orientation.
class Orientation {
 public:
  Orientation() = default;
  Orientation(int dim, unsigned mask);
  static Orientation from_bits(const std::vector<int>& bits);
  /// Parses a bit string such as "011".
  static Orientation parse(const std::string& bits);

  int dim() const noexcept { return dim_; }
  unsigned mask() const noexcept { return mask_; }
  int bit(int axis) const noexcept { return static_cast<int>((mask_ >> (dim_ - 1 - axis)) & 1U); }
  bool is_scaling() const noexcept { return mask_ == 0; }

  std::string to_string() const;

  friend bool operator==(const Orientation&, const Orientation&) = default;
  friend auto operator<=>(const Orientation&, const Orientation&) = default;

 private:
  int dim_ = 0;
  unsigned mask_ = 0;
};

/// All 2^n orientations in lexicographic order, all-zero first.
std::vector<Orientation> orientations(int dim);
/// The 2^n - 1 detail orientations (all but the first).
std::vector<Orientation> detail_orientations(int dim);

/// Lazy view of g^[n]_(s,t) = prod_l g^(s_l)_(t_l) (or the dual filters).
class TensorFilterView {
 public:
  TensorFilterView(const FilterBank& bank, Orientation s, bool dual);

  const Orientation& orientation() const noexcept { return s_; }
  bool dual() const noexcept { return dual_; }
  /// Product of the per-axis supports.
  const Box& support() const noexcept { return support_; }

  const IndexedFilter& axis_filter(int axis) const noexcept {
    return bank_->axis_filter(s_.bit(axis), dual_);
  }

  /// Exact coefficient at t; zero outside the support box.
  Dyadic coeff(std::span<const std::int64_t> t) const;

 private:
  const FilterBank* bank_;
  Orientation s_;
  bool dual_;
  Box support_;
};

Dyadic tensor_coeff(const TensorFilterView& view, std::span<const std::int64_t> t);

/// max |sum_s sum_z g~^[n]_(s,lambda-2z) g^[n]_(s,mu-2z) - delta_(lambda,mu)|
/// over lambda, mu in [-window, window]^n, in exact arithmetic.
Dyadic filter_duality_check(const FilterBank& bank, int dim, int window);

/// Exact deviations of the four one-level pairings between dual functionals
/// and primal functions at |k|, |l| <= window:
/// <phi~_k, phi_l> = delta, <phi~_k, psi_l> = 0, <psi~_k, phi_l> = 0,
/// <psi~_k, psi_l> = delta. Evaluated from filter values only.
struct BiorthogonalityDeviation {
  Dyadic scaling_scaling;
  Dyadic scaling_wavelet;
  Dyadic wavelet_scaling;
  Dyadic wavelet_wavelet;

  Dyadic max() const;
};
BiorthogonalityDeviation biorthogonality_check(const FilterBank& bank, int window);

/// max |sum_nu g~^[n]_(s,nu-2lambda) g^[n]_(t,nu-2mu) - delta_st delta_(lambda,mu)|
/// over all orientation pairs and lambda, mu in [-window, window]^n.
Dyadic tensor_biorthogonality_check(const FilterBank& bank, int dim, int window);

}  // namespace imra
