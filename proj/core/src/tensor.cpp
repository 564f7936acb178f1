#include "imra/tensor.hpp"

#include <algorithm>

#include "imra/error.hpp"

namespace imra {

namespace {

using Int = Dyadic::Int;

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::Dimension,
                "dimension " + std::to_string(dim) + " is outside 1.." + std::to_string(kMaxDim));
  }
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw Error(ErrorKind::Overflow, "exact filter sum exceeds 128-bit range");
  }
  return r;
}

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw Error(ErrorKind::Overflow, "exact filter sum exceeds 128-bit range");
  }
  return r;
}

/// All four filters rescaled to integers over the common denominator 2^exp.
struct ScaledBank {
  int exp = 0;
  // [dual][bit] -> (offset, integer coefficients)
  struct Scaled {
    int offset = 0;
    std::vector<Int> coeffs;
    Int at(std::int64_t k) const {
      const std::int64_t i = k - offset;
      if (i < 0 || i >= static_cast<std::int64_t>(coeffs.size())) return 0;
      return coeffs[static_cast<std::size_t>(i)];
    }
  };
  Scaled filters[2][2];

  explicit ScaledBank(const FilterBank& bank) {
    for (int dual = 0; dual < 2; ++dual) {
      for (int bit = 0; bit < 2; ++bit) {
        for (const auto& c : bank.axis_filter(bit, dual != 0).coeffs()) {
          exp = std::max(exp, c.exponent());
        }
      }
    }
    for (int dual = 0; dual < 2; ++dual) {
      for (int bit = 0; bit < 2; ++bit) {
        const IndexedFilter& f = bank.axis_filter(bit, dual != 0);
        Scaled& s = filters[dual][bit];
        s.offset = f.offset();
        for (const auto& c : f.coeffs()) {
          s.coeffs.push_back(c.times_pow2(exp).numerator());
        }
      }
    }
  }
};

/// One nonzero axis factor of a sum term: target index and scaled value.
struct AxisTerm {
  std::int64_t target;
  Int value;
};

/// Calls fn(target point, product value) for every element of the Cartesian
/// product of the per-axis term lists.
template <typename Fn>
void for_each_product(const std::vector<std::vector<AxisTerm>>& axes, Fn&& fn) {
  const std::size_t n = axes.size();
  for (const auto& a : axes) {
    if (a.empty()) return;
  }
  std::vector<std::size_t> idx(n, 0);
  LatticePoint target(n);
  while (true) {
    Int value = 1;
    for (std::size_t l = 0; l < n; ++l) {
      target[l] = axes[l][idx[l]].target;
      value = checked_mul(value, axes[l][idx[l]].value);
    }
    fn(target, value);
    std::size_t l = n;
    while (l > 0) {
      --l;
      if (++idx[l] < axes[l].size()) break;
      idx[l] = 0;
      if (l == 0) return;
    }
  }
}

/// Dense accumulator over a cube centred at a point that remembers which
/// cells were written, so clearing and scanning cost only the touched cells.
class CubeAccumulator {
 public:
  CubeAccumulator(int dim, std::int64_t radius)
      : dim_(dim), radius_(radius), side_(2 * radius + 1) {
    std::size_t total = 1;
    for (int l = 0; l < dim; ++l) total *= static_cast<std::size_t>(side_);
    values_.assign(total, 0);
    touched_flag_.assign(total, false);
  }

  void reset(const LatticePoint& centre) {
    centre_ = centre;
    for (const auto i : touched_) {
      values_[i] = 0;
      touched_flag_[i] = false;
    }
    touched_.clear();
  }

  void add(const LatticePoint& p, Int v) {
    const std::size_t i = index(p);
    if (!touched_flag_[i]) {
      touched_flag_[i] = true;
      touched_.push_back(i);
    }
    values_[i] = checked_add(values_[i], v);
  }

  Int get(const LatticePoint& p) const { return values_[index(p)]; }

  /// fn(point, value) for every touched cell.
  template <typename Fn>
  void for_each_touched(Fn&& fn) const {
    LatticePoint p(static_cast<std::size_t>(dim_));
    for (const auto flat : touched_) {
      std::size_t rest = flat;
      for (int l = dim_ - 1; l >= 0; --l) {
        const auto off = static_cast<std::int64_t>(rest % static_cast<std::size_t>(side_));
        rest /= static_cast<std::size_t>(side_);
        p[static_cast<std::size_t>(l)] = centre_[static_cast<std::size_t>(l)] + off - radius_;
      }
      fn(p, values_[flat]);
    }
  }

 private:
  std::size_t index(const LatticePoint& p) const {
    std::size_t i = 0;
    for (int l = 0; l < dim_; ++l) {
      const auto off = p[static_cast<std::size_t>(l)] - centre_[static_cast<std::size_t>(l)] + radius_;
      i = i * static_cast<std::size_t>(side_) + static_cast<std::size_t>(off);
    }
    return i;
  }

  int dim_;
  std::int64_t radius_;
  std::int64_t side_;
  LatticePoint centre_;
  std::vector<Int> values_;
  std::vector<bool> touched_flag_;
  std::vector<std::size_t> touched_;
};

bool within(const LatticePoint& p, std::int64_t window) {
  for (const auto c : p) {
    if (std::abs(c) > window) return false;
  }
  return true;
}

/// Iterates every point of [-window, window]^dim.
template <typename Fn>
void for_each_in_cube(int dim, std::int64_t window, Fn&& fn) {
  LatticePoint p(static_cast<std::size_t>(dim), -window);
  while (true) {
    fn(p);
    int l = dim;
    while (l > 0) {
      --l;
      if (++p[static_cast<std::size_t>(l)] <= window) break;
      p[static_cast<std::size_t>(l)] = -window;
      if (l == 0) return;
    }
  }
}

Dyadic max_abs_scaled(Int max_abs, int exp) { return Dyadic::from_parts(max_abs, exp); }

Int iabs(Int v) { return v < 0 ? -v : v; }

}  // namespace

Orientation::Orientation(int dim, unsigned mask) : dim_(dim), mask_(mask) {
  check_dim(dim);
  if (mask >= (1U << dim)) {
    throw Error(ErrorKind::Dimension, "orientation mask " + std::to_string(mask) +
                                          " does not fit dimension " + std::to_string(dim));
  }
}

Orientation Orientation::from_bits(const std::vector<int>& bits) {
  unsigned mask = 0;
  for (const int b : bits) {
    if (b != 0 && b != 1) throw Error(ErrorKind::Parameter, "orientation bits must be 0 or 1");
    mask = (mask << 1U) | static_cast<unsigned>(b);
  }
  return Orientation(static_cast<int>(bits.size()), mask);
}

Orientation Orientation::parse(const std::string& bits) {
  std::vector<int> v;
  for (const char c : bits) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::Parameter, "bad orientation string '" + bits + "'");
    }
    v.push_back(c - '0');
  }
  return from_bits(v);
}

std::string Orientation::to_string() const {
  std::string s;
  for (int l = 0; l < dim_; ++l) s.push_back(static_cast<char>('0' + bit(l)));
  return s;
}

std::vector<Orientation> orientations(int dim) {
  check_dim(dim);
  std::vector<Orientation> out;
  for (unsigned m = 0; m < (1U << dim); ++m) out.emplace_back(dim, m);
  return out;
}

std::vector<Orientation> detail_orientations(int dim) {
  auto all = orientations(dim);
  all.erase(all.begin());
  return all;
}

TensorFilterView::TensorFilterView(const FilterBank& bank, Orientation s, bool dual)
    : bank_(&bank), s_(s), dual_(dual) {
  std::vector<Interval> axes;
  for (int l = 0; l < s.dim(); ++l) {
    const IndexedFilter& f = axis_filter(l);
    axes.push_back(f.empty() ? Interval{} : Interval{f.lo(), f.hi()});
  }
  support_ = Box(std::move(axes));
}

Dyadic TensorFilterView::coeff(std::span<const std::int64_t> t) const {
  if (static_cast<int>(t.size()) != s_.dim()) {
    throw Error(ErrorKind::Dimension, "lattice point has " + std::to_string(t.size()) +
                                          " coordinates, orientation has " +
                                          std::to_string(s_.dim()));
  }
  Dyadic product(1);
  for (int l = 0; l < s_.dim(); ++l) {
    const Dyadic c = axis_filter(l).at(static_cast<int>(t[static_cast<std::size_t>(l)]));
    if (c.is_zero()) return Dyadic{};
    product *= c;
  }
  return product;
}

Dyadic tensor_coeff(const TensorFilterView& view, std::span<const std::int64_t> t) {
  return view.coeff(t);
}

Dyadic filter_duality_check(const FilterBank& bank, int dim, int window) {
  check_dim(dim);
  const ScaledBank scaled(bank);

  // mu - lambda = (mu - 2z) - (lambda - 2z) lies in supp g^(s) - supp g~^(s)
  std::int64_t radius = 0;
  for (int bit = 0; bit < 2; ++bit) {
    const auto& p = scaled.filters[0][bit];
    const auto& d = scaled.filters[1][bit];
    const std::int64_t plo = p.offset, phi = p.offset + static_cast<std::int64_t>(p.coeffs.size()) - 1;
    const std::int64_t dlo = d.offset, dhi = d.offset + static_cast<std::int64_t>(d.coeffs.size()) - 1;
    radius = std::max({radius, std::abs(plo - dhi), std::abs(phi - dlo)});
  }

  if (2 * scaled.exp * dim > 120) {
    throw Error(ErrorKind::Overflow, "duality check at this order and dimension exceeds 128 bits");
  }
  CubeAccumulator acc(dim, radius);
  const Int unit = Int{1} << (2 * scaled.exp * dim);
  Int worst = 0;

  for_each_in_cube(dim, window, [&](const LatticePoint& lambda) {
    acc.reset(lambda);
    for (unsigned mask = 0; mask < (1U << dim); ++mask) {
      const Orientation s(dim, mask);
      std::vector<std::vector<AxisTerm>> axes(static_cast<std::size_t>(dim));
      for (int l = 0; l < dim; ++l) {
        const auto& dual = scaled.filters[1][s.bit(l)];
        const auto& primal = scaled.filters[0][s.bit(l)];
        const std::int64_t lam = lambda[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < dual.coeffs.size(); ++i) {
          if (dual.coeffs[i] == 0) continue;
          // lambda - 2z = dual.offset + i  =>  z integral only for matching parity
          const std::int64_t twice_z = lam - (dual.offset + static_cast<std::int64_t>(i));
          if (twice_z % 2 != 0) continue;
          for (std::size_t k = 0; k < primal.coeffs.size(); ++k) {
            if (primal.coeffs[k] == 0) continue;
            const std::int64_t mu = twice_z + primal.offset + static_cast<std::int64_t>(k);
            axes[static_cast<std::size_t>(l)].push_back({mu, dual.coeffs[i] * primal.coeffs[k]});
          }
        }
      }
      for_each_product(axes, [&](const LatticePoint& mu, Int v) { acc.add(mu, v); });
    }
    bool diagonal_seen = false;
    acc.for_each_touched([&](const LatticePoint& mu, Int v) {
      if (!within(mu, window)) return;
      const bool diagonal = mu == lambda;
      diagonal_seen = diagonal_seen || diagonal;
      worst = std::max(worst, iabs(v - (diagonal ? unit : 0)));
    });
    if (!diagonal_seen) worst = std::max(worst, unit);
  });
  return max_abs_scaled(worst, 2 * scaled.exp * dim);
}

Dyadic BiorthogonalityDeviation::max() const {
  return std::max({scaling_scaling, scaling_wavelet, wavelet_scaling, wavelet_wavelet});
}

BiorthogonalityDeviation biorthogonality_check(const FilterBank& bank, int window) {
  // phi(m/2) = h_m for every integer m, so all pairings reduce to filter sums
  const auto phi_half = [&](std::int64_t m) { return bank.h.at(static_cast<int>(m)); };
  const IndexedFilter& gd = bank.gdual;

  BiorthogonalityDeviation dev;
  for (std::int64_t k = -window; k <= window; ++k) {
    for (std::int64_t l = -window; l <= window; ++l) {
      const std::int64_t d = k - l;
      const Dyadic kron = d == 0 ? Dyadic(1) : Dyadic(0);

      // <phi~_k, phi_l> = phi(k - l)
      dev.scaling_scaling = std::max(dev.scaling_scaling, (phi_half(2 * d) - kron).abs());
      // <phi~_k, psi_l> = psi(k - l) = phi(2(k - l) - 1)
      dev.scaling_wavelet = std::max(dev.scaling_wavelet, phi_half(2 * (2 * d - 1)).abs());

      Dyadic ws, ww;
      for (int nu = gd.lo(); !gd.empty() && nu <= gd.hi(); ++nu) {
        const Dyadic c = gd.at(nu);
        if (c.is_zero()) continue;
        // <psi~_k, phi_l> = sum_nu g~_nu phi(k - l + nu/2)
        ws += c * phi_half(2 * d + nu);
        // <psi~_k, psi_l> = sum_nu g~_nu phi(2k - 2l + nu - 1)
        ww += c * phi_half(2 * (2 * d + nu - 1));
      }
      dev.wavelet_scaling = std::max(dev.wavelet_scaling, ws.abs());
      dev.wavelet_wavelet = std::max(dev.wavelet_wavelet, (ww - kron).abs());
    }
  }
  return dev;
}

Dyadic tensor_biorthogonality_check(const FilterBank& bank, int dim, int window) {
  check_dim(dim);
  const ScaledBank scaled(bank);
  if (2 * scaled.exp * dim > 120) {
    throw Error(ErrorKind::Overflow, "biorthogonality check at this order and dimension exceeds 128 bits");
  }
  const Int unit = Int{1} << (2 * scaled.exp * dim);
  const unsigned count = 1U << dim;

  // nu - 2lambda in supp g~^(s) and nu - 2mu in supp g^(t): |mu - lambda| bounded
  std::int64_t radius = 0;
  for (int sb = 0; sb < 2; ++sb) {
    for (int tb = 0; tb < 2; ++tb) {
      const auto& d = scaled.filters[1][sb];
      const auto& p = scaled.filters[0][tb];
      const std::int64_t dlo = d.offset, dhi = d.offset + static_cast<std::int64_t>(d.coeffs.size()) - 1;
      const std::int64_t plo = p.offset, phi = p.offset + static_cast<std::int64_t>(p.coeffs.size()) - 1;
      radius = std::max({radius, (std::abs(dlo - phi) + 1) / 2 + 1, (std::abs(dhi - plo) + 1) / 2 + 1});
    }
  }

  std::vector<CubeAccumulator> acc(count, CubeAccumulator(dim, radius));
  Int worst = 0;
  for_each_in_cube(dim, window, [&](const LatticePoint& lambda) {
    for (auto& a : acc) a.reset(lambda);
    for (unsigned smask = 0; smask < count; ++smask) {
      const Orientation s(dim, smask);
      for (unsigned tmask = 0; tmask < count; ++tmask) {
        const Orientation t(dim, tmask);
        std::vector<std::vector<AxisTerm>> axes(static_cast<std::size_t>(dim));
        for (int l = 0; l < dim; ++l) {
          const auto& dual = scaled.filters[1][s.bit(l)];
          const auto& primal = scaled.filters[0][t.bit(l)];
          const std::int64_t lam = lambda[static_cast<std::size_t>(l)];
          for (std::size_t i = 0; i < dual.coeffs.size(); ++i) {
            if (dual.coeffs[i] == 0) continue;
            const std::int64_t nu = 2 * lam + dual.offset + static_cast<std::int64_t>(i);
            for (std::size_t k = 0; k < primal.coeffs.size(); ++k) {
              if (primal.coeffs[k] == 0) continue;
              const std::int64_t twice_mu = nu - (primal.offset + static_cast<std::int64_t>(k));
              if (twice_mu % 2 != 0) continue;
              axes[static_cast<std::size_t>(l)].push_back(
                  {twice_mu / 2, dual.coeffs[i] * primal.coeffs[k]});
            }
          }
        }
        for_each_product(axes, [&](const LatticePoint& mu, Int v) { acc[tmask].add(mu, v); });
      }
      for (unsigned tmask = 0; tmask < count; ++tmask) {
        bool diagonal_seen = false;
        acc[tmask].for_each_touched([&](const LatticePoint& mu, Int v) {
          if (!within(mu, window)) return;
          const bool diagonal = tmask == smask && mu == lambda;
          diagonal_seen = diagonal_seen || diagonal;
          worst = std::max(worst, iabs(v - (diagonal ? unit : 0)));
        });
        if (tmask == smask && !diagonal_seen) worst = std::max(worst, unit);
        acc[tmask].reset(lambda);
      }
    }
  });
  return max_abs_scaled(worst, 2 * scaled.exp * dim);
}

}  // namespace imra
