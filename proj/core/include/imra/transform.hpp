#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "imra/dyadic.hpp"
#include "imra/filters.hpp"
#include "imra/grid.hpp"
#include "imra/tensor.hpp"

namespace imra {

/// Detail channels of one level keyed by orientation mask (never 0).
using DetailMap = std::map<unsigned, GridFunction>;

struct LevelSplit {
  GridFunction coarse;
  DetailMap details;
};

using SampledFunction = std::function<double(std::span<const double>)>;

/// f(lambda / 2^level) over the box. Throws Error(NonFinite) naming the
/// lattice point when f returns NaN or infinity, Error(Parameter) for levels
/// outside [-20, 20].
GridFunction sample_grid(const SampledFunction& f, int level, const Box& box);
/// Subsamples a finer grid: value at lambda is finer(2^(finer.level - level) lambda).
GridFunction sample_grid(const GridFunction& finer, int level, const Box& box);

/// One analysis step from level j+1 to level j: coarse_lambda = fine_(2 lambda)
/// and detail^s_mu = sum_nu g~^[n]_(s, nu - 2 mu) fine_nu, with the fine grid
/// zero-extended. Applied separably, axis 0 first. Coarse box per axis is
/// ceil(lo/2)..floor(hi/2); detail boxes hold every mu whose stencil touches
/// the fine box. Throws Error(LevelTooDeep) naming the axis when the coarse
/// box is empty.
LevelSplit analyze_level(const GridFunction& fine, const FilterBank& bank);

/// fine_nu = sum_s sum_mu c^s_mu g^[n]_(s, nu - 2 mu) with c^0 = coarse.
/// Missing orientations count as zero. Without a target box the output covers
/// the full reach of the stencils. Throws Error(Shape) naming the axis when
/// channel boxes disagree and Error(Dimension) on rank mismatch.
GridFunction synthesize_level(const GridFunction& coarse, const DetailMap& details,
                              const FilterBank& bank, const std::optional<Box>& target = {});

struct WaveletPyramid {
  int dim = 0;
  FilterBankPtr bank;
  int j0 = 0;
  int J = 0;
  /// Sample box at each level j0..J (index j - j0); the last one is the input box.
  std::vector<Box> level_boxes;
  GridFunction coarse;
  /// (level, orientation mask) -> coefficients multiplying psi^[n]_s(2^j . - mu).
  std::map<std::pair<int, unsigned>, GridFunction> details;

  const GridFunction* detail(int level, unsigned mask) const;
  /// Sample box at level j.
  const Box& box_at(int level) const { return level_boxes.at(static_cast<std::size_t>(level - j0)); }
  std::size_t detail_count() const;
};

/// Repeated analyze_level from fine.level() down to j0.
WaveletPyramid decompose(const GridFunction& fine, int j0, FilterBankPtr bank);

/// Inverse of decompose; each level is cropped to its recorded box.
GridFunction reconstruct(const WaveletPyramid& pyr);

/// Pyramid restricted to levels < j (the P_j f part); j in [j0, J].
WaveletPyramid truncate(const WaveletPyramid& pyr, int level);

/// (P_j f)(x) = sum_lambda f(lambda / 2^j) phi^[n](2^j x - lambda), with the
/// samples taken from a grid at level >= j.
double project_eval(const GridFunction& grid, const FilterBankPtr& bank, int level,
                    std::span<const Dyadic> x);
double project_eval(const WaveletPyramid& pyr, int level, std::span<const Dyadic> x);

/// Stencil reach of one level at the fine scale: twice the mask radius.
std::int64_t level_reach(const FilterBank& bank);

/// Shrinks the box by level_reach * 2^m for m = 0..levels-1. May be empty.
Box interior_box(const Box& box, int levels, const FilterBank& bank);

/// Detail positions mu of orientation s whose stencil lies inside the fine box,
/// i.e. coefficients unaffected by zero extension.
Box clean_detail_box(const Box& fine_box, const Orientation& s, const FilterBank& bank);

struct ThresholdResult {
  WaveletPyramid pyramid;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  double dropped_l1 = 0.0;
};

/// Zeroes detail coefficients with |c| <= tau; the coarse grid is untouched.
ThresholdResult threshold(const WaveletPyramid& pyr, double tau);

}  // namespace imra
