#include "imra/transform.hpp"

#include <cmath>
#include <deque>

#include "imra/error.hpp"
#include "imra/parallel.hpp"
#include "imra/scaling.hpp"

namespace imra {

namespace {

using ChannelRefs = std::map<unsigned, const GridFunction*>;

struct AxisLayout {
  std::size_t outer = 1;
  std::size_t inner = 1;
};

AxisLayout layout_of(const Box& box, int axis) {
  AxisLayout a;
  for (int l = 0; l < axis; ++l) a.outer *= box.axis(l).extent();
  for (int l = axis + 1; l < box.dim(); ++l) a.inner *= box.axis(l).extent();
  return a;
}

std::string interval_string(const Interval& iv) {
  return "[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]";
}

unsigned axis_bit(int dim, int axis) { return 1U << (dim - 1 - axis); }

// out_k = sum_t F_t in_(2k + t) along one axis.
GridFunction analysis_axis(const GridFunction& in, int axis, const IndexedFilter& filter,
                           const Interval& out_iv, int out_level) {
  Box ob = in.box();
  ob.axis(axis) = out_iv;
  GridFunction out(out_level, ob);
  const Interval in_iv = in.box().axis(axis);
  const AxisLayout lay = layout_of(in.box(), axis);
  const std::size_t ext_in = in_iv.extent();
  const std::size_t ext_out = out_iv.extent();
  const double* src_base = in.values().data();
  double* dst_base = out.values().data();
  const int flo = filter.lo();
  const int fhi = filter.hi();

  parallel_for(lay.outer * ext_out, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const std::size_t o = idx / ext_out;
      const std::int64_t k = out_iv.lo + static_cast<std::int64_t>(idx % ext_out);
      double* dst = dst_base + idx * lay.inner;
      for (int t = flo; t <= fhi; ++t) {
        const double w = filter.value(t);
        const std::int64_t nu = 2 * k + t;
        if (w == 0.0 || !in_iv.contains(nu)) continue;
        const double* src =
            src_base + (o * ext_in + static_cast<std::size_t>(nu - in_iv.lo)) * lay.inner;
        for (std::size_t i = 0; i < lay.inner; ++i) dst[i] += w * src[i];
      }
    }
  }, std::max<std::size_t>(1, 4096 / std::max<std::size_t>(lay.inner, 1)));
  return out;
}

// out_nu = sum_mu c0_mu h_(nu - 2 mu) + sum_mu c1_mu g_(nu - 2 mu) along one axis.
GridFunction synthesis_axis(const GridFunction* c0, const GridFunction* c1, int axis,
                            const FilterBank& bank, const Interval& out_iv, int out_level) {
  const GridFunction* ref = c0 ? c0 : c1;
  Box ob = ref->box();
  ob.axis(axis) = out_iv;
  GridFunction out(out_level, ob);
  const AxisLayout lay = layout_of(ob, axis);
  const std::size_t ext_out = out_iv.extent();
  double* dst_base = out.values().data();

  struct Term {
    const GridFunction* grid;
    const IndexedFilter* filter;
  };
  std::vector<Term> terms;
  if (c0) terms.push_back({c0, &bank.h});
  if (c1) terms.push_back({c1, &bank.g});

  parallel_for(lay.outer * ext_out, [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      const std::size_t o = idx / ext_out;
      const std::int64_t nu = out_iv.lo + static_cast<std::int64_t>(idx % ext_out);
      double* dst = dst_base + idx * lay.inner;
      for (const Term& term : terms) {
        const Interval iv = term.grid->box().axis(axis);
        const std::size_t ext = iv.extent();
        const double* src_base = term.grid->values().data();
        for (int t = term.filter->lo(); t <= term.filter->hi(); ++t) {
          if (((nu - t) & 1) != 0) continue;
          const std::int64_t mu = (nu - t) / 2;
          const double w = term.filter->value(t);
          if (w == 0.0 || !iv.contains(mu)) continue;
          const double* src =
              src_base + (o * ext + static_cast<std::size_t>(mu - iv.lo)) * lay.inner;
          for (std::size_t i = 0; i < lay.inner; ++i) dst[i] += w * src[i];
        }
      }
    }
  }, std::max<std::size_t>(1, 4096 / std::max<std::size_t>(lay.inner, 1)));
  return out;
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::Dimension, "grid dimension " + std::to_string(dim) +
                                          " outside the supported range 1.." +
                                          std::to_string(kMaxDim));
  }
}

GridFunction synthesize_refs(const GridFunction& coarse, const ChannelRefs& details,
                             const FilterBank& bank, const std::optional<Box>& target) {
  const int n = coarse.dim();
  check_dim(n);
  const unsigned full = (1U << n) - 1;
  for (const auto& [mask, grid] : details) {
    if (mask == 0 || mask > full) {
      throw Error(ErrorKind::Shape, "orientation mask " + std::to_string(mask) +
                                        " is not a detail orientation in dimension " +
                                        std::to_string(n));
    }
    if (grid->dim() != n) {
      throw Error(ErrorKind::Dimension, "detail " + Orientation(n, mask).to_string() + " has " +
                                            std::to_string(grid->dim()) + " axes, coarse has " +
                                            std::to_string(n));
    }
    if (grid->level() != coarse.level()) {
      throw Error(ErrorKind::Shape, "detail " + Orientation(n, mask).to_string() +
                                        " is at level " + std::to_string(grid->level()) +
                                        ", coarse at level " + std::to_string(coarse.level()));
    }
  }
  if (target && target->dim() != n) {
    throw Error(ErrorKind::Dimension, "target box has " + std::to_string(target->dim()) +
                                          " axes, coarse has " + std::to_string(n));
  }

  std::vector<Interval> out_iv(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const unsigned bit = axis_bit(n, l);
    const Interval c0 = coarse.box().axis(l);
    std::optional<Interval> c1;
    for (const auto& [mask, grid] : details) {
      const Interval iv = grid->box().axis(l);
      if ((mask & bit) == 0) {
        if (iv != c0) {
          throw Error(ErrorKind::Shape, "axis " + std::to_string(l) + ": detail " +
                                            Orientation(n, mask).to_string() + " spans " +
                                            interval_string(iv) + " but the coarse grid spans " +
                                            interval_string(c0));
        }
      } else if (!c1) {
        c1 = iv;
      } else if (iv != *c1) {
        throw Error(ErrorKind::Shape, "axis " + std::to_string(l) + ": detail " +
                                          Orientation(n, mask).to_string() + " spans " +
                                          interval_string(iv) + " but other details span " +
                                          interval_string(*c1));
      }
    }
    if (target) {
      out_iv[static_cast<std::size_t>(l)] = target->axis(l);
    } else {
      Interval reach{2 * c0.lo + bank.h.lo(), 2 * c0.hi + bank.h.hi()};
      if (c1) {
        reach.lo = std::min(reach.lo, 2 * c1->lo + bank.g.lo());
        reach.hi = std::max(reach.hi, 2 * c1->hi + bank.g.hi());
      }
      out_iv[static_cast<std::size_t>(l)] = reach;
    }
  }

  const int out_level = coarse.level() + 1;
  std::deque<GridFunction> storage;
  ChannelRefs cur = details;
  cur[0] = &coarse;
  for (int l = n - 1; l >= 0; --l) {
    const unsigned bit = axis_bit(n, l);
    ChannelRefs next;
    for (const auto& [mask, grid] : cur) {
      const unsigned base = mask & ~bit;
      if (next.count(base)) continue;
      const auto lo_it = cur.find(base);
      const auto hi_it = cur.find(base | bit);
      const GridFunction* c0 = lo_it == cur.end() ? nullptr : lo_it->second;
      const GridFunction* c1 = hi_it == cur.end() ? nullptr : hi_it->second;
      storage.push_back(
          synthesis_axis(c0, c1, l, bank, out_iv[static_cast<std::size_t>(l)], out_level));
      next[base] = &storage.back();
    }
    cur = std::move(next);
  }
  return std::move(storage.back());
}

}  // namespace

GridFunction sample_grid(const SampledFunction& f, int level, const Box& box) {
  if (level < -20 || level > 20) {
    throw Error(ErrorKind::Parameter, "level " + std::to_string(level) + " outside [-20, 20]");
  }
  check_dim(box.dim());
  if (box.empty()) throw Error(ErrorKind::Shape, "sample box " + box.to_string() + " is empty");
  GridFunction g(level, box);
  std::vector<double> x(static_cast<std::size_t>(box.dim()));
  g.for_each([&](const LatticePoint& p, double& v) {
    for (std::size_t l = 0; l < p.size(); ++l) x[l] = std::ldexp(static_cast<double>(p[l]), -level);
    v = f(x);
    if (!std::isfinite(v)) {
      std::string where;
      for (std::size_t l = 0; l < p.size(); ++l) where += (l ? "," : "") + std::to_string(p[l]);
      throw Error(ErrorKind::NonFinite, "function is not finite at lattice point (" + where +
                                            ") of level " + std::to_string(level));
    }
  });
  return g;
}

GridFunction sample_grid(const GridFunction& finer, int level, const Box& box) {
  if (level > finer.level()) {
    throw Error(ErrorKind::Parameter, "cannot subsample level " + std::to_string(finer.level()) +
                                          " to the finer level " + std::to_string(level));
  }
  if (box.dim() != finer.dim()) {
    throw Error(ErrorKind::Dimension, "box has " + std::to_string(box.dim()) +
                                          " axes, grid has " + std::to_string(finer.dim()));
  }
  const int shift = finer.level() - level;
  GridFunction g(level, box);
  LatticePoint q(static_cast<std::size_t>(box.dim()));
  g.for_each([&](const LatticePoint& p, double& v) {
    for (std::size_t l = 0; l < p.size(); ++l) q[l] = p[l] * (std::int64_t{1} << shift);
    v = finer.at(q);
  });
  return g;
}

LevelSplit analyze_level(const GridFunction& fine, const FilterBank& bank) {
  const int n = fine.dim();
  check_dim(n);
  const int level = fine.level() - 1;
  std::vector<Interval> coarse_iv(static_cast<std::size_t>(n));
  std::vector<Interval> detail_iv(static_cast<std::size_t>(n));
  const std::int64_t a = bank.gdual.lo();
  const std::int64_t b = bank.gdual.hi();
  for (int l = 0; l < n; ++l) {
    const Interval iv = fine.box().axis(l);
    coarse_iv[static_cast<std::size_t>(l)] = {ceil_half(iv.lo), floor_half(iv.hi)};
    if (iv.empty() || coarse_iv[static_cast<std::size_t>(l)].empty()) {
      throw Error(ErrorKind::LevelTooDeep,
                  "axis " + std::to_string(l) + ": box " + interval_string(iv) + " at level " +
                      std::to_string(fine.level()) + " has no site for level " +
                      std::to_string(level));
    }
    detail_iv[static_cast<std::size_t>(l)] = {ceil_half(iv.lo - b), floor_half(iv.hi - a)};
  }

  std::map<unsigned, GridFunction> cur;
  cur.emplace(0U, GridFunction(fine.level(), fine.box(), fine.values()));
  for (int l = 0; l < n; ++l) {
    const unsigned bit = axis_bit(n, l);
    std::map<unsigned, GridFunction> next;
    for (const auto& [mask, grid] : cur) {
      next.emplace(mask, analysis_axis(grid, l, bank.hdual, coarse_iv[static_cast<std::size_t>(l)], level));
      next.emplace(mask | bit,
                   analysis_axis(grid, l, bank.gdual, detail_iv[static_cast<std::size_t>(l)], level));
    }
    cur = std::move(next);
  }

  LevelSplit split;
  split.coarse = std::move(cur.at(0));
  cur.erase(0);
  split.details = std::move(cur);
  return split;
}

GridFunction synthesize_level(const GridFunction& coarse, const DetailMap& details,
                              const FilterBank& bank, const std::optional<Box>& target) {
  ChannelRefs refs;
  for (const auto& [mask, grid] : details) refs[mask] = &grid;
  return synthesize_refs(coarse, refs, bank, target);
}

const GridFunction* WaveletPyramid::detail(int level, unsigned mask) const {
  const auto it = details.find({level, mask});
  return it == details.end() ? nullptr : &it->second;
}

std::size_t WaveletPyramid::detail_count() const {
  std::size_t n = 0;
  for (const auto& [key, grid] : details) n += grid.size();
  return n;
}

WaveletPyramid decompose(const GridFunction& fine, int j0, FilterBankPtr bank) {
  if (!bank) throw Error(ErrorKind::Parameter, "decompose needs a filter bank");
  check_dim(fine.dim());
  if (j0 >= fine.level()) {
    throw Error(ErrorKind::Parameter, "coarsest level " + std::to_string(j0) +
                                          " must lie below the grid level " +
                                          std::to_string(fine.level()));
  }
  WaveletPyramid pyr;
  pyr.dim = fine.dim();
  pyr.bank = bank;
  pyr.j0 = j0;
  pyr.J = fine.level();
  pyr.level_boxes.resize(static_cast<std::size_t>(pyr.J - j0 + 1));
  pyr.level_boxes.back() = fine.box();

  GridFunction cur(fine.level(), fine.box(), fine.values());
  for (int j = pyr.J - 1; j >= j0; --j) {
    LevelSplit split = analyze_level(cur, *bank);
    for (auto& [mask, grid] : split.details) pyr.details.emplace(std::make_pair(j, mask), std::move(grid));
    pyr.level_boxes[static_cast<std::size_t>(j - j0)] = split.coarse.box();
    cur = std::move(split.coarse);
  }
  pyr.coarse = std::move(cur);
  return pyr;
}

GridFunction reconstruct(const WaveletPyramid& pyr) {
  if (!pyr.bank) throw Error(ErrorKind::Parameter, "pyramid has no filter bank");
  GridFunction cur(pyr.coarse.level(), pyr.coarse.box(), pyr.coarse.values());
  for (int j = pyr.j0; j < pyr.J; ++j) {
    ChannelRefs refs;
    for (auto it = pyr.details.lower_bound({j, 0U}); it != pyr.details.end() && it->first.first == j; ++it) {
      refs[it->first.second] = &it->second;
    }
    cur = synthesize_refs(cur, refs, *pyr.bank, pyr.box_at(j + 1));
  }
  return cur;
}

WaveletPyramid truncate(const WaveletPyramid& pyr, int level) {
  if (level < pyr.j0 || level > pyr.J) {
    throw Error(ErrorKind::Parameter, "level " + std::to_string(level) + " outside the pyramid range [" +
                                          std::to_string(pyr.j0) + ", " + std::to_string(pyr.J) + "]");
  }
  WaveletPyramid out;
  out.dim = pyr.dim;
  out.bank = pyr.bank;
  out.j0 = pyr.j0;
  out.J = level;
  out.level_boxes.assign(pyr.level_boxes.begin(), pyr.level_boxes.begin() + (level - pyr.j0 + 1));
  out.coarse = pyr.coarse;
  for (const auto& [key, grid] : pyr.details) {
    if (key.first < level) out.details.emplace(key, grid);
  }
  return out;
}

double project_eval(const GridFunction& grid, const FilterBankPtr& bank, int level,
                    std::span<const Dyadic> x) {
  const int n = grid.dim();
  if (static_cast<int>(x.size()) != n) {
    throw Error(ErrorKind::Dimension, "point has " + std::to_string(x.size()) +
                                          " coordinates, grid has " + std::to_string(n) + " axes");
  }
  if (level > grid.level()) {
    throw Error(ErrorKind::Parameter, "projection level " + std::to_string(level) +
                                          " is finer than the grid level " +
                                          std::to_string(grid.level()));
  }
  const int shift = grid.level() - level;
  if (shift > 40) throw Error(ErrorKind::Parameter, "projection level too coarse for the grid");

  std::vector<Dyadic> y(static_cast<std::size_t>(n));
  int resolution = 1;
  for (int l = 0; l < n; ++l) {
    y[static_cast<std::size_t>(l)] = x[static_cast<std::size_t>(l)].times_pow2(level);
    resolution = std::max(resolution, y[static_cast<std::size_t>(l)].exponent());
  }
  if (resolution > kMaxResolution) {
    throw Error(ErrorKind::Resolution, "point needs resolution " + std::to_string(resolution) +
                                           ", maximum is " + std::to_string(kMaxResolution));
  }
  const ScalingEvaluator eval(bank, resolution);

  // Nonzero 1-D factors per axis: (lattice index, phi value).
  std::vector<std::vector<std::pair<std::int64_t, double>>> factors(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const Dyadic& yl = y[static_cast<std::size_t>(l)];
    const std::int64_t base = yl.floor();
    for (std::int64_t k = base - bank->h.hi(); k <= base - bank->h.lo() + 1; ++k) {
      const double v = eval.phi(yl - Dyadic(k));
      if (v != 0.0) factors[static_cast<std::size_t>(l)].emplace_back(k, v);
    }
    if (factors[static_cast<std::size_t>(l)].empty()) return 0.0;
  }

  double sum = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  LatticePoint p(static_cast<std::size_t>(n));
  while (true) {
    double w = 1.0;
    for (std::size_t l = 0; l < idx.size(); ++l) {
      const auto& [k, v] = factors[l][idx[l]];
      p[l] = k * (std::int64_t{1} << shift);
      w *= v;
    }
    sum += w * grid.at(p);
    std::size_t l = idx.size();
    bool done = true;
    while (l > 0) {
      --l;
      if (++idx[l] < factors[l].size()) {
        done = false;
        break;
      }
      idx[l] = 0;
    }
    if (done) break;
  }
  return sum;
}

double project_eval(const WaveletPyramid& pyr, int level, std::span<const Dyadic> x) {
  const GridFunction g = reconstruct(truncate(pyr, level));
  return project_eval(g, pyr.bank, level, x);
}

std::int64_t level_reach(const FilterBank& bank) {
  return 2 * std::max<std::int64_t>(std::abs(bank.h.lo()), std::abs(bank.h.hi()));
}

Box interior_box(const Box& box, int levels, const FilterBank& bank) {
  Box out = box;
  const std::int64_t reach = level_reach(bank);
  for (int m = 0; m < levels; ++m) {
    const std::int64_t r = reach * (std::int64_t{1} << m);
    for (int l = 0; l < out.dim(); ++l) {
      out.axis(l).lo += r;
      out.axis(l).hi -= r;
    }
  }
  return out;
}

Box clean_detail_box(const Box& fine_box, const Orientation& s, const FilterBank& bank) {
  if (s.dim() != fine_box.dim()) {
    throw Error(ErrorKind::Dimension, "orientation and box dimensions differ");
  }
  std::vector<Interval> axes(static_cast<std::size_t>(fine_box.dim()));
  for (int l = 0; l < fine_box.dim(); ++l) {
    const Interval iv = fine_box.axis(l);
    if (s.bit(l) == 0) {
      axes[static_cast<std::size_t>(l)] = {ceil_half(iv.lo), floor_half(iv.hi)};
    } else {
      axes[static_cast<std::size_t>(l)] = {ceil_half(iv.lo - bank.gdual.lo()),
                                           floor_half(iv.hi - bank.gdual.hi())};
    }
  }
  return Box(std::move(axes));
}

ThresholdResult threshold(const WaveletPyramid& pyr, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorKind::Parameter, "threshold must be nonnegative");
  ThresholdResult r;
  r.pyramid = pyr;
  for (auto& [key, grid] : r.pyramid.details) {
    for (double& v : grid.values()) {
      if (std::abs(v) <= tau) {
        if (v != 0.0) r.dropped_l1 += std::abs(v);
        ++r.dropped;
        v = 0.0;
      } else {
        ++r.kept;
      }
    }
  }
  return r;
}

}  // namespace imra
