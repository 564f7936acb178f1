#include "imra/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "imra/error.hpp"
#include "imra/scaling.hpp"
#include "imra/tensor.hpp"

namespace imra {

namespace {

bool valid_exponent(double p) { return p >= 1.0 && (std::isfinite(p) || p == kInf); }

// Running l^p accumulator.
class LpAccumulator {
 public:
  explicit LpAccumulator(double p) : p_(p) {}
  void add(double v) {
    const double a = std::abs(v);
    if (p_ == kInf) {
      acc_ = std::max(acc_, a);
    } else if (a != 0.0) {
      acc_ += p_ == 1.0 ? a : (p_ == 2.0 ? a * a : std::pow(a, p_));
    }
  }
  double value() const {
    if (p_ == kInf || p_ == 1.0) return acc_;
    if (p_ == 2.0) return std::sqrt(acc_);
    return std::pow(acc_, 1.0 / p_);
  }

 private:
  double p_;
  double acc_ = 0.0;
};

double dim_over_p(int n, double p) { return p == kInf ? 0.0 : n / p; }

void finish(NormReport& r, const BesovParams& params) {
  std::vector<double> terms;
  for (const auto& [j, t] : r.level_terms) terms.push_back(t);
  r.aggregate = lp_norm(terms, params.q);
  r.total = r.coarse + r.aggregate;
  if (terms.size() >= 2) {
    const double t0 = terms[terms.size() - 2];
    const double t1 = terms.back();
    if (t0 > 0.0 && t1 > 0.0 && t1 < t0) {
      const double rho = t1 / t0;
      r.tail_estimate = params.q == kInf ? t1 * rho
                                         : t1 * rho / std::pow(1.0 - std::pow(rho, params.q), 1.0 / params.q);
    }
  }
}

void check_pyramid(const WaveletPyramid& pyr, const BesovParams& params, NormReport& r) {
  validate(params);
  if (params.j0 != pyr.j0) {
    throw Error(ErrorKind::Parameter, "norm parameter j0 = " + std::to_string(params.j0) +
                                          " differs from the pyramid's coarsest level " +
                                          std::to_string(pyr.j0));
  }
  if (params.sigma <= dim_over_p(pyr.dim, params.p)) {
    r.flags.push_back("sigma <= n/p: outside the equivalence regime");
  }
}

double quadrature(const GridFunction& g, double p) {
  LpAccumulator acc(p);
  for (const double v : g.values()) acc.add(v);
  if (p == kInf) return acc.value();
  return acc.value() * std::pow(2.0, -g.dim() * g.level() / p);
}

GridFunction refine(GridFunction g, const FilterBank& bank, int levels) {
  for (int m = 0; m < levels; ++m) g = synthesize_level(g, {}, bank);
  return g;
}

// Every lattice point whose translate of a function supported in
// [lo, hi]^n can be nonzero at y.
std::vector<std::vector<std::int64_t>> candidate_ranges(std::span<const Dyadic> y, int lo, int hi) {
  std::vector<std::vector<std::int64_t>> out(y.size());
  for (std::size_t l = 0; l < y.size(); ++l) {
    const std::int64_t base = y[l].floor();
    for (std::int64_t k = base - hi - 1; k <= base - lo + 1; ++k) out[l].push_back(k);
  }
  return out;
}

template <typename Fn>
void for_each_combination(const std::vector<std::vector<std::int64_t>>& ranges, Fn&& fn) {
  const std::size_t n = ranges.size();
  std::vector<std::size_t> idx(n, 0);
  LatticePoint p(n);
  while (true) {
    for (std::size_t l = 0; l < n; ++l) p[l] = ranges[l][idx[l]];
    fn(p);
    std::size_t l = n;
    while (true) {
      if (l == 0) return;
      --l;
      if (++idx[l] < ranges[l].size()) break;
      idx[l] = 0;
    }
  }
}

// Embeds g into a larger zero grid.
GridFunction pad(const GridFunction& g, const Box& box) {
  if (box == g.box()) return g;
  GridFunction out(g.level(), box);
  g.for_each([&](const LatticePoint& p, double v) { out.ref(p) = v; });
  return out;
}

// Reconstruction without cropping, so that the result carries the whole
// expansion rather than its restriction to the recorded boxes.
GridFunction full_reconstruct(const WaveletPyramid& pyr) {
  GridFunction cur = pyr.coarse;
  for (int j = pyr.j0; j < pyr.J; ++j) {
    DetailMap d;
    for (auto it = pyr.details.lower_bound({j, 0U}); it != pyr.details.end() && it->first.first == j; ++it) {
      const Orientation s(pyr.dim, it->first.second);
      Box box = it->second.box();
      for (int l = 0; l < pyr.dim; ++l) {
        if (s.bit(l) == 0) box.axis(l) = cur.box().axis(l);
      }
      d.emplace(it->first.second, pad(it->second, box));
    }
    cur = synthesize_level(cur, d, *pyr.bank);
  }
  return cur;
}

}  // namespace

void validate(const BesovParams& params) {
  if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
    throw Error(ErrorKind::Parameter, "sigma must be a positive finite number");
  }
  if (!valid_exponent(params.p)) throw Error(ErrorKind::Parameter, "p must lie in [1, inf]");
  if (!valid_exponent(params.q)) throw Error(ErrorKind::Parameter, "q must lie in [1, inf]");
}

double lp_norm(const std::vector<double>& values, double p) {
  if (!valid_exponent(p)) throw Error(ErrorKind::Parameter, "exponent must lie in [1, inf]");
  LpAccumulator acc(p);
  for (const double v : values) acc.add(v);
  return acc.value();
}

NormReport coeff_norm(const WaveletPyramid& pyr, const BesovParams& params) {
  NormReport r;
  check_pyramid(pyr, params, r);
  LpAccumulator coarse(params.p);
  for (const double v : pyr.coarse.values()) coarse.add(v);
  r.coarse = coarse.value();

  const double shift = params.sigma - dim_over_p(pyr.dim, params.p);
  for (int j = pyr.j0; j < pyr.J; ++j) {
    LpAccumulator acc(params.p);
    for (auto it = pyr.details.lower_bound({j, 0U}); it != pyr.details.end() && it->first.first == j; ++it) {
      for (const double v : it->second.values()) acc.add(v);
    }
    r.level_terms[j] = std::pow(2.0, shift * j) * acc.value();
  }
  finish(r, params);
  return r;
}

NormReport wavelet_norm(const WaveletPyramid& pyr, const BesovParams& params, int quadrature_levels) {
  NormReport r;
  check_pyramid(pyr, params, r);
  if (quadrature_levels < 0 || quadrature_levels > 8) {
    throw Error(ErrorKind::Parameter, "quadrature levels must lie in 0..8");
  }
  const FilterBank& bank = *pyr.bank;
  r.coarse = quadrature(refine(synthesize_level(pyr.coarse, {}, bank), bank, quadrature_levels), params.p);

  for (int j = pyr.j0; j < pyr.J; ++j) {
    DetailMap d;
    for (auto it = pyr.details.lower_bound({j, 0U}); it != pyr.details.end() && it->first.first == j; ++it) {
      d.emplace(it->first.second, it->second);
    }
    double norm = 0.0;
    if (!d.empty()) {
      const GridFunction zero(j, pyr.box_at(j));
      norm = quadrature(refine(synthesize_level(zero, d, bank), bank, quadrature_levels), params.p);
    }
    r.level_terms[j] = std::pow(2.0, params.sigma * j) * norm;
  }
  finish(r, params);
  return r;
}

EquivalenceReport equivalence_probe(const SampledFunction& f, int dim, double lo, double hi,
                                    const BesovParams& params, const std::vector<int>& resolutions,
                                    FilterBankPtr bank, int quadrature_levels) {
  validate(params);
  EquivalenceReport rep;
  double rmin = kInf;
  double rmax = 0.0;
  for (const int level : resolutions) {
    const Interval iv{static_cast<std::int64_t>(std::ceil(std::ldexp(lo, level))),
                      static_cast<std::int64_t>(std::floor(std::ldexp(hi, level)))};
    const GridFunction g = sample_grid(f, level, Box(std::vector<Interval>(static_cast<std::size_t>(dim), iv)));
    const WaveletPyramid pyr = decompose(g, params.j0, bank);
    EquivalenceRow row;
    row.level = level;
    row.coeff = coeff_norm(pyr, params).total;
    row.wavelet = wavelet_norm(pyr, params, quadrature_levels).total;
    if (row.coeff > 0.0) {
      row.ratio = row.wavelet / row.coeff;
      rmin = std::min(rmin, *row.ratio);
      rmax = std::max(rmax, *row.ratio);
    }
    rep.rows.push_back(row);
  }
  if (rmax > 0.0) rep.spread = rmax / rmin;
  return rep;
}

HolderEstimate holder_estimate(const GridFunction& samples, int j0, FilterBankPtr bank,
                               double zero_tolerance) {
  if (samples.level() - j0 < 3) {
    throw Error(ErrorKind::Parameter, "Hoelder estimate needs at least 3 detail levels, got " +
                                          std::to_string(samples.level() - j0));
  }
  const WaveletPyramid pyr = decompose(samples, j0, bank);
  const double scale = std::max(1.0, samples.max_abs());
  HolderEstimate est;
  for (int j = j0; j < pyr.J; ++j) {
    double m = 0.0;
    bool any = false;
    for (const Orientation& s : detail_orientations(pyr.dim)) {
      const GridFunction* d = pyr.detail(j, s.mask());
      if (!d) continue;
      const Box clean = clean_detail_box(pyr.box_at(j + 1), s, *bank).intersect(d->box());
      if (clean.empty()) continue;
      any = true;
      for_each_point(clean, [&](const LatticePoint& p) { m = std::max(m, std::abs(d->at(p))); });
    }
    if (any && m > zero_tolerance * scale) est.points.emplace_back(j, -std::log2(m));
  }
  if (est.points.size() < 2) {
    est.infinite = true;
    est.sigma = kInf;
    return est;
  }
  const double n = static_cast<double>(est.points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [j, y] : est.points) {
    sx += j;
    sy += y;
    sxx += static_cast<double>(j) * j;
    sxy += j * y;
  }
  est.sigma = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  est.intercept = (sy - est.sigma * sx) / n;
  return est;
}

double modulus_of_continuity(const GridFunction& g, double t) {
  const int n = g.dim();
  if (n == 0 || g.size() == 0) return 0.0;
  const double radius = std::ldexp(t, g.level());
  const auto r = static_cast<std::int64_t>(std::floor(radius + 1e-9));
  if (r < 1) return 0.0;
  const double r2 = radius * radius * (1.0 + 1e-12);
  const std::vector<std::size_t> strides = strides_of(g.box());
  const double* v = g.values().data();
  double best = 0.0;

  Box shifts = Box::cube(n, -r, r);
  for_each_point(shifts, [&](const LatticePoint& h) {
    // one of h and -h suffices
    std::size_t first = 0;
    while (first < h.size() && h[first] == 0) ++first;
    if (first == h.size() || h[first] < 0) return;
    double len2 = 0.0;
    for (const auto c : h) len2 += static_cast<double>(c) * static_cast<double>(c);
    if (len2 > r2) return;

    std::vector<Interval> overlap(static_cast<std::size_t>(n));
    std::ptrdiff_t delta = 0;
    for (int l = 0; l < n; ++l) {
      const Interval iv = g.box().axis(l);
      const auto hl = h[static_cast<std::size_t>(l)];
      overlap[static_cast<std::size_t>(l)] = {std::max(iv.lo, iv.lo - hl), std::min(iv.hi, iv.hi - hl)};
      delta += static_cast<std::ptrdiff_t>(hl) * static_cast<std::ptrdiff_t>(strides[static_cast<std::size_t>(l)]);
    }
    Box ob(overlap);
    if (ob.empty()) return;
    // rows along the last axis are contiguous
    Box rows = ob;
    rows.axis(n - 1).hi = rows.axis(n - 1).lo;
    const std::size_t len = ob.axis(n - 1).extent();
    for_each_point(rows, [&](const LatticePoint& p) {
      const std::size_t base = g.offset(p);
      const double* a = v + base;
      const double* b = v + static_cast<std::ptrdiff_t>(base) + delta;
      double m = best;
      for (std::size_t i = 0; i < len; ++i) m = std::max(m, std::abs(b[i] - a[i]));
      best = m;
    });
  });
  return best;
}

ProjectionErrorReport projection_error_check(const SampledFunction& f, int dim, double lo,
                                             double hi, FilterBankPtr bank, int j_lo, int j_hi,
                                             int reference) {
  if (j_lo > j_hi || j_hi > reference) {
    throw Error(ErrorKind::Parameter, "need j_lo <= j_hi <= reference level");
  }
  ProjectionErrorReport rep;
  const int n1 = cover_number_report(*bank, 1).per_axis;
  const double sup = table_sup(refine_scaling(*bank, std::min(reference, 12)));
  rep.c1 = std::pow(n1, dim) * std::pow(sup, dim);
  rep.c2 = bank->support_radius * std::sqrt(static_cast<double>(dim));

  const double ext = (rep.c2 + 1.0) * std::ldexp(1.0, -j_lo);
  auto cube = [dim](std::int64_t a, std::int64_t b) { return Box::cube(dim, a, b); };
  const GridFunction extended = sample_grid(
      f, reference,
      cube(static_cast<std::int64_t>(std::floor(std::ldexp(lo - ext, reference))),
           static_cast<std::int64_t>(std::ceil(std::ldexp(hi + ext, reference)))));
  const Box ref_box = cube(static_cast<std::int64_t>(std::ceil(std::ldexp(lo, reference))),
                           static_cast<std::int64_t>(std::floor(std::ldexp(hi, reference))));

  rep.all_pass = true;
  rep.monotone = true;
  double previous = kInf;
  for (int j = j_lo; j <= j_hi; ++j) {
    ProjectionErrorRow row;
    row.level = j;
    GridFunction coarse = sample_grid(
        f, j,
        cube(static_cast<std::int64_t>(std::floor(std::ldexp(lo - ext, j))),
             static_cast<std::int64_t>(std::ceil(std::ldexp(hi + ext, j)))));
    const GridFunction proj = refine(std::move(coarse), *bank, reference - j);
    row.measured = max_abs_difference(extended, proj, ref_box);
    row.omega = modulus_of_continuity(extended, std::ldexp(rep.c2, -j));
    row.bound = rep.c1 * row.omega;
    row.pass = row.measured <= row.bound * (1.0 + 1e-9);
    rep.all_pass = rep.all_pass && row.pass;
    if (row.measured > previous * (1.0 + 1e-9) + 1e-15) rep.monotone = false;
    previous = row.measured;
    rep.rows.push_back(row);
  }
  return rep;
}

UnconditionalityReport unconditionality_probe(const WaveletPyramid& pyr, int trials,
                                              const std::vector<std::vector<Dyadic>>& points,
                                              std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::Parameter, "trials must be at least 1");
  const FilterBank& bank = *pyr.bank;
  const int n = pyr.dim;
  const GridFunction full = full_reconstruct(pyr);
  std::mt19937_64 rng(seed);

  UnconditionalityReport rep;
  rep.trials = trials;
  rep.abs_dominates = true;
  for (const auto& x : points) {
    if (static_cast<int>(x.size()) != n) {
      throw Error(ErrorKind::Dimension, "probe point has " + std::to_string(x.size()) +
                                            " coordinates, pyramid has " + std::to_string(n));
    }
    int resolution = 1;
    for (const Dyadic& c : x) resolution = std::max(resolution, c.times_pow2(pyr.j0).exponent() + 1);
    if (resolution > kMaxResolution) {
      throw Error(ErrorKind::Resolution, "probe point needs resolution " + std::to_string(resolution));
    }
    const ScalingEvaluator eval(pyr.bank, resolution);

    ProbePointReport pr;
    pr.x = x;
    std::vector<double> terms;
    double running = 0.0;
    auto collect = [&](const GridFunction& coeffs, const Orientation& s, int level) {
      std::vector<Dyadic> y(x.size());
      for (std::size_t l = 0; l < x.size(); ++l) y[l] = x[l].times_pow2(level);
      for_each_combination(candidate_ranges(y, bank.h.lo(), bank.h.hi()), [&](const LatticePoint& mu) {
        const double c = coeffs.at(mu);
        if (c == 0.0) return;
        const double w = tensor_point_eval(eval, s, level, mu, x);
        if (w == 0.0) return;
        terms.push_back(c * w);
        pr.abs_sum += std::abs(c) * std::abs(w);
        running += c * w;
      });
    };
    collect(pyr.coarse, Orientation(n, 0), pyr.j0);
    pr.level_partials.push_back(running);
    for (int j = pyr.j0; j < pyr.J; ++j) {
      for (const Orientation& s : detail_orientations(n)) {
        if (const GridFunction* d = pyr.detail(j, s.mask())) collect(*d, s, j);
      }
      pr.level_partials.push_back(running);
    }
    pr.value = project_eval(full, pyr.bank, pyr.J, x);

    std::vector<std::size_t> order(terms.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> signs(terms.size());
    std::bernoulli_distribution coin(0.5);
    for (int t = 0; t < trials; ++t) {
      for (double& s : signs) s = coin(rng) ? 1.0 : -1.0;
      std::vector<double> signed_terms(terms.size());
      std::shuffle(order.begin(), order.end(), rng);
      for (const std::size_t i : order) signed_terms[i] = signs[i] * terms[i];
      std::shuffle(order.begin(), order.end(), rng);
      double sum = 0.0;
      for (const std::size_t i : order) sum += signs[i] * signed_terms[i];
      pr.max_permutation_deviation = std::max(pr.max_permutation_deviation, std::abs(sum - pr.value));
    }
    rep.max_deviation = std::max(rep.max_deviation, pr.max_permutation_deviation);
    if (pr.abs_sum < std::abs(pr.value) - 1e-12 * std::max(1.0, pr.abs_sum)) rep.abs_dominates = false;
    rep.points.push_back(std::move(pr));
  }
  return rep;
}

GeometricTailReport geometric_tail_probe(FilterBankPtr bank, double sigma, int levels, const Dyadic& x) {
  if (levels < 1) throw Error(ErrorKind::Parameter, "levels must be at least 1");
  const int resolution = std::max(1, x.exponent() + 1);
  const ScalingEvaluator eval(bank, resolution);
  GeometricTailReport rep;
  rep.psi_sup = table_sup(refine_wavelet(*bank, 12));
  double sum = 0.0;
  for (int j = 0; j < levels; ++j) {
    const double term = std::pow(2.0, -sigma * j) * eval.psi(x.times_pow2(j));
    sum += term;
    rep.partial_sums.push_back(sum);
    rep.rate_constant = std::max(rep.rate_constant, std::abs(term) * std::pow(2.0, sigma * j));
  }
  return rep;
}

}  // namespace imra
