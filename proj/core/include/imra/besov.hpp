#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imra/dyadic.hpp"
#include "imra/filters.hpp"
#include "imra/grid.hpp"
#include "imra/transform.hpp"

namespace imra {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BesovParams {
  double sigma = 1.0;
  double p = 2.0;  // in [1, inf]
  double q = 2.0;  // in [1, inf]
  int j0 = 0;
};

/// Throws Error(Parameter) unless sigma > 0 and p, q lie in [1, inf].
void validate(const BesovParams& params);

/// l^p norm of a sequence; p = inf gives the max.
double lp_norm(const std::vector<double>& values, double p);

struct NormReport {
  double coarse = 0.0;
  /// Weighted per-level terms keyed by level j.
  std::map<int, double> level_terms;
  /// l^q aggregate of the level terms.
  double aggregate = 0.0;
  double total = 0.0;
  /// l^q mass of a geometric continuation of the last two terms beyond the
  /// finest level; empty when they do not decay.
  std::optional<double> tail_estimate;
  std::vector<std::string> flags;
};

/// ||(c_(j0,lambda))||_p + ||(2^((sigma - n/p) j) ||d_j||_p)_j||_q with d_j
/// pooling every orientation and position of level j.
NormReport coeff_norm(const WaveletPyramid& pyr, const BesovParams& params);

/// ||P_(j0) f||_p + ||(2^(j sigma) ||Delta_j f||_p)_j||_q with the L^p norms
/// taken as lattice quadratures of the synthesized functions at level
/// j + 1 + quadrature_levels (j0 + 1 + quadrature_levels for the first term).
NormReport wavelet_norm(const WaveletPyramid& pyr, const BesovParams& params,
                        int quadrature_levels = 0);

struct EquivalenceRow {
  int level = 0;
  double coeff = 0.0;
  double wavelet = 0.0;
  std::optional<double> ratio;  // wavelet / coeff, empty when coeff = 0
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  /// max ratio / min ratio over defined rows.
  std::optional<double> spread;
};

/// Samples f on [lo, hi]^dim at each resolution, decomposes down to params.j0
/// and compares the two norms.
EquivalenceReport equivalence_probe(const SampledFunction& f, int dim, double lo, double hi,
                                    const BesovParams& params, const std::vector<int>& resolutions,
                                    FilterBankPtr bank, int quadrature_levels = 0);

struct HolderEstimate {
  double sigma = 0.0;
  double intercept = 0.0;
  bool infinite = false;  // every interior detail vanished
  /// (j, -log2 max_s |d^s_j|_inf) over interior coefficients.
  std::vector<std::pair<int, double>> points;
};

/// Least-squares slope of -log2 max_s ||d^s_j||_inf against j, using detail
/// coefficients whose stencils lie inside the sampled box. Throws
/// Error(Parameter) when fewer than 3 detail levels are available.
HolderEstimate holder_estimate(const GridFunction& samples, int j0, FilterBankPtr bank,
                               double zero_tolerance = 1e-13);

/// max over lattice shifts h != 0 with |h|_2 2^-level <= t of max |g(x+h) - g(x)|
/// over sites where both points are in the box.
double modulus_of_continuity(const GridFunction& g, double t);

struct ProjectionErrorRow {
  int level = 0;
  double measured = 0.0;
  double omega = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ProjectionErrorReport {
  double c1 = 0.0;  // N(phi^[n]) ||phi^[n]||_inf
  double c2 = 0.0;  // Euclidean support radius of phi^[n]
  std::vector<ProjectionErrorRow> rows;
  bool all_pass = false;
  bool monotone = false;
};

/// Measures sup |f - P_j f| on the level-`reference` lattice of [lo, hi]^dim
/// for j in [j_lo, j_hi] and compares with c1 omega(f; 2^-j c2).
ProjectionErrorReport projection_error_check(const SampledFunction& f, int dim, double lo,
                                             double hi, FilterBankPtr bank, int j_lo, int j_hi,
                                             int reference);

struct ProbePointReport {
  std::vector<Dyadic> x;
  double value = 0.0;      // full reconstruction at x
  double abs_sum = 0.0;    // sum of |c| |term(x)|
  double max_permutation_deviation = 0.0;
  /// Partial sums after the coarse part and after each detail level.
  std::vector<double> level_partials;
};

struct UnconditionalityReport {
  std::vector<ProbePointReport> points;
  int trials = 0;
  double max_deviation = 0.0;
  bool abs_dominates = false;
};

/// Evaluates every pyramid term at each point, sums them in `trials` random
/// orders with random signs applied and removed, and compares with the
/// reconstruction. Points must be dyadic within the resolution budget.
UnconditionalityReport unconditionality_probe(const WaveletPyramid& pyr, int trials,
                                              const std::vector<std::vector<Dyadic>>& points,
                                              std::uint64_t seed = 1);

struct GeometricTailReport {
  std::vector<double> partial_sums;
  /// max_j |S_(j+1) - S_j| 2^(j sigma); bounded by ||psi||_inf.
  double rate_constant = 0.0;
  double psi_sup = 0.0;
};

/// 1-D expansion with a single coefficient 2^(-j sigma) per level at mu = 0,
/// evaluated at a fixed dyadic point.
GeometricTailReport geometric_tail_probe(FilterBankPtr bank, double sigma, int levels,
                                         const Dyadic& x);

}  // namespace imra
