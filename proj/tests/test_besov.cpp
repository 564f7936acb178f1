#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "imra/besov.hpp"
#include "imra/error.hpp"
#include "imra/scaling.hpp"

using namespace imra;

namespace {

WaveletPyramid zero_pyramid(int dim, int J, int j0, std::int64_t half, int order = 2) {
  return decompose(GridFunction(J, Box::cube(dim, -half, half)), j0, make_dd_bank(order));
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate({0.0, 2, 2, 0}), Error);
  CHECK_THROWS_AS(validate({1.0, 0.5, 2, 0}), Error);
  CHECK_THROWS_AS(validate({1.0, 2, 0.9, 0}), Error);
  CHECK_NOTHROW(validate({1.0, kInf, kInf, 0}));
  CHECK(lp_norm({3.0, -4.0}, 2.0) == doctest::Approx(5.0));
  CHECK(lp_norm({3.0, -4.0}, kInf) == 4.0);
  CHECK(lp_norm({3.0, -4.0}, 1.0) == 7.0);
}

TEST_CASE("coefficient norm of elementary pyramids") {
  WaveletPyramid pyr = zero_pyramid(1, 3, 0, 16);
  CHECK(coeff_norm(pyr, {1.5, 2, 1, 0}).total == 0.0);

  pyr.details.at({2, 1U}).ref(std::vector<std::int64_t>{1}) = 1.0;
  const NormReport one = coeff_norm(pyr, {1.5, 2, 1, 0});
  CHECK(one.total == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(one.level_terms.at(2) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(one.coarse == 0.0);

  WaveletPyramid coarse_only = zero_pyramid(2, 2, 0, 8);
  coarse_only.coarse.ref(std::vector<std::int64_t>{0, 1}) = 1.0;
  for (const double sigma : {0.3, 1.0, 2.5}) {
    CHECK(coeff_norm(coarse_only, {sigma, 2, 2, 0}).total == 1.0);
  }
}

TEST_CASE("wavelet norm of a single wavelet") {
  const FilterBankPtr b = make_dd_bank(2);
  WaveletPyramid pyr = zero_pyramid(1, 3, 0, 16);
  CHECK(wavelet_norm(pyr, {1.2, kInf, kInf, 0}, 2).total == 0.0);
  pyr.details.at({2, 1U}).ref(std::vector<std::int64_t>{-1}) = 1.0;
  const int quad = 4;
  const NormReport r = wavelet_norm(pyr, {1.2, kInf, kInf, 0}, quad);
  const double expect = std::pow(2.0, 2 * 1.2) * table_sup(refine_wavelet(*b, 1 + quad));
  CHECK(r.total == doctest::Approx(expect).epsilon(1e-12));

  // a grid already in V_1: refine constant coarse samples without details
  GridFunction v(1, Box::cube(1, -8, 8));
  for (double& x : v.values()) x = 2.0;
  for (int step = 0; step < 3; ++step) v = synthesize_level(v, {}, *b);
  const WaveletPyramid pv = decompose(v, 1, b);
  const NormReport rv = wavelet_norm(pv, {1.0, kInf, 2, 1}, 1);
  CHECK(rv.aggregate < 1e-12);
  CHECK(rv.coarse >= 2.0);
}

TEST_CASE("norm homogeneity and triangle inequality") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  auto random = [&] {
    GridFunction g(4, Box::cube(1, -32, 32));
    for (double& v : g.values()) v = u(rng);
    return decompose(g, 1, make_dd_bank(2));
  };
  const BesovParams params{0.7, 1.5, 3, 1};
  const WaveletPyramid a = random();
  const WaveletPyramid b = random();
  WaveletPyramid sum = a;
  WaveletPyramid scaled = a;
  for (std::size_t i = 0; i < sum.coarse.size(); ++i) {
    sum.coarse.values()[i] += b.coarse.values()[i];
    scaled.coarse.values()[i] *= -3.0;
  }
  for (auto& [key, d] : sum.details) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      d.values()[i] += b.details.at(key).values()[i];
      scaled.details.at(key).values()[i] *= -3.0;
    }
  }
  const double na = coeff_norm(a, params).total;
  CHECK(coeff_norm(scaled, params).total == doctest::Approx(3.0 * na).epsilon(1e-12));
  CHECK(coeff_norm(sum, params).total <= na + coeff_norm(b, params).total + 1e-12);
}

TEST_CASE("regime flag") {
  const WaveletPyramid pyr = zero_pyramid(2, 2, 0, 8);
  const NormReport low = coeff_norm(pyr, {0.5, 1, 1, 0});
  CHECK_FALSE(low.flags.empty());
  CHECK(coeff_norm(pyr, {3.0, 1, 1, 0}).flags.empty());
}

TEST_CASE("Hoelder exponent estimates") {
  const FilterBankPtr b = make_dd_bank(2);
  for (const double alpha : {0.5, 1.0}) {
    CAPTURE(alpha);
    const auto f = [alpha](std::span<const double> x) { return std::pow(std::abs(x[0] - 1.0 / 3.0), alpha); };
    const HolderEstimate e = holder_estimate(sample_grid(f, 10, Box::cube(1, -1024, 1024)), 3, b);
    CHECK_FALSE(e.infinite);
    CHECK(e.points.size() >= 5);
    CHECK(e.sigma == doctest::Approx(alpha).epsilon(0.2));
    CHECK(std::abs(e.sigma - alpha) <= 0.1);
  }
  const HolderEstimate lin =
      holder_estimate(sample_grid([](std::span<const double> x) { return x[0]; }, 8, Box::cube(1, -256, 256)), 3, b);
  CHECK(lin.infinite);
  CHECK_THROWS_AS(holder_estimate(GridFunction(3, Box::cube(1, -64, 64)), 1, b), Error);
}

TEST_CASE("modulus of continuity") {
  CHECK(modulus_of_continuity(sample_grid([](std::span<const double>) { return 1.0; }, 3, Box::cube(2, 0, 8)), 0.5) == 0.0);
  const GridFunction lin = sample_grid([](std::span<const double> x) { return x[0]; }, 3, Box::cube(1, 0, 16));
  CHECK(modulus_of_continuity(lin, 0.25) == doctest::Approx(0.25));
}

TEST_CASE("projection error against the computed bound") {
  const FilterBankPtr b = make_dd_bank(1);
  const auto sinw = [](std::span<const double> x) {
    return std::abs(x[0]) < 3 ? std::sin(x[0]) * std::pow(std::cos(M_PI * x[0] / 6), 2) : 0.0;
  };
  const ProjectionErrorReport r = projection_error_check(sinw, 1, -3, 3, b, 0, 5, 9);
  CHECK(r.all_pass);
  CHECK(r.monotone);
  CHECK(r.rows.back().measured < 1e-3);
  CHECK(r.c1 == doctest::Approx(2.0));

  const ProjectionErrorReport c =
      projection_error_check([](std::span<const double>) { return 1.5; }, 1, -2, 2, b, 0, 3, 6);
  for (const auto& row : c.rows) CHECK(row.measured < 1e-14);
}

TEST_CASE("order-independent summation") {
  GridFunction g(3, Box::cube(1, -24, 24));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& v : g.values()) v = u(rng);
  const WaveletPyramid pyr = decompose(g, 0, make_dd_bank(2));
  std::vector<std::vector<Dyadic>> pts;
  for (int m = -5; m <= 5; ++m) pts.push_back({Dyadic::from_parts(3 * m, 4)});
  const UnconditionalityReport r = unconditionality_probe(pyr, 4, pts, 9);
  CHECK(r.max_deviation < 1e-9);
  CHECK(r.abs_dominates);
  for (const auto& p : r.points) CHECK(p.abs_sum >= std::abs(p.value) - 1e-12);
}

TEST_CASE("geometric tail") {
  const GeometricTailReport r = geometric_tail_probe(make_dd_bank(2), 0.8, 10, Dyadic::parse("3/16"));
  CHECK(r.partial_sums.size() >= 10);
  CHECK(r.rate_constant <= r.psi_sup + 1e-12);
}
