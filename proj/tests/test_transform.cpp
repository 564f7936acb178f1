#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "imra/error.hpp"
#include "imra/scaling.hpp"
#include "imra/transform.hpp"

using namespace imra;

namespace {

GridFunction random_grid(int dim, int level, std::int64_t lo, std::int64_t hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction g(level, Box::cube(dim, lo, hi));
  for (double& v : g.values()) v = u(rng);
  return g;
}

}  // namespace

TEST_CASE("sampling") {
  const GridFunction ones = sample_grid([](std::span<const double>) { return 1.0; }, 3, Box::cube(2, -2, 5));
  for (double v : ones.values()) CHECK(v == 1.0);

  const GridFunction lin = sample_grid([](std::span<const double> x) { return x[0]; }, 1, Box::cube(1, 0, 4));
  CHECK(lin.values() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});

  CHECK_THROWS_AS(sample_grid([](std::span<const double>) { return NAN; }, 0, Box::cube(1, 0, 1)), Error);
  CHECK_THROWS_AS(sample_grid([](std::span<const double>) { return 0.0; }, 21, Box::cube(1, 0, 1)), Error);

  const GridFunction coarse = sample_grid(lin, 0, Box::cube(1, 0, 2));
  CHECK(coarse.values() == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("analysis of simple signals") {
  const FilterBank b1 = derive_bank(dd_scaling_filter(1), 1);

  SUBCASE("linear samples have vanishing interior details") {
    const GridFunction lin = sample_grid([](std::span<const double> x) { return 3.0 * x[0] - 1.0; }, 3,
                                         Box::cube(1, -16, 16));
    const LevelSplit split = analyze_level(lin, b1);
    const GridFunction& d = split.details.at(1);
    const Box clean = clean_detail_box(lin.box(), Orientation(1, 1), b1);
    for_each_point(clean, [&](const LatticePoint& p) { CHECK(std::abs(d.at(p)) < 1e-15); });
    CHECK(clean == Box::cube(1, -8, 7));
  }

  SUBCASE("even impulse") {
    GridFunction fine(0, Box::cube(1, -8, 8));
    fine.ref(std::vector<std::int64_t>{4}) = 1.0;
    const LevelSplit split = analyze_level(fine, b1);
    for_each_point(split.coarse.box(), [&](const LatticePoint& p) {
      CHECK(split.coarse.at(p) == (p[0] == 2 ? 1.0 : 0.0));
    });
    // only the even taps g~_0 = g~_2 = -1/2 see an even-indexed impulse
    const GridFunction& d = split.details.at(1);
    for_each_point(d.box(), [&](const LatticePoint& p) {
      const double expect = (p[0] == 2 || p[0] == 1) ? -0.5 : 0.0;
      CHECK(d.at(p) == expect);
    });
  }

  SUBCASE("zero in, zero out") {
    const LevelSplit split = analyze_level(GridFunction(2, Box::cube(2, 0, 9)), b1);
    CHECK(split.coarse.max_abs() == 0.0);
    for (const auto& [mask, d] : split.details) CHECK(d.max_abs() == 0.0);
    CHECK(split.details.size() == 3);
  }

  CHECK_THROWS_AS(analyze_level(GridFunction(0, Box::cube(1, 1, 1)), b1), Error);
}

TEST_CASE("synthesis") {
  const FilterBank b2 = derive_bank(dd_scaling_filter(2), 2);

  SUBCASE("no details is interpolating refinement") {
    auto cubic = [](double x) { return x * x * x - 2.0 * x; };
    GridFunction coarse(0, Box::cube(1, -10, 10));
    coarse.for_each([&](const LatticePoint& p, double& v) { v = cubic(static_cast<double>(p[0])); });
    const GridFunction fine = synthesize_level(coarse, {}, b2);
    for (std::int64_t nu = -14; nu <= 14; ++nu) {
      const std::vector<std::int64_t> p{nu};
      CHECK(fine.at(p) == doctest::Approx(cubic(static_cast<double>(nu) / 2)).epsilon(1e-13));
    }
    for (std::int64_t lambda = -10; lambda <= 10; ++lambda) {
      CHECK(fine.at(std::vector<std::int64_t>{2 * lambda}) == coarse.at(std::vector<std::int64_t>{lambda}));
    }
  }

  SUBCASE("single detail gives the wavelet's fine samples") {
    GridFunction coarse(0, Box::cube(2, -3, 3));
    DetailMap details;
    for (const Orientation& s : detail_orientations(2)) {
      GridFunction d(0, Box::cube(2, -3, 3));
      details.emplace(s.mask(), std::move(d));
    }
    details.at(0b11).ref(std::vector<std::int64_t>{1, -1}) = 1.0;
    const GridFunction fine = synthesize_level(coarse, details, b2, Box::cube(2, -8, 8));
    // g^[2]_(s, nu - 2 mu) with g = delta_1 per axis
    for_each_point(fine.box(), [&](const LatticePoint& p) {
      CHECK(fine.at(p) == ((p[0] == 3 && p[1] == -1) ? 1.0 : 0.0));
    });
  }

  SUBCASE("coarse impulse refines to phi") {
    GridFunction g(0, Box::cube(1, -4, 4));
    g.ref(std::vector<std::int64_t>{0}) = 1.0;
    for (int step = 0; step < 4; ++step) {
      g = synthesize_level(g, {}, b2);
    }
    const DyadicFunctionTable t = refine_scaling(b2, 4);
    for (std::int64_t k = t.lo; k <= t.hi; ++k) {
      CHECK(g.at(std::vector<std::int64_t>{k}) == doctest::Approx(t.at(k)).epsilon(1e-15));
    }
  }

  SUBCASE("inconsistent channel boxes") {
    GridFunction coarse(0, Box::cube(1, -3, 3));
    DetailMap details;
    details.emplace(1U, GridFunction(0, Box::cube(1, -3, 3)));
    CHECK_NOTHROW(synthesize_level(coarse, details, b2));
    DetailMap bad;
    bad.emplace(1U, GridFunction(0, Box::cube(2, -3, 3)));
    CHECK_THROWS_AS(synthesize_level(coarse, bad, b2), Error);
  }
}

TEST_CASE("perfect reconstruction") {
  for (int order = 1; order <= 3; ++order) {
    for (int dim = 1; dim <= 3; ++dim) {
      CAPTURE(order);
      CAPTURE(dim);
      const std::int64_t hi = dim == 3 ? 16 : 40;
      const GridFunction fine = random_grid(dim, 3, -hi, hi + 3, 17U * order + dim);
      const WaveletPyramid pyr = decompose(fine, 0, make_dd_bank(order));
      CHECK(pyr.J == 3);
      CHECK(pyr.details.size() == 3 * ((1U << dim) - 1));
      const GridFunction back = reconstruct(pyr);
      REQUIRE(back.box() == fine.box());
      CHECK(max_abs_difference(back, fine, fine.box()) < 1e-12);
    }
  }
}

TEST_CASE("decompose details vanish on polynomials") {
  const FilterBankPtr b2 = make_dd_bank(2);
  const GridFunction c = sample_grid([](std::span<const double>) { return 2.5; }, 4, Box::cube(2, -20, 20));
  const WaveletPyramid pc = decompose(c, 1, b2);
  // zero extension makes the boundary coefficients nonzero; only clean ones vanish
  for (const auto& [key, d] : pc.details) {
    const Box clean = clean_detail_box(pc.box_at(key.first + 1), Orientation(2, key.second), *b2);
    CHECK_FALSE(clean.empty());
    for_each_point(clean, [&](const LatticePoint& p) { CHECK(std::abs(d.at(p)) < 1e-14); });
  }
  for (double v : pc.coarse.values()) CHECK(v == 2.5);

  const GridFunction cubic = sample_grid(
      [](std::span<const double> x) { return x[0] * x[0] * x[1] - x[1] * x[1] * x[1] + x[0]; }, 3,
      Box::cube(2, -24, 24));
  const LevelSplit split = analyze_level(cubic, *b2);
  for (const auto& [mask, d] : split.details) {
    const Box clean = clean_detail_box(cubic.box(), Orientation(2, mask), *b2);
    for_each_point(clean, [&](const LatticePoint& p) { CHECK(std::abs(d.at(p)) < 1e-12); });
  }
}

TEST_CASE("projection evaluation") {
  const FilterBankPtr b1 = make_dd_bank(1);
  const GridFunction lin = sample_grid([](std::span<const double> x) { return 2.0 * x[0] + 1.0; }, 2,
                                       Box::cube(1, -20, 20));
  const std::vector<Dyadic> on_lattice{Dyadic::parse("3/4")};
  CHECK(project_eval(lin, b1, 2, on_lattice) == 2.5);
  const std::vector<Dyadic> mid{Dyadic::parse("3/8")};
  CHECK(project_eval(lin, b1, 2, mid) == doctest::Approx(1.75));
  CHECK(project_eval(lin, b1, 1, mid) == doctest::Approx(1.75));
  const GridFunction c = sample_grid([](std::span<const double>) { return 4.0; }, 2, Box::cube(1, -20, 20));
  CHECK(project_eval(c, make_dd_bank(3), 1, mid) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("interior boxes") {
  const FilterBank b1 = derive_bank(dd_scaling_filter(1), 1);
  CHECK(interior_box(Box::cube(1, 0, 16), 1, b1) == Box::cube(1, 2, 14));
  CHECK(interior_box(Box::cube(1, 0, 16), 0, b1) == Box::cube(1, 0, 16));
  CHECK(interior_box(Box::cube(2, 0, 8), 4, b1).empty());
}

TEST_CASE("thresholding") {
  const FilterBankPtr b = make_dd_bank(2);
  const GridFunction g = random_grid(2, 3, -12, 12, 5);
  const WaveletPyramid pyr = decompose(g, 0, b);

  const ThresholdResult none = threshold(pyr, 0.0);
  CHECK(none.dropped == 0);
  CHECK(max_abs_difference(reconstruct(none.pyramid), g, g.box()) < 1e-12);

  const ThresholdResult all = threshold(pyr, std::numeric_limits<double>::infinity());
  CHECK(all.kept == 0);
  GridFunction sub = pyr.coarse;
  for (int j = pyr.j0; j < pyr.J; ++j) {
    sub = synthesize_level(sub, {}, *b, pyr.box_at(j + 1));
  }
  CHECK(max_abs_difference(reconstruct(all.pyramid), sub, g.box()) < 1e-12);

  const GridFunction smooth = sample_grid(
      [](std::span<const double> x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); }, 5, Box::cube(2, -128, 128));
  const WaveletPyramid sp = decompose(smooth, 1, b);
  const ThresholdResult t = threshold(sp, 1e-6);
  CHECK(static_cast<double>(t.dropped) / static_cast<double>(t.dropped + t.kept) > 0.9);
  const double err = max_abs_difference(reconstruct(t.pyramid), smooth, smooth.box());
  const double psi_sup = table_sup(refine_wavelet(*b, 8));
  CHECK(err <= t.dropped_l1 * psi_sup);
}
