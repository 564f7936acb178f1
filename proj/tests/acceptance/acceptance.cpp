// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "imra/besov.hpp"
#include "imra/error.hpp"
#include "imra/filters.hpp"
#include "imra/io.hpp"
#include "imra/ordering.hpp"
#include "imra/scaling.hpp"
#include "imra/tensor.hpp"
#include "imra/transform.hpp"
#include "imra/verify.hpp"

using namespace imra;
namespace fs = std::filesystem;

namespace tol {
constexpr double kDualitySeconds = 5.0;
constexpr double kReconstruction = 1e-10;
constexpr double kReconstructionSeconds = 10.0;
constexpr int kRefinementResolution = 6;
constexpr int kBiorthogonalityWindow = 8;
constexpr double kReproduction = 1e-9;
constexpr double kProjectionFinest = 1e-3;
constexpr double kSingleCoefficient = 1e-12;
constexpr double kNormIdentities = 1e-9;
constexpr double kHolder = 0.1;
constexpr double kEquivalenceBand = 4.0;
constexpr double kPermutation = 1e-9;
constexpr double kOrderingSeconds = 5.0;
constexpr double kVerifySeconds = 60.0;
}  // namespace tol

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

GridFunction random_grid(int dim, int level, std::int64_t extent, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction g(level, Box::cube(dim, -(extent / 2), extent - 1 - extent / 2));
  for (double& v : g.values()) v = u(rng);
  return g;
}

WaveletPyramid random_pyramid(std::mt19937_64& rng) {
  return decompose(random_grid(2, 3, 24, rng), 1, make_dd_bank(2));
}

// a + s b, channel by channel; both pyramids share their boxes
WaveletPyramid combine(const WaveletPyramid& a, const WaveletPyramid& b, double s) {
  WaveletPyramid out = a;
  for (std::size_t i = 0; i < out.coarse.size(); ++i) out.coarse.values()[i] += s * b.coarse.values()[i];
  for (auto& [key, d] : out.details) {
    const auto& other = b.details.at(key).values();
    for (std::size_t i = 0; i < d.size(); ++i) d.values()[i] += s * other[i];
  }
  return out;
}

WaveletPyramid scaled(const WaveletPyramid& a, double s) {
  WaveletPyramid zero = a;
  return combine(combine(zero, a, -1.0), a, s);
}

double sin_window(std::span<const double> x) {
  double v = 1.0;
  for (const double c : x) v *= std::abs(c) < 3.0 ? std::sin(c) * std::pow(std::cos(M_PI * c / 6.0), 2) : 0.0;
  return v;
}

double gaussian(std::span<const double> x) {
  double r2 = 0.0;
  for (const double c : x) r2 += c * c;
  return std::exp(-r2);
}

double bump(std::span<const double> x) {
  const double s = 1.0 - x[0] * x[0];
  return s > 0.0 ? s * s : 0.0;
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240601);

  criterion(1, "filter duality", [] {
    const auto start = std::chrono::steady_clock::now();
    Dyadic worst;
    for (int order = 1; order <= 4; ++order) {
      const FilterBank bank = derive_bank(dd_scaling_filter(order), order);
      for (int dim = 1; dim <= 3; ++dim) {
        const Dyadic d = filter_duality_check(bank, dim, 4 * order);
        if (worst < d) worst = d;
      }
    }
    const double secs = seconds_since(start);
    return Outcome{worst.is_zero() && secs < tol::kDualitySeconds,
                   "max deviation " + worst.to_string() + " over n=1..3, L=1..4 in " + fmt(secs) + " s"};
  });

  criterion(2, "perfect reconstruction", [&] {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int order = 1; order <= 2; ++order) {
      for (int dim = 1; dim <= 3; ++dim) {
        const GridFunction g = random_grid(dim, 3, 65, rng);
        const GridFunction back = reconstruct(decompose(g, 0, make_dd_bank(order)));
        worst = std::max(worst, max_abs_difference(back, g, g.box()));
      }
    }
    const double secs = seconds_since(start);
    return Outcome{worst < tol::kReconstruction && secs < tol::kReconstructionSeconds,
                   "max error " + fmt(worst) + " on 65^n grids, 3 levels, in " + fmt(secs) + " s"};
  });

  criterion(3, "cardinal interpolation and refinement", [] {
    bool ok = true;
    for (int order = 1; order <= 4; ++order) {
      const FilterBank bank = derive_bank(dd_scaling_filter(order), order);
      const ExactFunctionTable base = refine_scaling_exact(bank, 0);
      for (std::int64_t k = base.lo; k <= base.hi; ++k) ok = ok && base.at(k) == Dyadic(k == 0 ? 1 : 0);
      for (int r = 1; r <= tol::kRefinementResolution; ++r) {
        const ExactFunctionTable fine = refine_scaling_exact(bank, r);
        const ExactFunctionTable coarse = refine_scaling_exact(bank, r - 1);
        // phi(m / 2^(r-1)) = sum_k h_k phi(2m / 2^(r-1) - k), read from the level-r table
        for (std::int64_t m = coarse.lo; m <= coarse.hi; ++m) {
          Dyadic rhs;
          for (int k = bank.h.lo(); k <= bank.h.hi(); ++k) {
            rhs += bank.h.at(k) * fine.at(4 * m - (std::int64_t{k} << r));
          }
          ok = ok && rhs == coarse.at(m);
        }
      }
    }
    return Outcome{ok, ok ? "phi(k) = delta and refinement exact for L=1..4, r<=6" : "exact identity violated"};
  });

  criterion(4, "biorthogonality", [] {
    Dyadic worst;
    for (int order = 1; order <= 4; ++order) {
      const Dyadic d = biorthogonality_check(derive_bank(dd_scaling_filter(order), order),
                                             tol::kBiorthogonalityWindow)
                           .max();
      if (worst < d) worst = d;
    }
    return Outcome{worst.is_zero(), "max deviation " + worst.to_string() + " at |k|,|l| <= 8"};
  });

  criterion(5, "polynomial reproduction", [] {
    double worst = 0.0;
    for (int order = 1; order <= 3; ++order) {
      const FilterBankPtr b = make_dd_bank(order);
      for (int dim = 1; dim <= 2; ++dim) {
        for (int degree = 0; degree <= 2 * order - 1; ++degree) {
          const auto poly = [degree](std::span<const double> x) {
            double v = 1.0;
            for (std::size_t l = 0; l < x.size(); ++l) v *= std::pow(x[l] - 0.3 * static_cast<double>(l), degree);
            return v + x[0];
          };
          const GridFunction g = sample_grid(poly, 3, Box::cube(dim, -24, 24));
          const LevelSplit split = analyze_level(g, *b);
          for (const auto& [mask, d] : split.details) {
            for_each_point(clean_detail_box(g.box(), Orientation(dim, mask), *b),
                           [&](const LatticePoint& p) { worst = std::max(worst, std::abs(d.at(p))); });
          }
        }
      }
    }
    return Outcome{worst < tol::kReproduction, "max interior detail " + fmt(worst) + " up to degree 2L-1"};
  });

  criterion(6, "projection error bound", [] {
    bool ok = true;
    std::string detail;
    for (const auto& [name, f] : {std::pair<const char*, SampledFunction>{"sin window", sin_window},
                                  std::pair<const char*, SampledFunction>{"gaussian", gaussian}}) {
      const ProjectionErrorReport r = projection_error_check(f, 1, -3, 3, make_dd_bank(1), 0, 5, 10);
      const double finest = r.rows.back().measured;
      ok = ok && r.all_pass && r.monotone && finest < tol::kProjectionFinest;
      detail += std::string(detail.empty() ? "" : ", ") + name + " j=5 " + fmt(finest) + " <= " +
                fmt(r.rows.back().bound) + (r.all_pass ? "" : " (bound violated)");
    }
    return Outcome{ok, detail};
  });

  criterion(7, "Besov coefficient norm", [&] {
    WaveletPyramid single = decompose(GridFunction(3, Box::cube(1, -16, 16)), 0, make_dd_bank(1));
    single.details.at({2, 1U}).ref(std::vector<std::int64_t>{1}) = 1.0;
    const double single_err = std::abs(coeff_norm(single, {1.5, 2, 1, 0}).total - std::pow(2.0, (1.5 - 0.5) * 2));

    double identity_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const WaveletPyramid a = random_pyramid(rng);
      const WaveletPyramid b = random_pyramid(rng);
      const BesovParams params{0.5 + trial % 3, trial % 2 == 0 ? 2.0 : kInf, trial % 5 == 0 ? 1.0 : 2.0, 1};
      const double na = coeff_norm(a, params).total;
      const double nb = coeff_norm(b, params).total;
      identity_err = std::max(identity_err, std::abs(coeff_norm(scaled(a, -2.5), params).total - 2.5 * na) / na);
      identity_err = std::max(identity_err, coeff_norm(combine(a, b, 1.0), params).total - (na + nb));
    }

    double holder_err = 0.0;
    std::string est;
    for (const double alpha : {0.5, 1.0}) {
      const auto f = [alpha](std::span<const double> x) { return std::pow(std::abs(x[0] - 1.0 / 3.0), alpha); };
      const HolderEstimate e = holder_estimate(sample_grid(f, 10, Box::cube(1, -1024, 1024)), 3, make_dd_bank(2));
      holder_err = std::max(holder_err, e.infinite || e.points.size() < 5 ? kInf : std::abs(e.sigma - alpha));
      est += (est.empty() ? "" : ", ") + fmt(alpha) + " -> " + fmt(e.sigma);
    }
    return Outcome{single_err < tol::kSingleCoefficient && identity_err < tol::kNormIdentities &&
                       holder_err <= tol::kHolder,
                   "single " + fmt(single_err) + ", identities " + fmt(identity_err) + ", holder " + est};
  });

  criterion(8, "norm equivalence band", [] {
    const EquivalenceReport r = equivalence_probe(bump, 1, -2, 2, {1.2, kInf, kInf, 0}, {6, 7, 8, 9},
                                                  make_dd_bank(2), 3);
    return Outcome{r.spread && *r.spread < tol::kEquivalenceBand,
                   "ratio spread " + fmt(r.spread.value_or(kInf)) + " over resolutions 6..9"};
  });

  criterion(9, "unconditional convergence", [&] {
    const WaveletPyramid pyr = decompose(random_grid(2, 4, 33, rng), 1, make_dd_bank(2));
    std::uniform_int_distribution<int> pick(-256, 256);
    std::vector<std::vector<Dyadic>> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({Dyadic::from_parts(pick(rng), 8), Dyadic::from_parts(pick(rng), 8)});
    const UnconditionalityReport r = unconditionality_probe(pyr, 8, pts, 20240601);
    return Outcome{r.max_deviation < tol::kPermutation && r.abs_dominates,
                   "max permutation deviation " + fmt(r.max_deviation) +
                       (r.abs_dominates ? ", absolute sums dominate at 50 points" : ", absolute sum below value")};
  });

  criterion(10, "orderings", [] {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& [dim, K] : {std::pair{1, 100}, std::pair{2, 20}, std::pair{3, 6}, std::pair{4, 3}}) {
      const OrderingReport r = verify_ordering(dim, K);
      ok = ok && r.ok();
      detail += "(" + std::to_string(dim) + "," + std::to_string(K) + ") " + (r.ok() ? "ok" : "fails");
      if (r.first_violation) detail += " [" + r.first_violation->check + " at " + std::to_string(r.first_violation->index) + "]";
      detail += "; ";
    }
    bool closed = true;
    for (std::uint64_t k = 1; k < 10000; ++k) {
      const LatticePoint p = plane_ordering(k);
      std::int64_t m = 0;
      while (static_cast<std::uint64_t>((2 * m + 3) * (2 * m + 3)) <= k) ++m;
      const std::int64_t r = static_cast<std::int64_t>(k) - (2 * m + 1) * (2 * m + 1);
      LatticePoint q;
      if (r <= 2 * m + 1) q = {-m + r, -m - 1};
      else if (r <= 4 * m + 3) q = {m + 1, -m - 1 + (r - 2 * m - 1)};
      else if (r <= 6 * m + 5) q = {m + 1 - (r - 4 * m - 3), m + 1};
      else q = {-m - 1, m + 1 - (r - 6 * m - 5)};
      closed = closed && p == q;
    }
    const double secs = seconds_since(start);
    ok = ok && closed && secs < tol::kOrderingSeconds;
    return Outcome{ok, detail + "closed form " + (closed ? "ok" : "mismatch")};
  });

  criterion(11, "file determinism and verify runtime", [&] {
    const fs::path dir = fs::temp_directory_path() / ("imra_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const GridFunction g = random_grid(2, 2, 17, rng);
    write_grid(dir / "a.imra", g);
    write_grid(dir / "b.imra", read_grid(dir / "a.imra"));
    bool same = read_file(dir / "a.imra") == read_file(dir / "b.imra");
    write_pyramid(dir / "p", decompose(g, 0, make_dd_bank(2)));
    write_pyramid(dir / "q", read_pyramid(dir / "p"));
    for (const auto& e : fs::directory_iterator(dir / "p")) {
      same = same && read_file(e.path()) == read_file(dir / "q" / e.path().filename());
    }
    fs::remove_all(dir);

    const auto start = std::chrono::steady_clock::now();
    std::size_t failed = 0;
    const auto results = run_verify({});
    for (const auto& r : results) failed += r.passed() ? 0 : 1;
    const double secs = seconds_since(start);
    return Outcome{same && failed == 0 && secs < tol::kVerifySeconds,
                   std::string(same ? "byte-identical round trips" : "round trip differs") + ", verify " +
                       std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) +
                       " in " + fmt(secs) + " s"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
