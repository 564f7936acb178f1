#include "imra/ordering.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "imra/error.hpp"
#include "imra/tensor.hpp"

namespace imra {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(ErrorKind::Dimension, "ordering dimension " + std::to_string(dim) +
                                          " outside 1.." + std::to_string(kMaxDim));
  }
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

LatticePoint prepend(std::int64_t head, const LatticePoint& tail) {
  LatticePoint p;
  p.reserve(tail.size() + 1);
  p.push_back(head);
  p.insert(p.end(), tail.begin(), tail.end());
  return p;
}

std::int64_t sup_norm(const LatticePoint& p) {
  std::int64_t m = 0;
  for (const auto c : p) m = std::max(m, c < 0 ? -c : c);
  return m;
}

std::string point_string(const LatticePoint& p) {
  std::string s = "(";
  for (std::size_t l = 0; l < p.size(); ++l) s += (l ? "," : "") + std::to_string(p[l]);
  return s + ")";
}

std::vector<LatticePoint> build_shell(int dim, int k);

std::mutex& memo_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<int, int>, std::unique_ptr<const std::vector<LatticePoint>>>& memo() {
  static std::map<std::pair<int, int>, std::unique_ptr<const std::vector<LatticePoint>>> m;
  return m;
}

// One shell of dimension n+1 from the n-dimensional shells 0..k, following
// the order V, R', S'(-k..k), Y, T', W, Q.
std::vector<LatticePoint> lift_shell(int n, int k) {
  const std::int64_t e = k + 1;
  const auto& dk = shell_ordering(n, k);
  std::vector<LatticePoint> out;
  out.reserve(static_cast<std::size_t>(shell_size(n + 1, k)));

  std::set<LatticePoint> starts;
  for (int l = 0; l <= k; ++l) starts.insert(shell_ordering(n, l).front());

  // cube ordering of [-k-1, k+1]^n
  std::vector<LatticePoint> cube;
  cube.emplace_back(static_cast<std::size_t>(n), 0);
  for (int l = 0; l <= k; ++l) {
    const auto& d = shell_ordering(n, l);
    cube.insert(cube.end(), d.begin(), d.end());
  }

  for (int l = 0; l <= k; ++l) out.push_back(prepend(-e, shell_ordering(n, k - l).front()));
  for (std::size_t i = 0; i + 1 < cube.size(); ++i) {
    if (!starts.count(cube[i])) out.push_back(prepend(-e, cube[i]));
  }
  for (std::int64_t t = -k; t <= k; ++t) {
    for (std::size_t i = 0; i + 1 < dk.size(); ++i) out.push_back(prepend(t, dk[i]));
  }
  for (int l = 0; l <= k; ++l) out.push_back(prepend(e, shell_ordering(n, k - l).front()));
  for (const auto& v : cube) {
    if (!starts.count(v)) out.push_back(prepend(e, v));
  }
  const LatticePoint corner(static_cast<std::size_t>(n), -e);
  for (std::int64_t l = 0; l <= 2 * k; ++l) out.push_back(prepend(k - l, corner));
  out.emplace_back(static_cast<std::size_t>(n + 1), -e);
  return out;
}

std::vector<LatticePoint> build_shell(int dim, int k) {
  if (dim == 1) return {{-(k + 1)}, {k + 1}};
  if (dim == 2) {
    const std::uint64_t start = ipow(2 * static_cast<std::uint64_t>(k) + 1, 2);
    std::vector<LatticePoint> out;
    for (std::uint64_t i = 0; i < 8 * static_cast<std::uint64_t>(k) + 8; ++i) {
      out.push_back(plane_ordering(start + i));
    }
    return out;
  }
  return lift_shell(dim - 1, k);
}

}  // namespace

LatticePoint plane_ordering(std::uint64_t k) {
  if (k == 0) return {0, 0};
  // largest m with (2m+1)^2 <= k
  std::uint64_t m = 0;
  while ((2 * (m + 1) + 1) * (2 * (m + 1) + 1) <= k) ++m;
  const auto mm = static_cast<std::int64_t>(m);
  const auto r = static_cast<std::int64_t>(k - (2 * m + 1) * (2 * m + 1));
  if (r <= 2 * mm + 1) return {-mm + r, -mm - 1};
  if (r <= 4 * mm + 3) return {mm + 1, -mm - 1 + (r - (2 * mm + 1))};
  if (r <= 6 * mm + 5) return {mm + 1 - (r - (4 * mm + 3)), mm + 1};
  return {-mm - 1, mm + 1 - (r - (6 * mm + 5))};
}

std::uint64_t shell_size(int dim, int k) {
  return ipow(2 * static_cast<std::uint64_t>(k) + 3, dim) - ipow(2 * static_cast<std::uint64_t>(k) + 1, dim);
}

const std::vector<LatticePoint>& shell_ordering(int dim, int k) {
  check_dim(dim);
  if (k < 0) throw Error(ErrorKind::Parameter, "shell index must be nonnegative");
  {
    std::lock_guard lock(memo_mutex());
    const auto it = memo().find({dim, k});
    if (it != memo().end()) return *it->second;
  }
  // built outside the lock: construction recurses into lower shells
  auto shell = std::make_unique<const std::vector<LatticePoint>>(build_shell(dim, k));
  std::lock_guard lock(memo_mutex());
  auto [it, inserted] = memo().emplace(std::make_pair(dim, k), std::move(shell));
  return *it->second;
}

CubeOrdering::CubeOrdering(int dim) : dim_(dim) { check_dim(dim); }

LatticePoint CubeOrdering::next() {
  ++index_;
  if (shell_ < 0) {
    shell_ = 0;
    pos_ = 0;
    return LatticePoint(static_cast<std::size_t>(dim_), 0);
  }
  const auto& s = shell_ordering(dim_, shell_);
  LatticePoint p = s[pos_];
  if (++pos_ == s.size()) {
    ++shell_;
    pos_ = 0;
  }
  return p;
}

std::vector<LatticePoint> cube_ordering_prefix(int dim, std::size_t count) {
  CubeOrdering it(dim);
  std::vector<LatticePoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(it.next());
  return out;
}

std::int64_t sup_distance(const LatticePoint& a, const LatticePoint& b) {
  std::int64_t m = 0;
  for (std::size_t l = 0; l < std::min(a.size(), b.size()); ++l) {
    m = std::max(m, a[l] > b[l] ? a[l] - b[l] : b[l] - a[l]);
  }
  return m;
}

OrderingReport verify_sequence(const std::vector<LatticePoint>& seq, int dim, int K) {
  check_dim(dim);
  OrderingReport rep;
  rep.dim = dim;
  rep.shells = K;
  rep.points = seq.size();
  auto fail = [&](bool& flag, std::uint64_t index, const std::string& check, const std::string& msg) {
    flag = false;
    if (!rep.first_violation || index < rep.first_violation->index) {
      rep.first_violation = OrderingViolation{index, check, msg};
    }
  };

  const std::uint64_t expected = ipow(2 * static_cast<std::uint64_t>(K) + 1, dim);
  if (seq.size() != expected) {
    fail(rep.bijection, std::min<std::uint64_t>(seq.size(), expected), "bijection",
         "sequence has " + std::to_string(seq.size()) + " points, [-K,K]^n has " +
             std::to_string(expected));
  }

  const Box box = Box::cube(dim, -K, K);
  std::vector<bool> seen(expected, false);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const LatticePoint& p = seq[i];
    if (static_cast<int>(p.size()) != dim || !box.contains(p)) {
      fail(rep.bijection, i, "bijection", "point " + point_string(p) + " lies outside [-K,K]^n");
      continue;
    }
    std::uint64_t off = 0;
    for (const auto c : p) off = off * (2 * static_cast<std::uint64_t>(K) + 1) + static_cast<std::uint64_t>(c + K);
    if (seen[off]) {
      fail(rep.bijection, i, "bijection", "point " + point_string(p) + " repeats");
    }
    seen[off] = true;
  }

  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (sup_distance(seq[i - 1], seq[i]) != 1) {
      fail(rep.neighbours, i, "neighbours",
           point_string(seq[i - 1]) + " -> " + point_string(seq[i]) + " is not a unit step");
    }
  }

  if (!seq.empty() && sup_norm(seq[0]) != 0) {
    fail(rep.cubes, 0, "cubes", "sequence does not start at the origin");
  }
  for (int k = 0; k < K; ++k) {
    const std::uint64_t begin = ipow(2 * static_cast<std::uint64_t>(k) + 1, dim);
    const std::uint64_t end = std::min<std::uint64_t>(ipow(2 * static_cast<std::uint64_t>(k) + 3, dim), seq.size());
    for (std::uint64_t i = begin; i < end; ++i) {
      if (sup_norm(seq[i]) != k + 1) {
        fail(rep.cubes, i, "cubes", "point " + point_string(seq[i]) + " is not on shell " + std::to_string(k));
        break;
      }
    }
    if (end == ipow(2 * static_cast<std::uint64_t>(k) + 3, dim) && end > 0) {
      const LatticePoint corner(static_cast<std::size_t>(dim), -(k + 1));
      if (seq[end - 1] != corner) {
        fail(rep.endpoints, end - 1, "endpoints",
             "shell " + std::to_string(k) + " ends at " + point_string(seq[end - 1]) + ", expected " +
                 point_string(corner));
      }
    }
  }
  return rep;
}

OrderingReport verify_ordering(int dim, int K) {
  check_dim(dim);
  if (K < 0) throw Error(ErrorKind::Parameter, "shell count must be nonnegative");
  const double total = static_cast<double>(ipow(2 * static_cast<std::uint64_t>(K) + 1, dim));
  if (total > 1e7) {
    throw Error(ErrorKind::Resource, "(2K+1)^n = " + std::to_string(static_cast<std::uint64_t>(total)) +
                                         " exceeds 10^7 points");
  }
  const auto seq = cube_ordering_prefix(dim, static_cast<std::size_t>(total));
  OrderingReport rep = verify_sequence(seq, dim, K);
  if (dim < 2) return rep;

  auto fail = [&](std::uint64_t index, const std::string& check, const std::string& msg) {
    rep.shell_conditions = false;
    if (!rep.first_violation || index < rep.first_violation->index) {
      rep.first_violation = OrderingViolation{index, check, msg};
    }
  };
  const LatticePoint origin(static_cast<std::size_t>(dim), 0);
  for (int k = 0; k < K; ++k) {
    const auto& d = shell_ordering(dim, k);
    const std::uint64_t start = ipow(2 * static_cast<std::uint64_t>(k) + 1, dim);
    auto need = [&](const char* name, const LatticePoint& a, const LatticePoint& b) {
      if (sup_distance(a, b) != 1) {
        fail(start, name, "shell " + std::to_string(k) + ": " + point_string(a) + " and " +
                              point_string(b) + " are not neighbours");
      }
    };
    need("I4", d.front(), d.back());
    need("I5", d.front(), d[d.size() - 2]);
    if (k + 1 < K) need("I6", d.front(), shell_ordering(dim, k + 1).front());
    const LatticePoint& prev_end = k == 0 ? origin : shell_ordering(dim, k - 1).back();
    need("I7", d.front(), prev_end);
    need("I8", d[1], prev_end);
  }
  return rep;
}

}  // namespace imra
