#include "imra/filters.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>

#include "imra/error.hpp"

namespace imra {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

Dyadic to_dyadic(const cpp_rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  const auto exp = static_cast<int>(boost::multiprecision::msb(den));
  if (den != (cpp_int(1) << exp)) {
    throw Error(ErrorKind::InvalidFilter, "coefficient is not a dyadic rational");
  }
  const cpp_int limit = cpp_int(1) << 120;
  if (num >= limit || num <= -limit) {
    throw Error(ErrorKind::Overflow, "coefficient numerator exceeds 120 bits");
  }
  // split into two 64-bit halves; cpp_int does not convert to __int128
  const cpp_int mag = num < 0 ? cpp_int(-num) : num;
  const auto lo = static_cast<std::uint64_t>(mag & cpp_int(UINT64_MAX));
  const auto hi = static_cast<std::uint64_t>(mag >> 64);
  auto value = static_cast<Dyadic::Int>((static_cast<unsigned __int128>(hi) << 64) | lo);
  if (num < 0) value = -value;
  return Dyadic::from_parts(value, exp);
}

std::string coeff_label(int k, const Dyadic& v) {
  return "h_" + std::to_string(k) + " = " + v.to_string();
}

}  // namespace

IndexedFilter::IndexedFilter(int offset, std::vector<Dyadic> coeffs)
    : offset_(offset), coeffs_(std::move(coeffs)) {
  std::size_t first = 0;
  while (first < coeffs_.size() && coeffs_[first].is_zero()) ++first;
  std::size_t last = coeffs_.size();
  while (last > first && coeffs_[last - 1].is_zero()) --last;
  if (first == last) {
    coeffs_.clear();
    offset_ = 0;
  } else {
    coeffs_ = std::vector<Dyadic>(coeffs_.begin() + static_cast<std::ptrdiff_t>(first),
                                  coeffs_.begin() + static_cast<std::ptrdiff_t>(last));
    offset_ += static_cast<int>(first);
  }
  values_.reserve(coeffs_.size());
  for (const auto& c : coeffs_) values_.push_back(c.to_double());
}

IndexedFilter IndexedFilter::delta(int index, Dyadic value) {
  return IndexedFilter(index, {value});
}

Dyadic IndexedFilter::at(int k) const {
  const int i = k - offset_;
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return Dyadic{};
  return coeffs_[static_cast<std::size_t>(i)];
}

double IndexedFilter::value(int k) const noexcept {
  const int i = k - offset_;
  if (i < 0 || i >= static_cast<int>(values_.size())) return 0.0;
  return values_[static_cast<std::size_t>(i)];
}

Dyadic IndexedFilter::sum() const {
  Dyadic s;
  for (const auto& c : coeffs_) s += c;
  return s;
}

std::string FilterBank::id() const {
  return order > 0 ? "dd" + std::to_string(order) : "custom";
}

IndexedFilter dd_scaling_filter(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw Error(ErrorKind::OrderUnsupported,
                "Deslauriers-Dubuc order " + std::to_string(order) +
                    " is outside 1.." + std::to_string(kMaxOrder));
  }
  const int reach = 2 * order - 1;
  std::vector<int> nodes;
  for (int x = -reach; x <= reach; x += 2) nodes.push_back(x);

  std::vector<Dyadic> coeffs(static_cast<std::size_t>(2 * reach + 1));
  coeffs[static_cast<std::size_t>(reach)] = Dyadic(1);
  for (const int xi : nodes) {
    cpp_rational weight(1);
    for (const int xj : nodes) {
      if (xj != xi) weight *= cpp_rational(cpp_int(-xj)) / cpp_rational(cpp_int(xi - xj));
    }
    coeffs[static_cast<std::size_t>(xi + reach)] = to_dyadic(weight);
  }
  return IndexedFilter(-reach, std::move(coeffs));
}

FilterBank derive_bank(const IndexedFilter& h, int order) {
  if (h.empty()) {
    throw Error(ErrorKind::InvalidFilter, "refinement mask is empty");
  }
  for (int k = h.lo(); k <= h.hi(); ++k) {
    if (k % 2 != 0) continue;
    const Dyadic expected = k == 0 ? Dyadic(1) : Dyadic(0);
    if (h.at(k) != expected) {
      throw Error(ErrorKind::InvalidFilter,
                  "even-index cardinality fails at index " + std::to_string(k) + ": " +
                      coeff_label(k, h.at(k)) + ", expected " + expected.to_string());
    }
  }
  if (h.at(0) != Dyadic(1)) {
    throw Error(ErrorKind::InvalidFilter, "even-index cardinality fails at index 0: h_0 = 0");
  }
  if (const Dyadic s = h.sum(); s != Dyadic(2)) {
    throw Error(ErrorKind::InvalidFilter,
                "sum of h is " + s.to_string() + " (" + std::to_string(s.to_double()) +
                    "), expected 2");
  }

  FilterBank bank;
  bank.order = order;
  bank.h = h;
  bank.g = IndexedFilter::delta(1);
  bank.hdual = IndexedFilter::delta(0);

  // gdual_k = (-1)^(k-1) h_(1-k), supported on 1 - supp h
  const int lo = 1 - h.hi();
  const int hi = 1 - h.lo();
  std::vector<Dyadic> gd;
  gd.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k) {
    const Dyadic v = h.at(1 - k);
    gd.push_back((k - 1) % 2 == 0 ? v : -v);
  }
  bank.gdual = IndexedFilter(lo, std::move(gd));
  bank.support_radius = std::max(std::abs(h.lo()), std::abs(h.hi()));
  return bank;
}

FilterBankPtr make_dd_bank(int order) {
  return std::make_shared<const FilterBank>(derive_bank(dd_scaling_filter(order), order));
}

FilterBankPtr bank_from_id(const std::string& id) {
  if (id.size() > 2 && id.rfind("dd", 0) == 0) {
    int order = 0;
    try {
      std::size_t used = 0;
      order = std::stoi(id.substr(2), &used);
      if (used != id.size() - 2) order = 0;
    } catch (const std::exception&) {
      order = 0;
    }
    if (order != 0) return make_dd_bank(order);
  }
  throw Error(ErrorKind::Parameter, "unknown filter bank '" + id + "' (expected dd<L>)");
}

bool ValidationReport::ok() const {
  for (const auto& c : checks) {
    if (!c.passed && !c.warning_only) return false;
  }
  return true;
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport custom_bank_validate(const IndexedFilter& h) {
  ValidationReport report;

  ValidationCheck support{"finite-support", !h.empty(), false,
                          h.empty() ? "mask is empty"
                                    : "indices " + std::to_string(h.lo()) + ".." +
                                          std::to_string(h.hi())};
  report.checks.push_back(support);

  ValidationCheck even{"even-index", true, false, "h_(2k) = delta_(k,0)"};
  const int lo = h.empty() ? 0 : std::min(h.lo(), 0);
  const int hi = h.empty() ? 0 : std::max(h.hi(), 0);
  for (int k = lo; k <= hi; ++k) {
    if (k % 2 != 0) continue;
    const Dyadic expected = k == 0 ? Dyadic(1) : Dyadic(0);
    if (h.at(k) != expected) {
      even.passed = false;
      even.detail = "fails at k=" + std::to_string(k / 2) + " (index " + std::to_string(k) +
                    "): h = " + std::to_string(h.value(k)) + ", expected " +
                    expected.to_string();
      break;
    }
  }
  report.checks.push_back(even);

  const Dyadic s = h.sum();
  std::ostringstream sum_detail;
  sum_detail << "sum = " << s.to_double();
  report.checks.push_back({"sum", s == Dyadic(2), false, sum_detail.str()});

  ValidationCheck sym{"symmetry", true, true, "h_k = h_(-k)"};
  for (int k = lo; k <= hi; ++k) {
    if (h.at(k) != h.at(-k)) {
      sym.passed = false;
      sym.detail = "asymmetric at index " + std::to_string(k);
      break;
    }
  }
  report.checks.push_back(sym);
  return report;
}

std::string format_filter_line(const std::string& name, const IndexedFilter& f) {
  std::string line = name;
  for (int k = f.lo(); !f.empty() && k <= f.hi(); ++k) {
    const Dyadic v = f.at(k);
    if (v.is_zero()) continue;
    line += ' ';
    line += std::to_string(k);
    line += ':';
    line += v.to_string();
  }
  return line;
}

std::string format_bank(const FilterBank& bank) {
  return format_filter_line("h", bank.h) + "\n" + format_filter_line("g", bank.g) + "\n" +
         format_filter_line("hd", bank.hdual) + "\n" + format_filter_line("gd", bank.gdual) +
         "\n";
}

namespace {

IndexedFilter parse_filter_tokens(std::istringstream& in, const std::string& name) {
  std::vector<std::pair<int, Dyadic>> entries;
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw Error(ErrorKind::Format,
                  "filter '" + name + "': token '" + token + "' is not index:value");
    }
    int index = 0;
    try {
      std::size_t used = 0;
      index = std::stoi(token.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("index");
    } catch (const std::exception&) {
      throw Error(ErrorKind::Format, "filter '" + name + "': bad index in '" + token + "'");
    }
    entries.emplace_back(index, Dyadic::parse(std::string_view(token).substr(colon + 1)));
  }
  if (entries.empty()) return {};
  int lo = entries.front().first;
  int hi = lo;
  for (const auto& [k, v] : entries) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  std::vector<Dyadic> coeffs(static_cast<std::size_t>(hi - lo + 1));
  std::vector<bool> seen(coeffs.size(), false);
  for (const auto& [k, v] : entries) {
    const auto i = static_cast<std::size_t>(k - lo);
    if (seen[i]) {
      throw Error(ErrorKind::Format,
                  "filter '" + name + "': index " + std::to_string(k) + " given twice");
    }
    seen[i] = true;
    coeffs[i] = v;
  }
  return IndexedFilter(lo, std::move(coeffs));
}

}  // namespace

FilterBank parse_bank(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  std::optional<IndexedFilter> h;
  std::vector<std::pair<std::string, IndexedFilter>> others;
  while (std::getline(lines, line)) {
    std::istringstream in(line);
    std::string name;
    if (!(in >> name) || name[0] == '#') continue;
    if (name.back() == ':') name.pop_back();
    IndexedFilter f = parse_filter_tokens(in, name);
    if (name == "h") {
      h = std::move(f);
    } else if (name == "g" || name == "hd" || name == "gd") {
      others.emplace_back(name, std::move(f));
    } else {
      throw Error(ErrorKind::Format, "unknown filter name '" + name + "'");
    }
  }
  if (!h) throw Error(ErrorKind::Format, "filter bank text has no 'h' line");

  // recognise DD masks so that the identifier survives a round trip
  int order = 0;
  if (h->lo() == -h->hi() && (h->hi() + 1) % 2 == 0) {
    const int candidate = (h->hi() + 1) / 2;
    if (candidate >= 1 && candidate <= kMaxOrder && dd_scaling_filter(candidate) == *h) {
      order = candidate;
    }
  }
  FilterBank bank = derive_bank(*h, order);
  for (const auto& [name, f] : others) {
    const IndexedFilter& derived = name == "g" ? bank.g : (name == "hd" ? bank.hdual : bank.gdual);
    if (!(derived == f)) {
      throw Error(ErrorKind::InvalidFilter,
                  "filter '" + name + "' disagrees with the values derived from h");
    }
  }
  return bank;
}

}  // namespace imra
