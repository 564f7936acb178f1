#include "imra/dyadic.hpp"

#include <cmath>
#include <limits>

#include "imra/error.hpp"

namespace imra {

namespace {

using Int = Dyadic::Int;
using UInt = unsigned __int128;

constexpr int kMaxExponent = 126;

[[noreturn]] void overflow(const char* op) {
  throw Error(ErrorKind::Overflow,
              std::string("dyadic arithmetic overflow in ") + op);
}

Int shift_left(Int n, int k) {
  if (n == 0 || k == 0) return n;
  if (k >= kMaxExponent) overflow("shift");
  const Int limit = Int{1} << (kMaxExponent - k);
  if (n >= limit || n < -limit) overflow("shift");
  return n * (Int{1} << k);
}

int trailing_zeros(Int n) {
  UInt u = n < 0 ? UInt(-n) : UInt(n);
  const auto lo = static_cast<std::uint64_t>(u);
  if (lo != 0) return __builtin_ctzll(lo);
  return 64 + __builtin_ctzll(static_cast<std::uint64_t>(u >> 64));
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::OrderUnsupported: return "order-unsupported";
    case ErrorKind::InvalidFilter: return "invalid-interpolating-filter";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::LevelTooDeep: return "level-too-deep";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::Format: return "format";
    case ErrorKind::Truncated: return "truncated";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Dyadic Dyadic::from_parts(Int num, int exp) {
  Dyadic d(num, exp, 0);
  d.normalize();
  return d;
}

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  if (exp_ < 0) {
    num_ = shift_left(num_, -exp_);
    exp_ = 0;
    return;
  }
  const int tz = std::min(trailing_zeros(num_), exp_);
  num_ >>= tz;
  exp_ -= tz;
  if (exp_ > kMaxExponent) overflow("normalize");
}

double Dyadic::to_double() const noexcept {
  return std::ldexp(static_cast<double>(num_), -exp_);
}

std::int64_t Dyadic::floor() const {
  const Int f = num_ >> exp_;
  if (f > std::numeric_limits<std::int64_t>::max() ||
      f < std::numeric_limits<std::int64_t>::min()) {
    overflow("floor");
  }
  return static_cast<std::int64_t>(f);
}

Dyadic Dyadic::times_pow2(int k) const {
  return from_parts(num_, exp_ - k);
}

Dyadic Dyadic::abs() const { return num_ < 0 ? -*this : *this; }

Dyadic Dyadic::operator-() const {
  if (num_ == std::numeric_limits<Int>::min()) overflow("negate");
  return Dyadic(-num_, exp_, 0);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  const Int x = shift_left(a.num_, e - a.exp_);
  const Int y = shift_left(b.num_, e - b.exp_);
  Int sum;
  if (__builtin_add_overflow(x, y, &sum)) overflow("add");
  return Dyadic::from_parts(sum, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  Int prod;
  if (__builtin_mul_overflow(a.num_, b.num_, &prod)) overflow("multiply");
  return Dyadic::from_parts(prod, a.exp_ + b.exp_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  if (a.sign() != b.sign()) return a.sign() <=> b.sign();
  return (a - b).sign() <=> 0;
}

std::string int128_to_string(__int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  UInt u = negative ? UInt(0) - UInt(value) : UInt(value);
  std::string digits;
  while (u != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (negative) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return int128_to_string(num_);
  return int128_to_string(num_) + "/" + int128_to_string(denominator());
}

namespace {

Int parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw Error(ErrorKind::Format, "malformed rational '" + std::string(whole) + "'");
  }
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) {
    throw Error(ErrorKind::Format, "malformed rational '" + std::string(whole) + "'");
  }
  Int value = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      throw Error(ErrorKind::Format, "malformed rational '" + std::string(whole) + "'");
    }
    if (__builtin_mul_overflow(value, Int{10}, &value) ||
        __builtin_add_overflow(value, Int{c - '0'}, &value)) {
      overflow("parse");
    }
  }
  return negative ? -value : value;
}

}  // namespace

Dyadic Dyadic::parse(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Int num = parse_integer(text.substr(0, slash), text);
    const Int den = parse_integer(text.substr(slash + 1), text);
    if (den <= 0 || (den & (den - 1)) != 0) {
      throw Error(ErrorKind::Format,
                  "denominator of '" + std::string(text) + "' is not a power of two");
    }
    return from_parts(num, trailing_zeros(den));
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    // a decimal with k fraction digits is dyadic iff its scaled integer is
    // divisible by 5^k
    std::string digits(text.substr(0, dot));
    const std::string_view frac = text.substr(dot + 1);
    digits += frac;
    Int scaled = parse_integer(digits, text);
    for (std::size_t k = 0; k < frac.size(); ++k) {
      if (scaled % 5 != 0) {
        throw Error(ErrorKind::Format,
                    "'" + std::string(text) + "' is not a dyadic rational");
      }
      scaled /= 5;
    }
    return from_parts(scaled, static_cast<int>(frac.size()));
  }
  return from_parts(parse_integer(text, text), 0);
}

Dyadic Dyadic::from_double(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NonFinite, "cannot convert a non-finite value to a dyadic rational");
  }
  if (value == 0.0) return Dyadic{};
  int e = 0;
  const double m = std::frexp(value, &e);  // value = m * 2^e, 0.5 <= |m| < 1
  const auto mantissa = static_cast<std::int64_t>(std::ldexp(m, 53));
  return from_parts(mantissa, 53 - e);
}

}  // namespace imra
