#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace imra {

/// Exact dyadic rational num / 2^exp.
///
/// The representation is canonical: exp >= 0, and when exp > 0 the numerator
/// is odd. Arithmetic is checked; any result that does not fit the 128-bit
/// numerator (or needs a denominator above 2^126) throws Error(Overflow).
class Dyadic {
 public:
  using Int = __int128;

  constexpr Dyadic() = default;
  Dyadic(std::int64_t value) : num_(value) {}  // NOLINT(implicit)

  /// num / 2^exp for any exp (negative exp multiplies).
  static Dyadic from_parts(Int num, int exp);

  Int numerator() const noexcept { return num_; }
  int exponent() const noexcept { return exp_; }
  Int denominator() const noexcept { return Int{1} << exp_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return exp_ == 0; }
  int sign() const noexcept { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  /// Correctly rounded binary64 value.
  double to_double() const noexcept;

  /// Floor of the value as an integer (throws on overflow of int64).
  std::int64_t floor() const;

  /// value * 2^k, exact.
  Dyadic times_pow2(int k) const;

  Dyadic abs() const;

  /// `num/den` with den a power of two, or just `num` for integers.
  std::string to_string() const;

  /// Accepts `num`, `num/den` (den must be a power of two) and plain decimal
  /// literals with a finite binary expansion such as `0.375`.
  static Dyadic parse(std::string_view text);

  /// Exact conversion of a binary64 value (every finite double is dyadic).
  static Dyadic from_double(double value);

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const;

  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) noexcept {
    return a.num_ == b.num_ && a.exp_ == b.exp_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  Dyadic(Int num, int exp, int /*raw*/) : num_(num), exp_(exp) {}
  void normalize();

  Int num_ = 0;
  int exp_ = 0;
};

/// Decimal rendering of a 128-bit integer.
std::string int128_to_string(__int128 value);

}  // namespace imra
