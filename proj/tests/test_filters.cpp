#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "imra/error.hpp"
#include "imra/filters.hpp"

using namespace imra;
using boost::multiprecision::cpp_rational;

namespace {

// Neville's scheme evaluated at x = 0 for data that is 1 at one node and 0 at
// the others; independent of the product formula used by the library.
cpp_rational neville_at_zero(const std::vector<int>& nodes, std::size_t hot) {
  std::vector<cpp_rational> p(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) p[i] = i == hot ? 1 : 0;
  for (std::size_t m = 1; m < nodes.size(); ++m) {
    for (std::size_t i = 0; i + m < nodes.size(); ++i) {
      const cpp_rational xi = nodes[i];
      const cpp_rational xj = nodes[i + m];
      p[i] = ((0 - xj) * p[i] + (xi - 0) * p[i + 1]) / (xi - xj);
    }
  }
  return p[0];
}

cpp_rational as_rational(const Dyadic& d) {
  cpp_rational num = 0;
  // numerator fits comfortably in 64 bits for the orders under test
  num = cpp_rational(static_cast<long long>(d.numerator()));
  return num / cpp_rational(boost::multiprecision::cpp_int(1) << d.exponent());
}

}  // namespace

TEST_CASE("DD masks match a Neville interpolation oracle") {
  for (int order = 1; order <= 8; ++order) {
    CAPTURE(order);
    std::vector<int> nodes;
    for (int j = -order + 1; j <= order; ++j) nodes.push_back(2 * j - 1);
    const IndexedFilter h = dd_scaling_filter(order);
    CHECK(h.at(0) == Dyadic(1));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      CHECK(as_rational(h.at(nodes[i])) == neville_at_zero(nodes, i));
    }
    for (int k = 2; k <= 2 * order + 2; k += 2) {
      CHECK(h.at(k).is_zero());
      CHECK(h.at(-k).is_zero());
    }
    CHECK(h.lo() == -(2 * order - 1));
    CHECK(h.hi() == 2 * order - 1);
    CHECK(h.sum() == Dyadic(2));
  }
}

TEST_CASE("known low-order masks") {
  const IndexedFilter h1 = dd_scaling_filter(1);
  CHECK(h1.at(-1) == Dyadic::parse("1/2"));
  CHECK(h1.at(1) == Dyadic::parse("1/2"));

  const IndexedFilter h2 = dd_scaling_filter(2);
  CHECK(h2.at(1) == Dyadic::parse("9/16"));
  CHECK(h2.at(-3) == Dyadic::parse("-1/16"));

  const IndexedFilter h3 = dd_scaling_filter(3);
  CHECK(h3.at(-1) == Dyadic::parse("150/256"));
  CHECK(h3.at(3) == Dyadic::parse("-25/256"));
  CHECK(h3.at(-5) == Dyadic::parse("3/256"));
}

TEST_CASE("derived filters") {
  const FilterBank b1 = derive_bank(dd_scaling_filter(1), 1);
  CHECK(b1.g == IndexedFilter::delta(1));
  CHECK(b1.hdual == IndexedFilter::delta(0));
  CHECK(b1.gdual.at(0) == Dyadic::parse("-1/2"));
  CHECK(b1.gdual.at(1) == Dyadic(1));
  CHECK(b1.gdual.at(2) == Dyadic::parse("-1/2"));
  CHECK(b1.gdual.size() == 3);

  const FilterBank b2 = derive_bank(dd_scaling_filter(2), 2);
  CHECK(b2.gdual.at(-2) == Dyadic::parse("1/16"));
  CHECK(b2.gdual.at(0) == Dyadic::parse("-9/16"));
  CHECK(b2.gdual.at(1) == Dyadic(1));
  CHECK(b2.gdual.at(2) == Dyadic::parse("-9/16"));
  CHECK(b2.gdual.at(4) == Dyadic::parse("1/16"));
  CHECK(b2.gdual.at(3).is_zero());
  CHECK(b2.id() == "dd2");
}

TEST_CASE("order range") {
  CHECK_THROWS_AS(dd_scaling_filter(0), Error);
  CHECK_THROWS_AS(dd_scaling_filter(kMaxOrder + 1), Error);
  CHECK_NOTHROW(dd_scaling_filter(kMaxOrder));
}

TEST_CASE("custom mask validation") {
  CHECK(custom_bank_validate(dd_scaling_filter(2)).ok());

  IndexedFilter with_even(-1, {Dyadic::parse("1/2"), Dyadic(1), Dyadic::parse("1/2"),
                               Dyadic::from_double(0.1)});
  const ValidationReport even = custom_bank_validate(with_even);
  CHECK_FALSE(even.ok());
  const ValidationCheck* c = even.find("even-index");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->passed);
  CHECK(c->detail.find("index 2") != std::string::npos);

  const IndexedFilter h2 = dd_scaling_filter(2);
  std::vector<Dyadic> scaled;
  for (const Dyadic& v : h2.coeffs()) scaled.push_back(v * Dyadic::from_double(0.9));
  const ValidationReport sum = custom_bank_validate(IndexedFilter(-3, scaled));
  CHECK_FALSE(sum.ok());
  REQUIRE(sum.find("sum") != nullptr);
  CHECK_FALSE(sum.find("sum")->passed);

  CHECK_THROWS_AS(derive_bank(with_even), Error);
}

TEST_CASE("text format round trip") {
  const FilterBank b = derive_bank(dd_scaling_filter(3), 3);
  const std::string text = format_bank(b);
  CHECK(text.rfind("h -5:3/256 ", 0) == 0);
  const FilterBank back = parse_bank(text);
  CHECK(back.h == b.h);
  CHECK(back.gdual == b.gdual);
  CHECK_THROWS_AS(parse_bank("g 1:1\n"), Error);
  CHECK_THROWS_AS(parse_bank("h -1:1/2 0:1 1:1/2\ngd 0:1\n"), Error);
}
