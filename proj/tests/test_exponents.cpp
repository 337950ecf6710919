#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "newmc/exponents.hpp"

using namespace newmc;

TEST_CASE("sup-norm exponents") {
  const Rational z(0), one(1), half(1, 2);
  CHECK(supnormExponent(z, one, half) == Rational(5, 12));
  CHECK(depthExponent(z, one, half) == Rational(5, 24));
  CHECK(supnormExponent(z, one, z) == half);
  CHECK(depthExponent(z, one, z) == Rational(1, 4));
  CHECK(depthExponent(z, one, one) == Rational(1, 6));
  for (i64 num = 0; num <= 12; ++num) {
    const Rational g(num, 12);
    CHECK(supnormExponent(g, one - g, one) == Rational(1, 3));
  }
  CHECK_THROWS_AS(supnormExponent(half, one, z), std::invalid_argument);
  CHECK_THROWS_AS(depthExponent(Rational(-1, 3), one, one), std::invalid_argument);
  CHECK(to_string(Rational(5, 12)) == "5/12");
  CHECK(to_string(Rational(2)) == "2");
}

TEST_CASE("filtration schedules") {
  const auto s = filtrationSchedule({{3, 4}}, 0, Rational(1, 2));
  CHECK(s.eta.at(3) == std::vector<Rational>{0, Rational(1, 8), Rational(1, 4), Rational(3, 8), Rational(1, 2)});
  CHECK(s.amplifier == Rational(1, 6));
  const auto c = filtrationSchedule({{5, 3}}, Rational(1, 3), Rational(1, 3));
  CHECK(c.eta.at(5) == std::vector<Rational>(4, Rational(1, 3)));
  const auto two = filtrationSchedule({{3, 4}, {7, 2}}, 0, 1);
  CHECK(two.product_size() == 15);
  i64 direct = 0;
  for (std::size_t u = 0; u < two.eta.at(3).size(); ++u)
    for (std::size_t v = 0; v < two.eta.at(7).size(); ++v) ++direct;
  CHECK(two.product_size() == direct);
  CHECK(two.eta.at(7).front() == Rational(0));
  CHECK(two.eta.at(7).back() == Rational(1));
  CHECK_THROWS_AS(filtrationSchedule({{3, 0}}, 0, 1), std::invalid_argument);
}

TEST_CASE("filtration levels") {
  CHECK(filtrationLevel(4, 0) == 0);
  CHECK(filtrationLevel(4, Rational(1, 2)) == 1);
  CHECK(filtrationLevel(9, Rational(1, 2)) == 2);
  CHECK(filtrationLevel(10, Rational(2, 5)) == 2);
  CHECK_THROWS_AS(filtrationLevel(4, Rational(3, 4)), std::invalid_argument);
}
