#include <doctest.h>
#include <limavg/rational.hpp>

#include <stdexcept>

using namespace limavg;

TEST_SUITE("rational") {

TEST_CASE("parse accepts integer and fraction literals") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("-7/4") == Rational(-7, 4));
  CHECK(parse_rational("0") == Rational(0));
  // canonicalized on the way in
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(to_string(parse_rational("2/4")) == "1/2");
}

TEST_CASE("parse rejects malformed literals") {
  for (const char* bad :
       {"", "+3", "1.5", "a", " 1", "1 ", "1/-2", "1/2/3", "--1", "/2", "3/", "-", "0x1"})
    CHECK_THROWS_AS(parse_rational(bad), std::runtime_error);
  CHECK_THROWS_AS(parse_rational("1/0"), std::runtime_error);
}

TEST_CASE("to_string is canonical") {
  CHECK(to_string(Rational(5)) == "5");
  CHECK(to_string(Rational(-1, 2)) == "-1/2");
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(Rational(0)) == "0");
}

TEST_CASE("bit lengths") {
  CHECK(bit_length(Integer(0)) == 1);
  CHECK(bit_length(Integer(1)) == 1);
  CHECK(bit_length(Integer(-1)) == 1);
  CHECK(bit_length(Integer(255)) == 8);
  CHECK(bit_length(Integer(256)) == 9);
  // sign bit + numerator bits + denominator bits
  CHECK(bit_size(Rational(3, 4)) == 1 + 2 + 3);
  CHECK(bit_size(Rational(0)) == 1 + 1 + 1);
  CHECK(bit_size(Rational(-1)) == 1 + 1 + 1);
}

TEST_CASE("is_integer") {
  CHECK(is_integer(parse_rational("4/2")));
  CHECK(is_integer(Rational(0)));
  CHECK(!is_integer(Rational(1, 2)));
}

TEST_CASE("pow2 covers both signs") {
  CHECK(pow2(0) == Rational(1));
  CHECK(pow2(3) == Rational(8));
  CHECK(pow2(-3) == Rational(1, 8));
  CHECK(pow2(-20) == Rational(1, 1048576));
}

TEST_CASE("ceil_log2_inverse") {
  CHECK(ceil_log2_inverse(Rational(1)) == 0);
  CHECK(ceil_log2_inverse(Rational(1, 2)) == 1);
  CHECK(ceil_log2_inverse(Rational(1, 256)) == 8);
  CHECK(ceil_log2_inverse(Rational(1, 3)) == 2);    // 1/4 <= 1/3 < 1/2
  CHECK(ceil_log2_inverse(Rational(2, 3)) == 1);
  CHECK(ceil_log2_inverse(Rational(3)) == 0);
  CHECK_THROWS_AS(ceil_log2_inverse(Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(ceil_log2_inverse(Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("double conversions are exact on dyadics") {
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(-0.75) == Rational(-3, 4));
  CHECK(rational_from_double(3.0) == Rational(3));
  CHECK(to_double(Rational(1, 4)) == 0.25);
  // 0.1 is not dyadic; the conversion must reproduce the exact double bits
  Rational tenth = rational_from_double(0.1);
  CHECK(to_double(tenth) == 0.1);
  CHECK(tenth != Rational(1, 10));
}

}  // TEST_SUITE
