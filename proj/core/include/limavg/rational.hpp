#pragma once

#include <gmpxx.h>

#include <string>

namespace limavg {

// All game data and solver outputs are exact rationals; GMP does the heavy
// lifting. mpq_class keeps values canonical (coprime, positive denominator)
// through arithmetic.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "3", "-3", "1/2", "-7/4". No whitespace, no '+' sign, denominator
// must be a positive integer literal. Throws std::runtime_error otherwise.
Rational parse_rational(const std::string& text);

// Canonical text form: "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& q);

// Bit length of |z|; 0 counts as one bit.
long bit_length(const Integer& z);

// Storage cost of a rational: one sign bit plus the bit lengths of numerator
// and denominator.
long bit_size(const Rational& q);

bool is_integer(const Rational& q);

// 2^e for any integer e (negative exponents give 1/2^|e|).
Rational pow2(long e);

// Least i >= 0 with 2^-i <= eps, i.e. ceil(log2(1/eps)). Requires eps > 0.
long ceil_log2_inverse(const Rational& eps);

// Exact conversion; doubles are dyadic rationals.
Rational rational_from_double(double d);

double to_double(const Rational& q);

}  // namespace limavg
