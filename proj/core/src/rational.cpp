#include "limavg/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace limavg {

namespace {

bool is_digits(const std::string& s, size_t from, size_t to) {
  if (from >= to) return false;
  for (size_t i = from; i < to; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  size_t start = 0;
  if (!text.empty() && text[0] == '-') start = 1;
  size_t slash = text.find('/');
  bool ok;
  if (slash == std::string::npos) {
    ok = is_digits(text, start, text.size());
  } else {
    ok = is_digits(text, start, slash) && is_digits(text, slash + 1, text.size());
  }
  if (!ok) throw std::runtime_error("malformed rational literal: '" + text + "'");

  Rational q;
  if (q.set_str(text, 10) != 0)
    throw std::runtime_error("malformed rational literal: '" + text + "'");
  if (q.get_den() == 0)
    throw std::runtime_error("zero denominator in rational literal: '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

long bit_length(const Integer& z) {
  return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

long bit_size(const Rational& q) {
  return 1 + bit_length(q.get_num()) + bit_length(q.get_den());
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  Rational q(p);
  if (e < 0) q = 1 / q;
  return q;
}

long ceil_log2_inverse(const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("ceil_log2_inverse: eps must be positive");
  if (eps >= 1) return 0;
  // least i with 2^i >= den/num, i.e. 2^i >= ceil(den/num)
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), eps.get_den().get_mpz_t(), eps.get_num().get_mpz_t());
  if (c <= 1) return 0;
  Integer cm1 = c - 1;
  return bit_length(cm1);
}

Rational rational_from_double(double d) {
  Rational q(d);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace limavg
