#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "symdio/error.hpp"

namespace symdio {

using Integer = mpz_class;

// mpq_class keeps the canonical form (positive denominator, reduced, 0 = 0/1)
// as long as every value goes through canonicalize() after a raw set.
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw math_error("ZeroDenominator", "rational with denominator 0");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "num/den" with the denominator always present; the interchange format.
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Human-facing form: "3", "-5/2".
inline std::string to_display(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace detail

/// Accepts "n", "n/d" and "-n/d" with decimal digits only.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                         : text.substr(slash + 1);
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den) ||
      den[0] == '-' || den[0] == '+')
    throw usage_error("BadRational", "cannot parse rational '" + std::string(text) + "'");
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  return make_rational(Integer(n, 10), Integer(std::string(den), 10));
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace symdio
