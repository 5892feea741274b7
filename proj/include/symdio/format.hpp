#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "symdio/poly.hpp"

namespace symdio {

/// Plain text: "x1^5 - 3/2*a^2*b + 7". Reads back through parse_poly.
inline std::string to_text(const Poly& p, const std::vector<std::string>& names) {
  if (names.size() != p.nvars()) throw usage_error("LengthMismatch", "one name per variable");
  if (p.is_zero()) return "0";
  std::ostringstream out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Rational c = p.coeff(i);
    bool negative = c < 0;
    if (negative) c = -c;
    if (i == 0)
      out << (negative ? "-" : "");
    else
      out << (negative ? " - " : " + ");
    auto e = p.exponents(i);
    bool has_monomial = std::any_of(e.begin(), e.end(), [](Exponent x) { return x != 0; });
    bool first = true;
    if (c != 1 || !has_monomial) {
      out << to_display(c);
      first = false;
    }
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (!e[v]) continue;
      if (!first) out << "*";
      out << names[v];
      if (e[v] > 1) out << "^" << e[v];
      first = false;
    }
  }
  return out.str();
}

namespace detail {

// "c12" -> "c_{12}", "a" -> "a".
inline std::string latex_name(const std::string& name) {
  std::size_t k = name.size();
  while (k > 0 && std::isdigit(static_cast<unsigned char>(name[k - 1]))) --k;
  if (k == name.size() || k == 0) return name;
  return name.substr(0, k) + "_{" + name.substr(k) + "}";
}

}  // namespace detail

inline std::string to_latex(const Poly& p, const std::vector<std::string>& names) {
  if (names.size() != p.nvars()) throw usage_error("LengthMismatch", "one name per variable");
  if (p.is_zero()) return "0";
  std::ostringstream out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Rational c = p.coeff(i);
    bool negative = c < 0;
    if (negative) c = -c;
    if (i == 0)
      out << (negative ? "-" : "");
    else
      out << (negative ? " - " : " + ");
    auto e = p.exponents(i);
    bool has_monomial = std::any_of(e.begin(), e.end(), [](Exponent x) { return x != 0; });
    if (c != 1 || !has_monomial) {
      if (c.get_den() == 1)
        out << c.get_num().get_str();
      else
        out << "\\frac{" << c.get_num().get_str() << "}{" << c.get_den().get_str() << "}";
      if (has_monomial) out << " ";
    }
    bool first = true;
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (!e[v]) continue;
      if (!first) out << " ";
      out << detail::latex_name(names[v]);
      if (e[v] > 1) out << "^{" << e[v] << "}";
      first = false;
    }
  }
  return out.str();
}

/// Leading term only, for error reports on huge residuals.
inline std::string leading_term_text(const Poly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  Poly lead = Poly::monomial(p.nvars(), p.exponents(0), p.coeff(0));
  return to_text(lead, names);
}

}  // namespace symdio
