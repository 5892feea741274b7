#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "symdio/poly.hpp"

namespace symdio {

// Multivariate GCD by the heuristic evaluation/interpolation method
// (GCDHEU, Char-Geddes-Gonnet as refined by Liao and Fateman). Inputs are
// reduced to one large integer by evaluating variables one at a time at a
// point xi; the integer GCD is lifted back by balanced xi-adic expansion and
// accepted only after exact trial division. The GCD is used purely to shrink
// intermediate expressions; callers never rely on it for correctness.

namespace detail {

inline Integer max_norm(const Poly& p) {
  Integer m = 0;
  for (const auto& c : p.raw_coeffs()) {
    Integer a = abs(c.get_num());
    if (a > m) m = a;
  }
  return m;
}

inline Integer isqrt(const Integer& v) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

/// Evaluates variable 0 at xi; the result drops that variable.
inline Poly evaluate_first(const Poly& p, const Integer& xi) {
  const std::size_t n = p.nvars();
  int deg = std::max(p.degree_in(0), 0);
  std::vector<Integer> pw(deg + 1);
  pw[0] = 1;
  for (int k = 1; k <= deg; ++k) pw[k] = pw[k - 1] * xi;
  TermTable<Integer> table(n - 1, p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto e = p.exponents(i);
    Integer& acc = table.slot(e.data() + 1);
    mpz_addmul(acc.get_mpz_t(), p.coeff(i).get_num_mpz_t(), pw[e[0]].get_mpz_t());
  }
  return Poly::from_table(table, [](const Integer& v) { return Rational(v); });
}

/// Balanced xi-adic expansion of the integer coefficients of h, reassembled
/// as a polynomial in a new leading variable. Returns zero when more than
/// max_degree + 1 digits would be needed.
inline Poly interpolate_first(Poly h, const Integer& xi, int max_degree) {
  const std::size_t m = h.nvars();
  const Integer half = xi / 2;
  std::vector<std::pair<ExponentVector, Rational>> terms;
  Exponent power = 0;
  for (const auto& c : h.raw_coeffs())
    if (c.get_den() != 1) return Poly(m + 1);
  while (!h.is_zero()) {
    if (static_cast<int>(power) > max_degree) return Poly(m + 1);
    std::vector<std::pair<ExponentVector, Rational>> digit_terms;
    for (std::size_t i = 0; i < h.size(); ++i) {
      Integer r;
      mpz_fdiv_r(r.get_mpz_t(), h.coeff(i).get_num_mpz_t(), xi.get_mpz_t());
      if (r > half) r -= xi;
      if (r == 0) continue;
      auto e = h.exponents(i);
      digit_terms.emplace_back(ExponentVector(e.begin(), e.end()), Rational(r));
      ExponentVector full(m + 1);
      full[0] = power;
      std::copy(e.begin(), e.end(), full.begin() + 1);
      terms.emplace_back(std::move(full), Rational(r));
    }
    Poly digit = Poly::from_terms(m, digit_terms);
    h = (h - digit).scaled(Rational(1) / Rational(xi));
    power = checked_exponent(static_cast<unsigned long>(power) + 1);
  }
  Poly f = Poly::from_terms(m + 1, terms);
  if (!f.is_zero() && f.leading_coeff() < 0) f = -f;
  return f;
}

inline Integer integer_content(const Poly& p) {
  Integer g = 0;
  for (const auto& c : p.raw_coeffs()) g = symdio::gcd(g, c.get_num());
  return g;
}

struct Cofactors {
  Poly h, cff, cfg;
};

inline constexpr int heu_gcd_max_tries = 6;

/// f, g: nonzero with integer coefficients.
inline std::optional<Cofactors> heugcd(Poly f, Poly g) {
  const std::size_t n = f.nvars();
  Integer common = symdio::gcd(integer_content(f), integer_content(g));
  f = f.scaled(Rational(1) / Rational(common));
  g = g.scaled(Rational(1) / Rational(common));

  if (n == 0) {
    Integer a = f.constant_term().get_num(), b = g.constant_term().get_num();
    Integer h = symdio::gcd(a, b);
    return Cofactors{Poly::constant(0, Rational(h * common)), Poly::constant(0, Rational(a / h)),
                     Poly::constant(0, Rational(b / h))};
  }

  Integer f_norm = max_norm(f), g_norm = max_norm(g);
  Integer bound = 2 * std::min(f_norm, g_norm) + 29;
  Integer xi = std::max<Integer>(
      std::min<Integer>(bound, 99 * isqrt(bound)),
      2 * std::min<Integer>(f_norm / abs(f.leading_coeff().get_num()),
                            g_norm / abs(g.leading_coeff().get_num())) +
          4);

  // A primitive h keeps both cofactors integral.
  auto finish = [&](Poly h, Poly cff, Poly cfg) {
    Rational k = content(h);
    if (h.leading_coeff() < 0) k = -k;
    return Cofactors{h.scaled(Rational(common) / k), cff.scaled(k), cfg.scaled(k)};
  };

  for (int attempt = 0; attempt < heu_gcd_max_tries; ++attempt) {
    Poly ff = evaluate_first(f, xi);
    Poly gg = evaluate_first(g, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto sub = heugcd(ff, gg);
      if (!sub) return std::nullopt;

      const int max_degree = std::min(f.degree_in(0), g.degree_in(0));
      auto primitive_integer = [](Poly p) {
        return p.is_zero() ? p : p.scaled(Rational(1) / Rational(integer_content(p)));
      };
      Poly h = interpolate_first(sub->h, xi, max_degree);
      if (!h.is_zero()) {
        h = primitive_integer(h);
        if (auto cff = try_divide(f, h))
          if (auto cfg = try_divide(g, h)) return finish(h, *cff, *cfg);
      }

      Poly cff = primitive_integer(interpolate_first(sub->cff, xi, f.degree_in(0)));
      if (!cff.is_zero())
        if (auto h2 = try_divide(f, cff))
          if (auto cfg = try_divide(g, *h2)) return finish(*h2, cff, *cfg);

      Poly cfg = primitive_integer(interpolate_first(sub->cfg, xi, g.degree_in(0)));
      if (!cfg.is_zero())
        if (auto h3 = try_divide(g, cfg))
          if (auto cff2 = try_divide(f, *h3)) return finish(*h3, *cff2, cfg);
    }
    xi = 73794 * xi * isqrt(isqrt(xi)) / 27011;
  }
  return std::nullopt;
}

}  // namespace detail

/// Greatest common divisor over the rationals, normalized to integer
/// coefficients with content 1 and a positive leading coefficient.
/// gcd(0, 0) = 0. If the heuristic gives up, the constant 1 is returned:
/// a valid common divisor, just not the greatest one.
inline Poly poly_gcd(const Poly& f, const Poly& g) {
  if (f.nvars() != g.nvars()) throw usage_error("NvarsMismatch", "poly_gcd");
  const std::size_t n = f.nvars();
  if (f.is_zero()) return primitive_part(g);
  if (g.is_zero()) return primitive_part(f);
  auto mf = monomial_content(f), mg = monomial_content(g);
  ExponentVector m(n);
  for (std::size_t v = 0; v < n; ++v) m[v] = std::min(mf[v], mg[v]);
  Poly mono = Poly::monomial(n, m, 1);
  Poly fp = primitive_part(divide_monomial(f, mf));
  Poly gp = primitive_part(divide_monomial(g, mg));
  if (fp.is_constant() || gp.is_constant()) return mono;
  if (fp == gp) return mono * fp;
  auto res = detail::heugcd(fp, gp);
  if (!res) return mono;
  return mono * primitive_part(res->h);
}

inline Poly poly_gcd(std::span<const Poly> polys) {
  if (polys.empty()) throw usage_error("EmptyInput", "poly_gcd of nothing");
  Poly g = polys[0];
  for (std::size_t i = 1; i < polys.size() && !g.is_constant(); ++i) g = poly_gcd(g, polys[i]);
  return g.is_constant() && !g.is_zero() ? Poly::constant(g.nvars(), 1) : primitive_part(g);
}

/// Least common multiple up to a rational unit (primitive, positive lead).
inline Poly poly_lcm(const Poly& f, const Poly& g) {
  if (f.is_zero() || g.is_zero()) return Poly(f.nvars());
  Poly d = poly_gcd(f, g);
  return primitive_part(exact_divide(primitive_part(f), d) * primitive_part(g));
}

/// Numerators of a tuple scaled by the multiplier mult_num / mult_den:
/// numerators[i] = (fraction i) * mult_num / mult_den.
struct ClearedTuple {
  std::vector<Poly> numerators;
  Poly mult_num, mult_den;
};

/// Brings a tuple of fractions to a common denominator, then removes the
/// common polynomial factor (monomial content included) and the common
/// rational content. The multiplier is reported so callers working with
/// forms that are not homogeneous can undo it.
inline ClearedTuple clear_denominators_tracked(
    const std::vector<std::pair<Poly, Poly>>& fractions) {
  if (fractions.empty()) return {};
  const std::size_t n = fractions[0].first.nvars();
  Poly L = Poly::constant(n, 1);
  std::vector<Poly> seen;
  for (const auto& [num, den] : fractions) {
    if (num.nvars() != n || den.nvars() != n)
      throw usage_error("NvarsMismatch", "clear_denominators");
    if (den.is_zero()) throw math_error("DivisionByZero", "a denominator is identically zero");
    Poly pd = primitive_part(den);
    if (std::find(seen.begin(), seen.end(), pd) != seen.end()) continue;
    seen.push_back(pd);
    L = poly_lcm(L, pd);
  }
  std::vector<Poly> nums;
  nums.reserve(fractions.size());
  for (const auto& [num, den] : fractions) nums.push_back(num * exact_divide(L, den));

  std::vector<Poly> nonzero;
  for (const auto& x : nums)
    if (!x.is_zero()) nonzero.push_back(x);
  ClearedTuple out{std::move(nums), L, Poly::constant(n, 1)};
  if (nonzero.empty()) return out;

  Poly g = poly_gcd(std::span<const Poly>(nonzero));
  Integer cg = 0, cl = 1;
  if (!g.is_constant()) {
    for (auto& x : out.numerators) x = exact_divide(x, g);
  }
  for (const auto& x : out.numerators)
    for (const auto& c : x.raw_coeffs()) {
      cg = gcd(cg, c.get_num());
      cl = lcm(cl, c.get_den());
    }
  Rational scale = make_rational(cl, cg);
  for (auto& x : out.numerators) x = x.scaled(scale);
  // Multiplier L * scale / g, with the common part of L and g cancelled.
  Poly h = g.is_constant() ? Poly::constant(n, 1) : poly_gcd(L, g);
  out.mult_num = exact_divide(L, h).scaled(scale);
  out.mult_den = exact_divide(g, h);
  return out;
}

/// Polynomial tuple proportional to the fractions; valid for zeros of a
/// homogeneous form of degree n wherever the denominators do not vanish.
inline std::vector<Poly> clear_denominators(const std::vector<std::pair<Poly, Poly>>& fractions,
                                            int n) {
  if (n < 1) throw usage_error("BadDegree", "clear_denominators needs a positive degree");
  return clear_denominators_tracked(fractions).numerators;
}

}  // namespace symdio
