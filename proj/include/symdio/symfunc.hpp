#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "symdio/poly.hpp"

namespace symdio {

enum class GenKind { p, q };

/// A power-sum generator p_k = sum x_i^k or a signed one
/// q_k = x_1^k - x_2^k + x_3^k - ...
struct Generator {
  GenKind kind = GenKind::p;
  unsigned k = 1;
  friend bool operator==(const Generator&, const Generator&) = default;
};

/// The generator over the first N variables of an ambient of `ambient` variables.
inline Poly generator(GenKind kind, unsigned k, std::size_t N, std::size_t ambient) {
  if (k == 0) throw usage_error("BadGenerator", "generator degree must be at least 1");
  if (kind == GenKind::q && N % 2 != 0)
    throw math_error("OddVariableCount", "signed power sum needs an even variable count");
  if (N > ambient) throw usage_error("VariableOutOfRange", "generator exceeds ambient");
  std::vector<std::pair<ExponentVector, Rational>> terms;
  for (std::size_t i = 0; i < N; ++i) {
    ExponentVector e(ambient, 0);
    e[i] = detail::checked_exponent(k);
    terms.emplace_back(std::move(e), kind == GenKind::q && i % 2 == 1 ? Rational(-1) : Rational(1));
  }
  return Poly::from_terms(ambient, terms);
}

inline Poly generator(GenKind kind, unsigned k, std::size_t N) { return generator(kind, k, N, N); }

/// e_k in N variables.
inline Poly elementary_symmetric(unsigned k, std::size_t N) {
  if (k > N) return Poly(N);
  std::vector<std::pair<ExponentVector, Rational>> terms;
  std::vector<bool> pick(N, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    ExponentVector e(N, 0);
    for (std::size_t i = 0; i < N; ++i) e[i] = pick[i] ? 1 : 0;
    terms.emplace_back(std::move(e), Rational(1));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return Poly::from_terms(N, terms);
}

/// Fixed by (x1 x2) and by (x1 x2 ... xN), which together generate S_N.
/// Variables beyond the first N are left alone.
inline bool is_symmetric(const Poly& p, std::size_t N) {
  if (N > p.nvars()) throw usage_error("VariableOutOfRange", "is_symmetric: N exceeds ambient");
  if (N <= 1) return true;
  std::vector<std::size_t> swap(p.nvars()), cycle(p.nvars());
  std::iota(swap.begin(), swap.end(), 0);
  std::iota(cycle.begin(), cycle.end(), 0);
  std::swap(swap[0], swap[1]);
  for (std::size_t i = 0; i < N; ++i) cycle[i] = (i + 1) % N;
  return permute_vars(p, swap) == p && permute_vars(p, cycle) == p;
}

/// A homogeneous form in x1..xN with its symmetry status recorded.
struct SymmetricForm {
  Poly poly;
  std::size_t nvars = 0;
  int degree = 0;
  bool symmetry_checked = false;

  /// Checks homogeneity; runs the symmetry test and records the outcome.
  static SymmetricForm make(Poly p) {
    if (!is_homogeneous(p)) throw usage_error("NotHomogeneous", "form is not homogeneous");
    SymmetricForm f;
    f.nvars = p.nvars();
    f.degree = std::max(p.total_degree(), 0);
    f.symmetry_checked = is_symmetric(p, p.nvars());
    f.poly = std::move(p);
    return f;
  }

  /// As make(), but rejects non-symmetric input.
  static SymmetricForm make_symmetric(Poly p) {
    auto f = make(std::move(p));
    if (!f.symmetry_checked) throw math_error("NotSymmetric", "form is not symmetric");
    return f;
  }
};

/// A form written as a polynomial in generators; variable i of `expr`
/// stands for gens[i].
struct PowerSumExpr {
  std::vector<Generator> gens;
  Poly expr;

  int weighted_degree_of_term(std::size_t i) const {
    auto e = expr.exponents(i);
    int d = 0;
    for (std::size_t g = 0; g < gens.size(); ++g) d += static_cast<int>(gens[g].k) * e[g];
    return d;
  }

  /// Substitutes the generators over the first N of `ambient` variables.
  Poly expand(std::size_t N, std::size_t ambient) const {
    std::vector<Poly> images;
    images.reserve(gens.size());
    for (const auto& g : gens) images.push_back(generator(g.kind, g.k, N, ambient));
    if (gens.empty()) return Poly::constant(ambient, expr.constant_term());
    return compose(expr, images);
  }

  Poly expand(std::size_t N) const { return expand(N, N); }
};

namespace detail {

using Partition = std::vector<unsigned>;  // non-increasing, positive parts

inline Partition sorted_partition(std::span<const Exponent> e) {
  Partition lam;
  for (auto x : e)
    if (x) lam.push_back(x);
  std::sort(lam.rbegin(), lam.rend());
  return lam;
}

inline Integer multiplicity_factorial(const Partition& lam) {
  Integer r = 1;
  std::size_t i = 0;
  while (i < lam.size()) {
    std::size_t j = i;
    while (j < lam.size() && lam[j] == lam[i]) ++j;
    for (std::size_t m = 2; m <= j - i; ++m) r *= static_cast<unsigned long>(m);
    i = j;
  }
  return r;
}

/// Coefficients of p_lambda in the monomial symmetric basis:
/// [m_mu] p_lambda = sum over set partitions of the parts of lambda whose
/// block sums form mu, weighted by prod mult_mu(v)!.
inline std::map<Partition, Integer> power_sum_in_monomial_basis(const Partition& lam) {
  std::map<Partition, Integer> out;
  std::vector<unsigned> blocks;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == lam.size()) {
      Partition mu(blocks.begin(), blocks.end());
      std::sort(mu.rbegin(), mu.rend());
      out[mu] += 1;
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      blocks[b] += lam[i];
      rec(i + 1);
      blocks[b] -= lam[i];
    }
    blocks.push_back(lam[i]);
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
  for (auto& [mu, count] : out) count *= multiplicity_factorial(mu);
  return out;
}

}  // namespace detail

/// Rewrites a symmetric form in p_1..p_n (n = degree). Works on the
/// coefficients of sorted monomials, which determine a symmetric form.
inline PowerSumExpr decompose_power_sums(const SymmetricForm& f) {
  if (!f.symmetry_checked) throw math_error("NotSymmetric", "decomposition needs a symmetric form");
  const unsigned n = static_cast<unsigned>(f.degree);
  if (n > f.nvars)
    throw math_error("DegreeExceedsVars", "degree " + std::to_string(n) + " exceeds " +
                                              std::to_string(f.nvars) + " variables");
  PowerSumExpr out;
  for (unsigned k = 1; k <= std::max(n, 1u); ++k) out.gens.push_back({GenKind::p, k});
  const std::size_t ngens = out.gens.size();
  if (f.poly.is_zero()) {
    out.expr = Poly(ngens);
    return out;
  }
  if (n == 0) {
    out.expr = Poly::constant(ngens, f.poly.constant_term());
    return out;
  }

  std::map<detail::Partition, Rational> rem;
  for (std::size_t i = 0; i < f.poly.size(); ++i) {
    auto e = f.poly.exponents(i);
    if (std::is_sorted(e.rbegin(), e.rend())) rem[detail::sorted_partition(e)] = f.poly.coeff(i);
  }

  std::vector<std::pair<ExponentVector, Rational>> terms;
  while (!rem.empty()) {
    auto it = std::max_element(rem.begin(), rem.end(), [](const auto& x, const auto& y) {
      return x.first.size() < y.first.size();
    });
    detail::Partition lam = it->first;
    auto expansion = detail::power_sum_in_monomial_basis(lam);
    Rational c = it->second / Rational(expansion.at(lam));
    ExponentVector e(ngens, 0);
    for (auto part : lam) ++e[part - 1];
    terms.emplace_back(std::move(e), c);
    for (const auto& [mu, coef] : expansion) {
      auto& r = rem[mu];
      r -= c * Rational(coef);
      if (r == 0) rem.erase(mu);
    }
  }
  out.expr = Poly::from_terms(ngens, terms);
  return out;
}

struct QuinticCanonical {
  Rational A1, A2;
};

/// Coefficients of p5 and p3*p2 once p1 is set to zero.
inline QuinticCanonical quintic_canonical(const SymmetricForm& f) {
  if (f.nvars != 6 || f.degree != 5)
    throw usage_error("NotSextenaryQuintic", "canonical form needs a quintic in 6 variables");
  auto ps = decompose_power_sums(f);
  return {ps.expr.coefficient_of(ExponentVector{0, 0, 0, 0, 1}),
          ps.expr.coefficient_of(ExponentVector{0, 1, 1, 0, 0})};
}

/// (a_1, -a_1, ..., a_{M-1}, -a_{M-1}, 1, -1) placed through a permutation:
/// entries[permutation[i]] is the i-th pattern slot.
template <class T>
struct PrimitivePoint {
  std::size_t nvars = 0;
  std::vector<T> entries;
  std::vector<std::size_t> permutation;
};

namespace detail {

inline Rational unit_like(const Rational&, int v) { return Rational(v); }
inline Poly unit_like(const Poly& sample, int v) { return Poly::constant(sample.nvars(), v); }

}  // namespace detail

template <class T>
PrimitivePoint<T> primitive_point(std::size_t N, const std::vector<T>& values,
                                  std::vector<std::size_t> perm = {}) {
  if (N % 2 != 0) throw math_error("OddVariableCount", "primitive point needs even N");
  if (N < 2) throw usage_error("WrongValueCount", "primitive point needs N >= 2");
  if (values.size() != N / 2 - 1)
    throw usage_error("WrongValueCount", "expected " + std::to_string(N / 2 - 1) + " values");
  if (perm.empty()) {
    perm.resize(N);
    std::iota(perm.begin(), perm.end(), 0);
  }
  if (perm.size() != N) throw usage_error("LengthMismatch", "permutation length");
  std::vector<bool> seen(N, false);
  for (auto i : perm) {
    if (i >= N || seen[i]) throw usage_error("BadPermutation", "not a permutation");
    seen[i] = true;
  }
  T proto = values.empty() ? T{} : values[0];
  std::vector<T> pattern;
  for (const auto& v : values) {
    pattern.push_back(v);
    pattern.push_back(-v);
  }
  pattern.push_back(detail::unit_like(proto, 1));
  pattern.push_back(detail::unit_like(proto, -1));
  PrimitivePoint<T> pt{N, std::vector<T>(N), perm};
  for (std::size_t i = 0; i < N; ++i) pt.entries[perm[i]] = pattern[i];
  return pt;
}

/// f at the point; zero for every symmetric form of odd degree.
inline Rational verify_vanishing(const Poly& f, const PrimitivePoint<Rational>& pt) {
  return evaluate(f, pt.entries);
}

inline Poly verify_vanishing(const Poly& f, const PrimitivePoint<Poly>& pt) {
  return compose(f, pt.entries);
}

}  // namespace symdio
