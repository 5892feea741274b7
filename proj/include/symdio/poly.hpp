#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symdio/error.hpp"
#include "symdio/rational.hpp"

namespace symdio {

using Exponent = std::uint16_t;
using ExponentVector = std::vector<Exponent>;

namespace detail {

// Graded lexicographic order: total degree first, then the exponent of x1,
// then x2, and so on.
inline int grlex_compare(const Exponent* a, const Exponent* b, std::size_t n) {
  unsigned long da = 0, db = 0;
  for (std::size_t i = 0; i < n; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

inline std::uint64_t hash_exponents(const Exponent* e, std::size_t n) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= e[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return h ^ (h >> 29);
}

/// Open-addressing accumulator from exponent vectors to values.
template <class Value>
class TermTable {
 public:
  explicit TermTable(std::size_t nvars, std::size_t expected = 16) : nvars_(nvars) {
    std::size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    index_.assign(cap, 0);
    mask_ = cap - 1;
    exps_.reserve(expected * nvars_);
    values_.reserve(expected);
  }

  Value& slot(const Exponent* e) {
    if ((values_.size() + 1) * 2 > index_.size()) grow();
    std::size_t pos = hash_exponents(e, nvars_) & mask_;
    while (true) {
      std::uint32_t idx = index_[pos];
      if (idx == 0) {
        index_[pos] = static_cast<std::uint32_t>(values_.size() + 1);
        exps_.insert(exps_.end(), e, e + nvars_);
        values_.emplace_back();
        return values_.back();
      }
      if (std::equal(e, e + nvars_, exps_.data() + (idx - 1) * nvars_))
        return values_[idx - 1];
      pos = (pos + 1) & mask_;
    }
  }

  std::size_t size() const { return values_.size(); }
  std::size_t nvars() const { return nvars_; }
  const Exponent* exps(std::size_t i) const { return exps_.data() + i * nvars_; }
  Value& value(std::size_t i) { return values_[i]; }

 private:
  void grow() {
    std::size_t cap = index_.size() * 2;
    index_.assign(cap, 0);
    mask_ = cap - 1;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      std::size_t pos = hash_exponents(exps(i), nvars_) & mask_;
      while (index_[pos] != 0) pos = (pos + 1) & mask_;
      index_[pos] = static_cast<std::uint32_t>(i + 1);
    }
  }

  std::size_t nvars_;
  std::vector<Exponent> exps_;
  std::vector<Value> values_;
  std::vector<std::uint32_t> index_;
  std::size_t mask_ = 0;
};

inline Exponent checked_exponent(unsigned long e) {
  if (e > std::numeric_limits<Exponent>::max())
    throw math_error("ExponentOverflow", "exponent " + std::to_string(e) + " too large");
  return static_cast<Exponent>(e);
}

}  // namespace detail

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in descending graded-lex order with no zero coefficients,
/// so two polynomials are equal exactly when their term lists are equal.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& c) {
    Poly p(nvars);
    if (c != 0) {
      p.exps_.assign(nvars, 0);
      p.coeffs_.push_back(c);
    }
    return p;
  }

  static Poly variable(std::size_t nvars, std::size_t index, Exponent power = 1) {
    if (index >= nvars)
      throw usage_error("VariableOutOfRange", "variable index " + std::to_string(index) +
                                                  " outside ambient of " +
                                                  std::to_string(nvars));
    Poly p(nvars);
    p.exps_.assign(nvars, 0);
    p.exps_[index] = power;
    p.coeffs_.emplace_back(1);
    return p;
  }

  static Poly monomial(std::size_t nvars, std::span<const Exponent> e, const Rational& c) {
    if (e.size() != nvars) throw usage_error("NvarsMismatch", "exponent vector length");
    Poly p(nvars);
    if (c != 0) {
      p.exps_.assign(e.begin(), e.end());
      p.coeffs_.push_back(c);
    }
    return p;
  }

  /// Builds a polynomial from arbitrary (possibly repeated, unordered) terms.
  static Poly from_terms(std::size_t nvars,
                         const std::vector<std::pair<ExponentVector, Rational>>& terms) {
    detail::TermTable<Rational> table(nvars, terms.size());
    for (const auto& [e, c] : terms) {
      if (e.size() != nvars) throw usage_error("NvarsMismatch", "exponent vector length");
      table.slot(e.data()) += c;
    }
    return from_table(table);
  }

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty(); }

  bool is_constant() const {
    if (is_zero()) return true;
    if (size() != 1) return false;
    auto e = exponents(0);
    return std::all_of(e.begin(), e.end(), [](Exponent x) { return x == 0; });
  }

  std::span<const Exponent> exponents(std::size_t i) const {
    return {exps_.data() + i * nvars_, nvars_};
  }
  const Rational& coeff(std::size_t i) const { return coeffs_[i]; }
  const Rational& leading_coeff() const { return coeffs_.front(); }

  Rational constant_term() const {
    if (is_zero()) return 0;
    auto e = exponents(size() - 1);
    bool zero = std::all_of(e.begin(), e.end(), [](Exponent x) { return x == 0; });
    return zero ? coeffs_.back() : Rational(0);
  }

  /// -1 for the zero polynomial.
  int total_degree() const {
    if (is_zero()) return -1;
    auto e = exponents(0);
    return std::accumulate(e.begin(), e.end(), 0);
  }

  int degree_in(std::size_t var) const {
    int d = is_zero() ? -1 : 0;
    for (std::size_t i = 0; i < size(); ++i) d = std::max<int>(d, exps_[i * nvars_ + var]);
    return d;
  }

  /// Total degree counted only over the listed variables.
  int degree_in(std::span<const std::size_t> vars) const {
    int d = is_zero() ? -1 : 0;
    for (std::size_t i = 0; i < size(); ++i) {
      int s = 0;
      for (auto v : vars) s += exps_[i * nvars_ + v];
      d = std::max(d, s);
    }
    return d;
  }

  bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

  Rational coefficient_of(std::span<const Exponent> e) const {
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      int c = detail::grlex_compare(exps_.data() + mid * nvars_, e.data(), nvars_);
      if (c == 0) return coeffs_[mid];
      if (c > 0)
        lo = mid + 1;
      else
        hi = mid;
    }
    return 0;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  Poly scaled(const Rational& s) const {
    if (s == 0) return Poly(nvars_);
    Poly r = *this;
    for (auto& c : r.coeffs_) c *= s;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }
  friend Poly operator*(const Poly& a, const Poly& b) { return multiply(a, b); }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.exps_ == b.exps_ && a.coeffs_ == b.coeffs_;
  }

  Poly pow(unsigned k) const {
    Poly r = constant(nvars_, 1);
    if (k == 0) return r;
    if (size() == 1) {
      r = *this;
      for (auto& e : r.exps_) e = detail::checked_exponent(static_cast<unsigned long>(e) * k);
      mpq_class c;
      mpz_pow_ui(c.get_num_mpz_t(), coeffs_[0].get_num_mpz_t(), k);
      mpz_pow_ui(c.get_den_mpz_t(), coeffs_[0].get_den_mpz_t(), k);
      r.coeffs_[0] = c;
      return r;
    }
    // Multiplying by the sparse base keeps intermediate products smaller
    // than repeated squaring does for the shapes seen here.
    r = *this;
    for (unsigned i = 1; i < k; ++i) r = r * *this;
    return r;
  }

  /// Product with a single monomial; keeps the term order.
  Poly times_monomial(std::span<const Exponent> e, const Rational& c) const {
    if (c == 0 || is_zero()) return Poly(nvars_);
    Poly r = *this;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t v = 0; v < nvars_; ++v)
        r.exps_[i * nvars_ + v] =
            detail::checked_exponent(static_cast<unsigned long>(r.exps_[i * nvars_ + v]) + e[v]);
      r.coeffs_[i] *= c;
    }
    return r;
  }

  /// Raw access for algorithms that walk terms in order.
  const std::vector<Exponent>& raw_exponents() const { return exps_; }
  const std::vector<Rational>& raw_coeffs() const { return coeffs_; }

  /// Builds from terms already in strictly descending grlex order with
  /// nonzero coefficients. Used by the algorithms that can guarantee it.
  static Poly from_sorted(std::size_t nvars, std::vector<Exponent> exps,
                          std::vector<Rational> coeffs) {
    Poly p(nvars);
    p.exps_ = std::move(exps);
    p.coeffs_ = std::move(coeffs);
    return p;
  }

  template <class Value, class Convert>
  static Poly from_table(detail::TermTable<Value>& table, Convert convert) {
    const std::size_t n = table.nvars();
    std::vector<std::size_t> order;
    order.reserve(table.size());
    std::vector<Rational> values(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
      values[i] = convert(table.value(i));
      if (values[i] != 0) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return detail::grlex_compare(table.exps(a), table.exps(b), n) > 0;
    });
    Poly p(n);
    p.exps_.reserve(order.size() * n);
    p.coeffs_.reserve(order.size());
    for (auto i : order) {
      p.exps_.insert(p.exps_.end(), table.exps(i), table.exps(i) + n);
      p.coeffs_.push_back(std::move(values[i]));
    }
    return p;
  }

  static Poly from_table(detail::TermTable<Rational>& table) {
    return from_table(table, [](const Rational& r) { return r; });
  }

 private:
  static void check_ambient(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_)
      throw usage_error("NvarsMismatch", "operands over " + std::to_string(a.nvars_) + " and " +
                                             std::to_string(b.nvars_) + " variables");
  }

  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    check_ambient(a, b);
    const std::size_t n = a.nvars_;
    Poly r(n);
    r.exps_.reserve(a.exps_.size() + b.exps_.size());
    r.coeffs_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    auto push = [&](const Exponent* e, Rational c) {
      r.exps_.insert(r.exps_.end(), e, e + n);
      r.coeffs_.push_back(std::move(c));
    };
    while (i < a.size() || j < b.size()) {
      int cmp;
      if (i == a.size())
        cmp = -1;
      else if (j == b.size())
        cmp = 1;
      else
        cmp = detail::grlex_compare(a.exps_.data() + i * n, b.exps_.data() + j * n, n);
      if (cmp > 0) {
        push(a.exps_.data() + i * n, a.coeffs_[i]);
        ++i;
      } else if (cmp < 0) {
        push(b.exps_.data() + j * n, subtract ? Rational(-b.coeffs_[j]) : b.coeffs_[j]);
        ++j;
      } else {
        Rational c = subtract ? Rational(a.coeffs_[i] - b.coeffs_[j])
                              : Rational(a.coeffs_[i] + b.coeffs_[j]);
        if (c != 0) push(a.exps_.data() + i * n, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  // Integer numerators over a common denominator, so the inner loop runs
  // on mpz_addmul without per-step canonicalization.
  static std::pair<std::vector<Integer>, Integer> integer_form(const Poly& p) {
    Integer den = 1;
    for (const auto& c : p.coeffs_) den = lcm(den, c.get_den());
    std::vector<Integer> nums(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      nums[i] = p.coeffs_[i].get_num() * (den / p.coeffs_[i].get_den());
    return {std::move(nums), den};
  }

  static std::size_t bit_size(const Integer& v) {
    return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
  }

  // Kronecker substitution: pack both operands densely into big integers with
  // one fixed-width slot per monomial and let GMP multiply. Positive and
  // negative coefficients are packed separately so no slot ever borrows.
  static std::optional<Poly> kronecker_multiply(const Poly& a, const std::vector<Integer>& an,
                                                const Poly& b, const std::vector<Integer>& bn,
                                                const Integer& den) {
    const std::size_t n = a.nvars_;
    std::vector<std::size_t> used;
    std::vector<unsigned long> radix;
    double slots = 1;
    for (std::size_t v = 0; v < n; ++v) {
      unsigned long d = static_cast<unsigned long>(std::max(a.degree_in(v), 0)) +
                        static_cast<unsigned long>(std::max(b.degree_in(v), 0));
      if (d == 0) continue;
      used.push_back(v);
      radix.push_back(d + 1);
      slots *= static_cast<double>(d + 1);
    }
    const double sparse_work = static_cast<double>(a.size()) * static_cast<double>(b.size());
    if (slots > 4 * sparse_work || slots > 1e8) return std::nullopt;

    std::size_t amax = 0, bmax = 0;
    for (const auto& x : an) amax = std::max(amax, bit_size(x));
    for (const auto& x : bn) bmax = std::max(bmax, bit_size(x));
    std::size_t bound_bits = amax + bmax + bit_size(Integer(std::min(a.size(), b.size()))) + 2;
    const std::size_t limbs_per_slot = (bound_bits + 63) / 64;
    const double total_limbs = slots * static_cast<double>(limbs_per_slot);
    if (total_limbs > 6e7) return std::nullopt;

    auto index_of = [&](std::span<const Exponent> e) {
      std::size_t idx = 0, stride = 1;
      for (std::size_t k = 0; k < used.size(); ++k) {
        idx += e[used[k]] * stride;
        stride *= radix[k];
      }
      return idx;
    };
    const std::size_t nslots = static_cast<std::size_t>(slots);
    auto pack = [&](const Poly& p, const std::vector<Integer>& nums, bool negative) {
      std::vector<std::uint64_t> buf(nslots * limbs_per_slot, 0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        if ((sgn(nums[i]) < 0) != negative || nums[i] == 0) continue;
        std::size_t count = 0;
        mpz_export(buf.data() + index_of(p.exponents(i)) * limbs_per_slot, &count, -1, 8, 0, 0,
                   nums[i].get_mpz_t());
      }
      Integer r;
      mpz_import(r.get_mpz_t(), buf.size(), -1, 8, 0, 0, buf.data());
      return r;
    };
    Integer pa = pack(a, an, false), na = pack(a, an, true);
    Integer pb = pack(b, bn, false), nb = pack(b, bn, true);
    Integer plus = pa * pb + na * nb;
    Integer minus = pa * nb + na * pb;
    pa = na = pb = nb = 0;

    auto unpack = [&](const Integer& v) {
      std::vector<std::uint64_t> buf(nslots * limbs_per_slot, 0);
      std::size_t count = 0;
      mpz_export(buf.data(), &count, -1, 8, 0, 0, v.get_mpz_t());
      return buf;
    };
    auto pbuf = unpack(plus);
    plus = 0;
    auto mbuf = unpack(minus);
    minus = 0;

    std::vector<std::pair<std::size_t, Integer>> found;
    Integer p_val, m_val;
    for (std::size_t s = 0; s < nslots; ++s) {
      const std::uint64_t* ps = pbuf.data() + s * limbs_per_slot;
      const std::uint64_t* ms = mbuf.data() + s * limbs_per_slot;
      bool pz = std::all_of(ps, ps + limbs_per_slot, [](std::uint64_t x) { return x == 0; });
      bool mz = std::all_of(ms, ms + limbs_per_slot, [](std::uint64_t x) { return x == 0; });
      if (pz && mz) continue;
      mpz_import(p_val.get_mpz_t(), limbs_per_slot, -1, 8, 0, 0, ps);
      mpz_import(m_val.get_mpz_t(), limbs_per_slot, -1, 8, 0, 0, ms);
      Integer c = p_val - m_val;
      if (c != 0) found.emplace_back(s, std::move(c));
    }
    // Decode slot indices back to exponent vectors, then restore grlex order.
    detail::TermTable<Integer> table(n, found.size());
    ExponentVector e(n, 0);
    for (auto& [s, c] : found) {
      std::size_t rest = s;
      for (std::size_t k = 0; k < used.size(); ++k) {
        e[used[k]] = detail::checked_exponent(rest % radix[k]);
        rest /= radix[k];
      }
      table.slot(e.data()) = std::move(c);
    }
    return from_table(table, [&](const Integer& v) { return make_rational(v, den); });
  }

  static Poly multiply(const Poly& a, const Poly& b) {
    check_ambient(a, b);
    if (a.is_zero() || b.is_zero()) return Poly(a.nvars_);
    if (b.size() == 1) return a.times_monomial(b.exponents(0), b.coeffs_[0]);
    if (a.size() == 1) return b.times_monomial(a.exponents(0), a.coeffs_[0]);
    const std::size_t n = a.nvars_;
    auto [an, ad] = integer_form(a);
    auto [bn, bd] = integer_form(b);
    Integer den = ad * bd;
    if (a.size() * b.size() >= 4096)
      if (auto k = kronecker_multiply(a, an, b, bn, den)) return std::move(*k);
    detail::TermTable<Integer> table(n, std::min<std::size_t>(a.size() * b.size(), 1u << 22));
    std::vector<Exponent> buf(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Exponent* ea = a.exps_.data() + i * n;
      for (std::size_t j = 0; j < b.size(); ++j) {
        const Exponent* eb = b.exps_.data() + j * n;
        for (std::size_t v = 0; v < n; ++v)
          buf[v] = detail::checked_exponent(static_cast<unsigned long>(ea[v]) + eb[v]);
        Integer& acc = table.slot(buf.data());
        mpz_addmul(acc.get_mpz_t(), an[i].get_mpz_t(), bn[j].get_mpz_t());
      }
    }
    return from_table(table, [&](const Integer& v) { return make_rational(v, den); });
  }

  std::size_t nvars_ = 0;
  std::vector<Exponent> exps_;
  std::vector<Rational> coeffs_;
};

// ---------------------------------------------------------------------------
// Structural helpers

/// Coefficients of var^0, var^1, ..., var^deg as polynomials free of var
/// (same ambient). A constant polynomial yields a single entry.
inline std::vector<Poly> coeffs_in_var(const Poly& p, std::size_t var) {
  if (var >= p.nvars()) throw usage_error("VariableOutOfRange", "coeffs_in_var");
  const std::size_t n = p.nvars();
  int deg = std::max(p.degree_in(var), 0);
  std::vector<std::vector<Exponent>> exps(deg + 1);
  std::vector<std::vector<Rational>> coeffs(deg + 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto e = p.exponents(i);
    auto k = e[var];
    auto& dst = exps[k];
    dst.insert(dst.end(), e.begin(), e.end());
    dst[dst.size() - n + var] = 0;
    coeffs[k].push_back(p.coeff(i));
  }
  // Every term in a bucket shares the removed exponent, so order is kept.
  std::vector<Poly> out;
  out.reserve(deg + 1);
  for (int k = 0; k <= deg; ++k)
    out.push_back(Poly::from_sorted(n, std::move(exps[k]), std::move(coeffs[k])));
  return out;
}

/// Inverse of coeffs_in_var.
inline Poly from_coeffs_in_var(std::span<const Poly> coeffs, std::size_t var,
                               std::size_t nvars) {
  Poly r(nvars);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    r += coeffs[k] * Poly::variable(nvars, var, static_cast<Exponent>(k));
  return r;
}

/// Terms whose degree in `vars` equals `degree`.
inline Poly homogeneous_part(const Poly& p, std::span<const std::size_t> vars, int degree) {
  std::vector<Exponent> exps;
  std::vector<Rational> coeffs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto e = p.exponents(i);
    int s = 0;
    for (auto v : vars) s += e[v];
    if (s == degree) {
      exps.insert(exps.end(), e.begin(), e.end());
      coeffs.push_back(p.coeff(i));
    }
  }
  return Poly::from_sorted(p.nvars(), std::move(exps), std::move(coeffs));
}

inline bool is_homogeneous(const Poly& p) {
  if (p.is_zero()) return true;
  int d = p.total_degree();
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto e = p.exponents(i);
    if (std::accumulate(e.begin(), e.end(), 0) != d) return false;
  }
  return true;
}

inline constexpr std::size_t drop_var = std::numeric_limits<std::size_t>::max();

/// Moves variable i of `p` to position new_index[i] of an ambient with
/// `nvars` variables. Entries equal to drop_var require that the variable
/// does not occur.
inline Poly remap_vars(const Poly& p, std::size_t nvars, std::span<const std::size_t> new_index) {
  if (new_index.size() != p.nvars()) throw usage_error("NvarsMismatch", "remap_vars index map");
  detail::TermTable<Rational> table(nvars, p.size());
  std::vector<Exponent> buf(nvars);
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::fill(buf.begin(), buf.end(), 0);
    auto e = p.exponents(i);
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (new_index[v] == drop_var)
        throw usage_error("AmbientMismatch", "dropped variable " + std::to_string(v) + " occurs");
      buf[new_index[v]] = detail::checked_exponent(static_cast<unsigned long>(buf[new_index[v]]) + e[v]);
    }
    table.slot(buf.data()) += p.coeff(i);
  }
  return Poly::from_table(table);
}

/// Applies the variable permutation x_i -> x_perm[i].
inline Poly permute_vars(const Poly& p, std::span<const std::size_t> perm) {
  return remap_vars(p, p.nvars(), perm);
}

// ---------------------------------------------------------------------------
// Substitution and evaluation

namespace detail {

class Composer {
 public:
  Composer(const Poly& p, std::span<const Poly> images, std::size_t target)
      : p_(p), images_(images), target_(target), powers_(images.size()) {}

  Poly run() {
    std::vector<std::size_t> all(p_.size());
    std::iota(all.begin(), all.end(), 0);
    return rec(all, 0);
  }

 private:
  const Poly& power(std::size_t var, Exponent k) {
    auto& cache = powers_[var];
    if (cache.empty()) cache.push_back(Poly::constant(target_, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images_[var]);
    return cache[k];
  }

  Poly rec(const std::vector<std::size_t>& terms, std::size_t var) {
    if (var == p_.nvars()) {
      Rational c = 0;
      for (auto t : terms) c += p_.coeff(t);
      return Poly::constant(target_, c);
    }
    std::map<Exponent, std::vector<std::size_t>> groups;
    for (auto t : terms) groups[p_.exponents(t)[var]].push_back(t);
    Poly acc(target_);
    for (auto& [k, sub] : groups) {
      Poly inner = rec(sub, var + 1);
      acc += k == 0 ? inner : inner * power(var, k);
    }
    return acc;
  }

  const Poly& p_;
  std::span<const Poly> images_;
  std::size_t target_;
  std::vector<std::vector<Poly>> powers_;
};

}  // namespace detail

/// Replaces variable i of `p` by images[i]; every image must live in the
/// same target ambient.
inline Poly compose(const Poly& p, std::span<const Poly> images) {
  if (images.size() != p.nvars())
    throw usage_error("AmbientMismatch", "need one image per variable");
  if (images.empty()) return p;
  std::size_t target = images[0].nvars();
  for (const auto& im : images)
    if (im.nvars() != target) throw usage_error("AmbientMismatch", "images over different ambients");
  if (p.is_zero()) return Poly(target);
  return detail::Composer(p, images, target).run();
}

/// Substitution within one ambient; unmapped variables map to themselves.
inline Poly substitute(const Poly& p, const std::map<std::size_t, Poly>& mapping) {
  std::vector<Poly> images;
  images.reserve(p.nvars());
  for (std::size_t v = 0; v < p.nvars(); ++v) {
    auto it = mapping.find(v);
    if (it == mapping.end()) {
      images.push_back(Poly::variable(p.nvars(), v));
    } else {
      if (it->second.nvars() != p.nvars())
        throw usage_error("AmbientMismatch", "image of variable " + std::to_string(v));
      images.push_back(it->second);
    }
  }
  return compose(p, images);
}

/// Exact value at a point. Works on integer numerators with one common
/// denominator to avoid canonicalizing at every term.
inline Rational evaluate(const Poly& p, std::span<const Rational> point) {
  if (point.size() != p.nvars())
    throw usage_error("LengthMismatch", "point has " + std::to_string(point.size()) +
                                            " coordinates, polynomial has " +
                                            std::to_string(p.nvars()) + " variables");
  if (p.is_zero()) return 0;
  const std::size_t n = p.nvars();
  std::vector<int> maxdeg(n, 0);
  for (std::size_t v = 0; v < n; ++v) maxdeg[v] = p.degree_in(v);
  std::vector<std::vector<Integer>> num_pow(n), den_pow(n);
  for (std::size_t v = 0; v < n; ++v) {
    num_pow[v].resize(maxdeg[v] + 1);
    den_pow[v].resize(maxdeg[v] + 1);
    num_pow[v][0] = 1;
    den_pow[v][0] = 1;
    for (int k = 1; k <= maxdeg[v]; ++k) {
      num_pow[v][k] = num_pow[v][k - 1] * point[v].get_num();
      den_pow[v][k] = den_pow[v][k - 1] * point[v].get_den();
    }
  }
  Integer cden = 1;
  for (std::size_t i = 0; i < p.size(); ++i) cden = lcm(cden, p.coeff(i).get_den());
  Integer sum = 0, term;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto e = p.exponents(i);
    term = p.coeff(i).get_num() * (cden / p.coeff(i).get_den());
    for (std::size_t v = 0; v < n; ++v) {
      if (maxdeg[v] == 0) continue;
      if (e[v]) term *= num_pow[v][e[v]];
      if (maxdeg[v] - e[v]) term *= den_pow[v][maxdeg[v] - e[v]];
    }
    sum += term;
  }
  Integer den = cden;
  for (std::size_t v = 0; v < n; ++v) den *= den_pow[v][maxdeg[v]];
  return make_rational(sum, den);
}

/// Fixes some variables to rational values; the ambient is unchanged and the
/// fixed variables no longer occur.
inline Poly partial_evaluate(const Poly& p, const std::map<std::size_t, Rational>& values) {
  if (values.empty() || p.is_zero()) return p;
  const std::size_t n = p.nvars();
  std::map<std::size_t, std::vector<Rational>> powers;
  for (const auto& [v, x] : values) {
    if (v >= n) throw usage_error("VariableOutOfRange", "partial_evaluate");
    auto& pw = powers[v];
    pw.assign(std::max(p.degree_in(v), 0) + 1, Rational(1));
    for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * x;
  }
  detail::TermTable<Rational> table(n, p.size());
  ExponentVector e(n);
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto src = p.exponents(i);
    std::copy(src.begin(), src.end(), e.begin());
    Rational c = p.coeff(i);
    for (const auto& [v, pw] : powers) {
      c *= pw[e[v]];
      e[v] = 0;
    }
    if (c != 0) table.slot(e.data()) += c;
  }
  return Poly::from_table(table);
}

// ---------------------------------------------------------------------------
// Content and division

/// Positive rational c with p / c having coprime integer coefficients.
inline Rational content(const Poly& p) {
  if (p.is_zero()) return 0;
  Integer g = 0, l = 1;
  for (const auto& c : p.raw_coeffs()) {
    g = gcd(g, c.get_num());
    l = lcm(l, c.get_den());
  }
  return make_rational(g, l);
}

/// p / content, sign fixed so that the leading coefficient is positive.
inline Poly primitive_part(const Poly& p) {
  if (p.is_zero()) return p;
  Rational c = content(p);
  if (p.leading_coeff() < 0) c = -c;
  return p.scaled(1 / c);
}

/// Componentwise minimum exponent over all terms.
inline ExponentVector monomial_content(const Poly& p) {
  ExponentVector m(p.nvars(), 0);
  if (p.is_zero()) return m;
  auto first = p.exponents(0);
  m.assign(first.begin(), first.end());
  for (std::size_t i = 1; i < p.size(); ++i) {
    auto e = p.exponents(i);
    for (std::size_t v = 0; v < m.size(); ++v) m[v] = std::min(m[v], e[v]);
  }
  return m;
}

/// Divides by a monomial that must divide every term.
inline Poly divide_monomial(const Poly& p, std::span<const Exponent> m) {
  std::vector<Exponent> exps(p.raw_exponents());
  const std::size_t n = p.nvars();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t v = 0; v < n; ++v) {
      if (exps[i * n + v] < m[v]) throw math_error("InexactDivision", "monomial does not divide");
      exps[i * n + v] = static_cast<Exponent>(exps[i * n + v] - m[v]);
    }
  // Subtracting a common monomial preserves grlex order.
  return Poly::from_sorted(n, std::move(exps), p.raw_coeffs());
}

namespace detail {

struct GrlexDescending {
  bool operator()(const ExponentVector& a, const ExponentVector& b) const {
    return grlex_compare(a.data(), b.data(), a.size()) > 0;
  }
};

}  // namespace detail

/// Multivariate division that succeeds only when q divides p exactly.
inline std::optional<Poly> try_divide(const Poly& p, const Poly& q) {
  if (p.nvars() != q.nvars()) throw usage_error("NvarsMismatch", "try_divide");
  if (q.is_zero()) throw math_error("DivisionByZero", "divisor is the zero polynomial");
  const std::size_t n = p.nvars();
  if (p.is_zero()) return Poly(n);
  if (q.size() == 1) {
    auto qe = q.exponents(0);
    auto mc = monomial_content(p);
    for (std::size_t v = 0; v < n; ++v)
      if (mc[v] < qe[v]) return std::nullopt;
    return divide_monomial(p, qe).scaled(1 / q.coeff(0));
  }
  for (std::size_t v = 0; v < n; ++v)
    if (q.degree_in(v) > p.degree_in(v)) return std::nullopt;
  if (q.total_degree() > p.total_degree()) return std::nullopt;

  auto qlead = q.exponents(0);
  const Rational& qlc = q.leading_coeff();
  std::map<ExponentVector, Rational, detail::GrlexDescending> rem;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto e = p.exponents(i);
    rem.emplace(ExponentVector(e.begin(), e.end()), p.coeff(i));
  }
  std::vector<Exponent> qexps;
  std::vector<Rational> qcoeffs;
  ExponentVector m(n), buf(n);
  while (!rem.empty()) {
    auto it = rem.begin();
    for (std::size_t v = 0; v < n; ++v) {
      if (it->first[v] < qlead[v]) return std::nullopt;
      m[v] = static_cast<Exponent>(it->first[v] - qlead[v]);
    }
    Rational c = it->second / qlc;
    qexps.insert(qexps.end(), m.begin(), m.end());
    qcoeffs.push_back(c);
    rem.erase(it);
    for (std::size_t j = 1; j < q.size(); ++j) {
      auto e = q.exponents(j);
      for (std::size_t v = 0; v < n; ++v) buf[v] = static_cast<Exponent>(e[v] + m[v]);
      auto [pos, inserted] = rem.try_emplace(buf, 0);
      pos->second -= c * q.coeff(j);
      if (pos->second == 0) rem.erase(pos);
    }
  }
  // Quotient terms are produced in descending order.
  return Poly::from_sorted(n, std::move(qexps), std::move(qcoeffs));
}

/// Exact division; throws InexactDivision when q does not divide p.
inline Poly exact_divide(const Poly& p, const Poly& q) {
  auto r = try_divide(p, q);
  if (!r) throw math_error("InexactDivision", "divisor leaves a nonzero remainder");
  return *r;
}

/// Divides out `factor` as many times as it divides p; returns the count.
inline unsigned strip_factor(Poly& p, const Poly& factor) {
  if (p.is_zero() || factor.is_constant()) return 0;
  unsigned k = 0;
  while (auto q = try_divide(p, factor)) {
    p = std::move(*q);
    ++k;
  }
  return k;
}

}  // namespace symdio
