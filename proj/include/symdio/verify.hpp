#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symdio/format.hpp"
#include "symdio/solution.hpp"

namespace symdio {

struct CertifyOptions {
  double budget = 5e6;           // term bound above which certification is randomized
  std::uint64_t seed = 1;
  std::size_t samples = 50;
  bool force_randomized = false;
};

namespace detail {

/// Images of the form's ambient variables in the parameter ambient:
/// x_i -> solutions[i-1], any other symbol -> the parameter with that tag.
inline std::vector<Poly> form_images(const VarList& form_ambient, const ParametricSolution& sol) {
  std::vector<Poly> images;
  for (const auto& tag : form_ambient.tags()) {
    if (tag.kind == VarKind::form) {
      if (tag.index < 1 || tag.index > sol.solutions.size())
        throw usage_error("AmbientMismatch", "form variable " + var_name(tag) + " has no solution");
      images.push_back(sol.solutions[tag.index - 1]);
    } else {
      images.push_back(Poly::variable(sol.params.size(), sol.params.index_of(tag)));
    }
  }
  return images;
}

inline std::vector<std::size_t> form_var_positions(const VarList& form_ambient) {
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < form_ambient.size(); ++i)
    if (form_ambient[i].kind == VarKind::form) pos.push_back(i);
  return pos;
}

/// W^n * (F(X/W) - q) as a polynomial, n the degree of F in the unknowns.
inline Poly symbolic_residual(const Poly& form, const VarList& form_ambient,
                              const ParametricSolution& sol, const Rational& q) {
  auto images = form_images(form_ambient, sol);
  const Poly& W = sol.denominator;
  if (W.is_constant()) {
    Rational w = W.constant_term();
    if (w == 0) throw math_error("ZeroDenominator", "solution denominator is zero");
    auto xs = form_var_positions(form_ambient);
    for (auto i : xs) images[i] = images[i].scaled(1 / w);
    return compose(form, images) - Poly::constant(sol.params.size(), q);
  }
  auto xs = form_var_positions(form_ambient);
  const int n = form.degree_in(xs);
  Poly acc(sol.params.size());
  Poly wpow = Poly::constant(sol.params.size(), 1);
  std::vector<Poly> wpows{wpow};
  for (int k = 1; k <= n; ++k) wpows.push_back(wpows.back() * W);
  for (int k = 0; k <= n; ++k) {
    Poly part = homogeneous_part(form, xs, k);
    if (part.is_zero()) continue;
    acc += compose(part, images) * wpows[n - k];
  }
  if (q != 0) acc -= wpows[n].scaled(q);
  return acc;
}

inline double binomial_estimate(double top, double k) {
  return std::exp(std::lgamma(top + 1) - std::lgamma(k + 1) - std::lgamma(top - k + 1));
}

}  // namespace detail

/// Upper estimate of the residual's term count: C(D + k, k) with D the
/// degree of the form times the largest degree among the solution polynomials.
inline double residual_term_bound(const Poly& form, const ParametricSolution& sol) {
  int deg = std::max(sol.denominator.total_degree(), 1);
  for (const auto& x : sol.solutions) deg = std::max(deg, x.total_degree());
  double D = static_cast<double>(std::max(form.total_degree(), 1)) * deg;
  double k = static_cast<double>(sol.params.size());
  return detail::binomial_estimate(D + k, k);
}

/// Draws a rational parameter point with numerators and denominators up to
/// 10^4, rejecting points on the excluded locus or where W vanishes.
inline std::vector<Rational> sample_point(std::mt19937_64& rng, const ParametricSolution& sol,
                                          const std::vector<Poly>& locus) {
  std::uniform_int_distribution<long> num(-10000, 10000);
  std::uniform_int_distribution<long> den(1, 10000);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Rational> pt;
    for (std::size_t i = 0; i < sol.params.size(); ++i)
      pt.push_back(make_rational(Integer(num(rng)), Integer(den(rng))));
    bool ok = evaluate(sol.denominator, pt) != 0;
    for (const auto& l : locus)
      if (ok && evaluate(l, pt) == 0) ok = false;
    if (ok) return pt;
  }
  throw math_error("CertificationFailed", "could not sample off the excluded locus");
}

/// Checks F(x) = q (q = nullopt means the zero certificate) for the
/// solution, symbolically when the residual is small enough, otherwise at
/// seeded random rational points. Throws CertificationFailed on any nonzero
/// residual.
inline Certificate certify(const Poly& form, const VarList& form_ambient,
                           const ParametricSolution& sol, std::optional<Rational> q,
                           const CertifyOptions& opt = {}) {
  if (form.nvars() != form_ambient.size())
    throw usage_error("AmbientMismatch", "form ambient size differs from the form");
  if (sol.denominator.nvars() != sol.params.size())
    throw usage_error("AmbientMismatch", "denominator ambient differs from the parameters");
  for (const auto& x : sol.solutions)
    if (x.nvars() != sol.params.size())
      throw usage_error("AmbientMismatch", "solution ambient differs from the parameters");
  Certificate cert;
  cert.kind = q ? Certificate::Kind::value : Certificate::Kind::zero;
  cert.q = q.value_or(0);
  cert.excluded_locus = sol.excluded_locus;
  const auto names = sol.params.names();

  if (sol.zero_sum) {
    Poly s(sol.params.size());
    for (const auto& x : sol.solutions) s += x;
    if (!s.is_zero())
      throw math_error("CertificationFailed",
                       "claimed zero sum fails, leading term " + leading_term_text(s, names));
  }

  if (!opt.force_randomized && residual_term_bound(form, sol) <= opt.budget) {
    Poly r = detail::symbolic_residual(form, form_ambient, sol, cert.q);
    if (!r.is_zero())
      throw math_error("CertificationFailed",
                       "symbolic residual is nonzero, leading term " + leading_term_text(r, names));
    cert.method = Certificate::Method::symbolic;
    return cert;
  }

  cert.method = Certificate::Method::randomized;
  cert.seed = opt.seed;
  cert.samples = opt.samples;
  std::mt19937_64 rng(opt.seed);
  auto xs = detail::form_var_positions(form_ambient);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    auto pt = sample_point(rng, sol, sol.excluded_locus);
    Rational w = evaluate(sol.denominator, pt);
    std::vector<Rational> full(form_ambient.size());
    for (std::size_t i = 0; i < form_ambient.size(); ++i) {
      const auto& tag = form_ambient[i];
      if (tag.kind == VarKind::form) {
        if (tag.index < 1 || tag.index > sol.solutions.size())
          throw usage_error("AmbientMismatch", "form variable without solution");
        full[i] = evaluate(sol.solutions[tag.index - 1], pt) / w;
      } else {
        full[i] = pt[sol.params.index_of(tag)];
      }
    }
    Rational r = evaluate(form, full) - cert.q;
    if (r != 0) {
      std::string where;
      for (std::size_t i = 0; i < pt.size(); ++i)
        where += (i ? ", " : "") + names[i] + "=" + to_display(pt[i]);
      throw math_error("CertificationFailed",
                       "residual " + to_display(r) + " at sample " + std::to_string(s) + " (" +
                           where + ")");
    }
    cert.sample_points.push_back(std::move(pt));
  }
  return cert;
}

/// The form's ambient is x1..xN.
inline Certificate certify(const Poly& form, const ParametricSolution& sol,
                           std::optional<Rational> q, const CertifyOptions& opt = {}) {
  return certify(form, VarList::form_vars(static_cast<unsigned>(form.nvars())), sol, q, opt);
}

/// Fixes some parameters to rationals (reducing the parameter count) and
/// re-certifies against the form.
inline ParametricSolution specialize(const ParametricSolution& sol,
                                     const std::vector<std::pair<VarTag, Rational>>& assignments,
                                     const Poly& form, const VarList& form_ambient,
                                     const CertifyOptions& opt = {}) {
  if (assignments.empty()) return sol;
  const auto names = sol.params.names();
  std::map<std::size_t, Rational> fixed;
  for (const auto& [tag, value] : assignments) {
    auto idx = sol.params.find(tag);
    if (!idx)
      throw usage_error("UnknownParameter", "solution has no parameter " + var_name(tag));
    fixed[*idx] = value;
  }
  std::vector<std::size_t> new_index(sol.params.size(), drop_var);
  std::vector<VarTag> kept;
  for (std::size_t i = 0; i < sol.params.size(); ++i)
    if (!fixed.count(i)) {
      new_index[i] = kept.size();
      kept.push_back(sol.params[i]);
    }
  auto reduce = [&](const Poly& p) {
    return remap_vars(partial_evaluate(p, fixed), kept.size(), new_index);
  };

  ParametricSolution out;
  out.nvars = sol.nvars;
  out.params = VarList(kept);
  out.zero_sum = sol.zero_sum;
  for (const auto& l : sol.excluded_locus) {
    Poly r = reduce(l);
    if (r.is_zero())
      throw math_error("ExcludedLocusHit",
                       "excluded locus polynomial " + to_text(l, names) + " vanishes");
    if (!r.is_constant()) out.excluded_locus.push_back(primitive_part(r));
  }
  out.denominator = reduce(sol.denominator);
  if (out.denominator.is_zero())
    throw math_error("ExcludedLocusHit",
                     "solution denominator " + to_text(sol.denominator, names) + " vanishes");
  bool all_zero = true;
  for (const auto& x : sol.solutions) {
    out.solutions.push_back(reduce(x));
    all_zero = all_zero && out.solutions.back().is_zero();
  }
  if (all_zero) throw math_error("ExcludedLocusHit", "every coordinate vanishes");
  std::optional<Rational> q;
  if (sol.certificate && sol.certificate->kind == Certificate::Kind::value) q = sol.certificate->q;
  out.certificate = certify(form, form_ambient, out, q, opt);
  return out;
}

}  // namespace symdio
