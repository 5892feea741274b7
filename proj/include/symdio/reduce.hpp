#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "symdio/format.hpp"
#include "symdio/pencil.hpp"
#include "symdio/symfunc.hpp"

namespace symdio {

/// One halving step with shared parameters (c_j, d_j). Quadruple i maps
///   z_{4i+1} =  x_{2i+1} + c_j,   z_{4i+2} = -x_{2i+1} - d_j,
///   z_{4i+3} = -x_{2i+2} + d_j,   z_{4i+4} =  x_{2i+2} - c_j.
/// At c_j = d_j every quadruple is two pairs {v, -v}.
struct QuadrupleStep {
  unsigned j = 1;
  std::size_t in_vars = 0;
  std::size_t out_vars = 0;

  VarTag c_tag() const { return reduction_c(j); }
  VarTag d_tag() const { return reduction_d(j); }

  static QuadrupleStep make(unsigned j, std::size_t in_vars) {
    if (in_vars == 0 || in_vars % 4 != 0)
      throw usage_error("BadQuadrupleCount", "variable count " + std::to_string(in_vars) +
                                                 " is not a positive multiple of 4");
    return {j, in_vars, in_vars / 2};
  }

  /// z in terms of x, c, d given as arbitrary polynomials (all in one ambient).
  template <class T>
  std::vector<T> images(const std::vector<T>& x, const T& c, const T& d) const {
    std::vector<T> z;
    z.reserve(in_vars);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      z.push_back(x[i] + c);
      z.push_back(-x[i] - d);
      z.push_back(-x[i + 1] + d);
      z.push_back(x[i + 1] - c);
    }
    return z;
  }
};

/// Degree of p in the first `nform` variables.
inline int form_degree(const Poly& p, std::size_t nform) {
  std::vector<std::size_t> vars(nform);
  std::iota(vars.begin(), vars.end(), 0);
  return p.degree_in(vars);
}

/// f over [z1..z_in, extras] to [x1..x_out, extras, c_j, d_j].
inline Poly quadruple_substitute(const Poly& f, std::size_t nextras, const QuadrupleStep& step) {
  if (f.nvars() != step.in_vars + nextras)
    throw usage_error("AmbientMismatch", "form ambient does not match the step");
  const std::size_t n_out = step.out_vars + nextras + 2;
  std::vector<Poly> x;
  for (std::size_t i = 0; i < step.out_vars; ++i) x.push_back(Poly::variable(n_out, i));
  Poly c = Poly::variable(n_out, n_out - 2), d = Poly::variable(n_out, n_out - 1);
  auto images = step.images(x, c, d);
  for (std::size_t e = 0; e < nextras; ++e) images.push_back(Poly::variable(n_out, step.out_vars + e));
  Poly g = compose(f, images);
  const int before = form_degree(f, step.in_vars);
  const int after = form_degree(g, step.out_vars);
  if (!g.is_zero() && after >= before) {
    std::vector<std::size_t> vars(step.out_vars);
    std::iota(vars.begin(), vars.end(), 0);
    Poly lead = homogeneous_part(g, vars, after);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n_out; ++i) names.push_back("v" + std::to_string(i + 1));
    throw math_error("DegreeDropFailed",
                     "step " + std::to_string(step.j) + " keeps degree " + std::to_string(after) +
                         ", leading term " + leading_term_text(lead, names));
  }
  return g;
}

/// 6 * 2^halvings: the variable count that halves down to six.
inline std::size_t halving_vars(int halvings) {
  std::size_t N = 6;
  for (int k = 0; k < halvings; ++k) N *= 2;
  return N;
}

struct ReductionTrace {
  SymmetricForm source;
  std::size_t used_vars = 0;  // after zero-padding restriction
  std::vector<QuadrupleStep> steps;
  Poly base_form;          // over base_ambient
  VarList base_ambient;    // y1..y6 then c1, d1, c2, d2, ...
  VarList extras;          // c1, d1, ...
  std::vector<std::pair<Poly, unsigned>> stripped;  // (c_j - d_j, multiplicity)
  Rational base_scale = 1;  // restricted and substituted form = base_scale * stripped * base_form
  bool zero_form = false;

  /// base_scale times the stripped factors, over base_ambient.
  Poly base_multiplier() const {
    Poly m = Poly::constant(base_ambient.size(), base_scale);
    for (const auto& [factor, k] : stripped) m *= factor.pow(k);
    return m;
  }

  std::size_t base_vars() const { return steps.empty() ? used_vars : steps.back().out_vars; }
};

namespace detail {

/// Sets the variables past `keep` to zero, keeping only x1..x_keep.
inline Poly restrict_leading(const Poly& f, std::size_t keep) {
  std::map<std::size_t, Rational> zeros;
  for (std::size_t i = keep; i < f.nvars(); ++i) zeros[i] = 0;
  std::vector<std::size_t> idx(f.nvars(), drop_var);
  for (std::size_t i = 0; i < keep; ++i) idx[i] = i;
  return remap_vars(partial_evaluate(f, zeros), keep, idx);
}

}  // namespace detail

/// Restricts f to 6 * 2^halvings variables, then halves that many times.
/// Factors (c_j - d_j) are stripped from the result.
inline ReductionTrace reduce_steps(const SymmetricForm& f, int halvings) {
  if (f.degree % 2 == 0 || f.degree < 5)
    throw usage_error("UnsupportedDegree", "degree must be odd and at least 5");
  if (!f.symmetry_checked) throw math_error("NotSymmetric", "the form is not symmetric");
  const std::size_t need = halving_vars(halvings);
  if (f.nvars < need)
    throw usage_error("TooFewVariables", "degree " + std::to_string(f.degree) + " needs at least " +
                                             std::to_string(need) + " variables, got " +
                                             std::to_string(f.nvars));
  if (f.nvars % 2 != 0) throw math_error("OddVariableCount", "the variable count must be even");

  ReductionTrace trace;
  trace.source = f;
  trace.used_vars = need;
  Poly g = need < f.nvars ? detail::restrict_leading(f.poly, need) : f.poly;
  if (g.is_zero()) {
    trace.zero_form = true;
    trace.base_form = g;
    return trace;
  }

  std::size_t vars = need;
  std::vector<VarTag> extra_tags;
  for (int k = 0; k < halvings; ++k) {
    auto step = QuadrupleStep::make(static_cast<unsigned>(k + 1), vars);
    g = quadruple_substitute(g, extra_tags.size(), step);
    extra_tags.push_back(step.c_tag());
    extra_tags.push_back(step.d_tag());
    trace.steps.push_back(step);
    vars = step.out_vars;
  }
  trace.extras = VarList(extra_tags);
  trace.base_ambient = VarList::form_vars(static_cast<unsigned>(vars)).concat(trace.extras);

  // Each step contributes a factor (c_j - d_j) from the odd power sums.
  const std::size_t nb = trace.base_ambient.size();
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    Poly factor = Poly::variable(nb, vars + 2 * s) - Poly::variable(nb, vars + 2 * s + 1);
    unsigned m = strip_factor(g, factor);
    if (m) trace.stripped.emplace_back(factor, m);
  }
  trace.base_form = primitive_part(g);
  trace.base_scale = g.leading_coeff() / trace.base_form.leading_coeff();
  return trace;
}

/// Checks that the base form (6 variables plus symbols) vanishes at both
/// primitive families identically in every symbol.
inline void check_base_form(const ReductionTrace& trace) {
  if (trace.base_vars() != 6)
    throw math_error("BasePencilUnsupported", "the base form has " +
                                                  std::to_string(trace.base_vars()) + " variables");
  // Ambient for the check: a, b, c, d, then the symbols.
  const std::size_t ne = trace.extras.size(), n = 4 + ne;
  auto v = [&](std::size_t i) { return Poly::variable(n, i); };
  Poly one = Poly::constant(n, 1);
  auto u = primitive_point<Poly>(6, {v(0), v(1)}).entries;
  auto w = primitive_point<Poly>(6, {v(2), v(3)}, {1, 2, 3, 4, 5, 0}).entries;
  for (std::size_t e = 0; e < ne; ++e) {
    u.push_back(v(4 + e));
    w.push_back(v(4 + e));
  }
  if (!compose(trace.base_form, u).is_zero())
    throw math_error("BasePencilUnsupported",
                     "base form does not vanish on (a,-a,b,-b,1,-1)");
  if (!compose(trace.base_form, w).is_zero())
    throw math_error("BasePencilUnsupported",
                     "base form does not vanish on (-1,c,-c,d,-d,1)");
}

/// n - 5 halvings down to six variables, degree 5.
inline ReductionTrace reduce_to_base(const SymmetricForm& f) {
  if (f.degree % 2 == 0 || f.degree < 5)
    throw usage_error("UnsupportedDegree", "degree must be odd and at least 5");
  auto trace = reduce_steps(f, f.degree - 5);
  if (trace.zero_form) return trace;
  if (form_degree(trace.base_form, 6) != 5)
    throw math_error("DegreeDropFailed", "base form does not have degree 5");
  check_base_form(trace);
  return trace;
}

/// Pushes base numerators (over params containing every c_j, d_j) back
/// through the steps: x = numerators / W on both sides.
inline std::vector<Poly> lift_fractions(const ParametricSolution& base, const ReductionTrace& trace) {
  const std::size_t np = base.params.size();
  const Poly& W = base.denominator;
  std::vector<Poly> x = base.solutions;
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    Poly c = W * Poly::variable(np, base.params.index_of(it->c_tag()));
    Poly d = W * Poly::variable(np, base.params.index_of(it->d_tag()));
    x = it->images(x, c, d);
  }
  x.resize(trace.source.nvars, Poly(np));
  return x;
}

/// The stripped (c_j - d_j) factors as polynomials over the solution parameters.
inline std::vector<Poly> stripped_locus(const ReductionTrace& trace, const VarList& params) {
  std::vector<Poly> out;
  std::vector<std::size_t> idx(trace.base_ambient.size(), drop_var);
  for (std::size_t i = trace.base_vars(); i < trace.base_ambient.size(); ++i)
    idx[i] = params.index_of(trace.base_ambient[i]);
  for (const auto& [factor, m] : trace.stripped)
    out.push_back(primitive_part(remap_vars(factor, params.size(), idx)));
  return out;
}

namespace detail {

/// Divides every polynomial by the common rational content.
inline void divide_common_content(std::vector<Poly*> ps) {
  Integer g = 0, l = 1;
  for (auto* p : ps)
    for (const auto& c : p->raw_coeffs()) {
      g = gcd(g, c.get_num());
      l = lcm(l, c.get_den());
    }
  if (g == 0) return;
  Rational s = make_rational(l, g);
  for (auto* p : ps) *p = p->scaled(s);
}

}  // namespace detail

/// Lift for the homogeneous equation: the source form is homogeneous, so the
/// lifted tuple drops the common denominator.
inline ParametricSolution lift_numerators(const ParametricSolution& base, const ReductionTrace& trace) {
  std::vector<Poly> x = lift_fractions(base, trace);
  std::vector<Poly*> ptrs;
  for (auto& xi : x) ptrs.push_back(&xi);
  detail::divide_common_content(ptrs);
  ParametricSolution out = make_solution(base.params, std::move(x));
  out.zero_sum = true;
  out.excluded_locus = base.excluded_locus;
  for (auto& l : stripped_locus(trace, base.params)) out.excluded_locus.push_back(std::move(l));
  return out;
}

inline ParametricSolution lift_solution(const ParametricSolution& base, const ReductionTrace& trace,
                                        const CertifyOptions& opt = {}) {
  ParametricSolution out = lift_numerators(base, trace);
  out.certificate = certify(trace.source.poly, out, std::nullopt, opt);
  return out;
}

struct ReducedSolveResult {
  ReductionTrace trace;
  PencilResult base;
  ParametricSolution solution;
};

/// Solves the base quintic with the pencil and certifies the lifted solution.
inline ReducedSolveResult solve_reduced(const SymmetricForm& f, const SolveOptions& opt = {}) {
  ReducedSolveResult r;
  r.trace = reduce_to_base(f);
  if (r.trace.zero_form) {
    // Every point of the padded subspace works; emit the primitive family.
    VarList params({param_a(), param_b()});
    auto pt = primitive_point<Poly>(6, {Poly::variable(2, 0), Poly::variable(2, 1)}).entries;
    pt.resize(f.nvars, Poly(2));
    r.solution = make_solution(params, pt);
    r.solution.zero_sum = true;
    r.solution.certificate = certify(f.poly, r.solution, std::nullopt, opt.certify);
    return r;
  }
  if (r.trace.steps.empty()) {
    auto base = SymmetricForm::make_symmetric(r.trace.base_form);
    r.base = solve_quintic(base, opt);
    ParametricSolution s = r.base.solution;
    s.solutions.resize(f.nvars, Poly(s.params.size()));
    s.nvars = f.nvars;
    if (f.nvars != 6) s.certificate = certify(f.poly, s, std::nullopt, opt.certify);
    r.solution = std::move(s);
    return r;
  }
  r.base = solve_pencil(r.trace.base_form, r.trace.extras, opt);
  r.solution = lift_solution(r.base.solution, r.trace, opt.certify);
  return r;
}

}  // namespace symdio
