#pragma once

#include <string>
#include <vector>

#include "symdio/reduce.hpp"

namespace symdio {

/// F(x1..xN) = q with F symmetric of odd degree n and N = 6 * 2^(n-4).
struct WaringProblem {
  SymmetricForm form;
  Rational q = 0;
};

struct WaringResult {
  ParametricSolution solution;
  ReductionTrace trace;
  std::string route;  // "value" or "homogeneous" (q = 0)
  // t = q * t_num / t_den over the pencil ambient, before lifting.
  Poly t_num, t_den;
};

inline std::size_t waring_vars(int n) { return halving_vars(n - 4); }

namespace detail {

inline Error stage_unsolvable(const std::string& stage, const std::string& why) {
  return math_error("StageUnsolvable", stage + ": " + why);
}

}  // namespace detail

/// One halving more than the homogeneous route leaves a base H of degree 4
/// in y1..y6 with F(z) = K * H(y), K a product of (c_j - d_j) factors. On
/// the pencil y = t u + v, H = T3 t^3 + T2 t^2 + T1 t; T3 and T2 are
/// annihilated as in the homogeneous case and K T1 t = q fixes t.
inline WaringResult solve_waring(const WaringProblem& prob, const SolveOptions& opt = {}) {
  const auto& f = prob.form;
  if (f.degree % 2 == 0 || f.degree < 5)
    throw usage_error("UnsupportedDegree", "degree must be odd and at least 5");
  if (f.nvars != waring_vars(f.degree))
    throw usage_error("WrongVariableCount", "degree " + std::to_string(f.degree) + " needs " +
                                                std::to_string(waring_vars(f.degree)) +
                                                " variables, got " + std::to_string(f.nvars));
  WaringResult result;

  if (prob.q == 0) {
    auto r = solve_reduced(f, opt);
    result.trace = r.trace;
    result.solution = std::move(r.solution);
    result.solution.certificate = certify(f.poly, result.solution, Rational(0), opt.certify);
    result.route = "homogeneous";
    return result;
  }

  result.trace = reduce_steps(f, f.degree - 4);
  const auto& trace = result.trace;
  if (trace.zero_form) throw detail::stage_unsolvable("reduce", "the form is identically zero");
  if (form_degree(trace.base_form, 6) != 4)
    throw math_error("DegreeDropFailed", "the base form does not have degree 4");

  PencilConfig cfg = PencilConfig::standard(trace.extras);
  std::vector<Poly> images;
  for (std::size_t i = 0; i < 6; ++i) images.push_back(cfg.u[i] * cfg.var(PencilConfig::t) + cfg.v[i]);
  for (std::size_t e = 0; e < trace.extras.size(); ++e) images.push_back(cfg.var(5 + e));
  auto by_t = coeffs_in_var(compose(trace.base_form, images), PencilConfig::t);
  by_t.resize(5, Poly(cfg.nvars()));
  if (!by_t[0].is_zero() || !by_t[4].is_zero())
    throw math_error("EndpointNotZero", "the base form does not vanish on both primitive families");
  CubicCoeffs cs{by_t[3], by_t[2], by_t[1], Poly(cfg.nvars())};
  if (cs.S1.is_zero()) throw detail::stage_unsolvable("T3", "the cubic coefficient vanishes");

  CDSolution cd;
  try {
    cd = solve_cd(cs, cfg);
  } catch (const Error& e) {
    if (e.category() == Error::Category::usage) throw;
    throw detail::stage_unsolvable("T3/T2", e.what());
  }

  // Embed the base multiplier K (over y, extras) into the pencil ambient.
  std::vector<std::size_t> to_pencil(trace.base_ambient.size(), drop_var);
  for (std::size_t e = 0; e < trace.extras.size(); ++e) to_pencil[6 + e] = 5 + e;
  Poly K = remap_vars(trace.base_multiplier(), cfg.nvars(), to_pencil);

  const std::vector<std::size_t> cdv{PencilConfig::c, PencilConfig::d};
  const int D1 = std::max(cs.S3.degree_in(cdv), 0);
  Poly T1h = detail::homogenize_cd(cs.S3, D1, cd.c_num, cd.d_num, cd.den);
  if (T1h.is_zero()) throw detail::stage_unsolvable("T1", "the linear coefficient vanishes");
  // t = q Den^D1 / (K T1h); y_i = (u_i q Den^(D1+1) + V_i K T1h) / (K T1h Den).
  Poly den_pow = cd.den.pow(static_cast<unsigned>(D1));
  result.t_num = den_pow;
  result.t_den = K * T1h;
  Poly W = K * T1h * cd.den;
  std::vector<Poly> Y;
  for (std::size_t i = 0; i < 6; ++i) {
    Poly V = detail::homogenize_cd(cfg.v[i], 1, cd.c_num, cd.d_num, cd.den);
    Y.push_back((cfg.u[i] * den_pow * cd.den).scaled(prob.q) + V * K * T1h);
  }
  {
    std::vector<Poly> all = Y;
    all.push_back(W);
    Poly g = poly_gcd(std::span<const Poly>(all));
    if (!g.is_constant()) {
      for (auto& y : Y) y = exact_divide(y, g);
      W = exact_divide(W, g);
    }
  }

  std::vector<std::size_t> free;
  if (cd.free_unknown) free.push_back(*cd.free_unknown);
  std::vector<VarTag> ptags{param_a(), param_b()};
  for (auto u : free) ptags.push_back(cfg.ambient[u]);
  for (const auto& e : trace.extras.tags()) ptags.push_back(e);
  VarList params(ptags);
  auto to_params = [&](const Poly& p) {
    return detail::pencil_to_params(p, cfg, free, params.size());
  };

  ParametricSolution base;
  base.nvars = 6;
  base.params = params;
  for (const auto& y : Y) base.solutions.push_back(to_params(y));
  base.denominator = to_params(W);

  std::vector<Poly> x = lift_fractions(base, trace);
  Poly denom = base.denominator;
  {
    std::vector<Poly*> ptrs;
    for (auto& xi : x) ptrs.push_back(&xi);
    ptrs.push_back(&denom);
    detail::divide_common_content(ptrs);
  }
  ParametricSolution sol = make_solution(params, std::move(x));
  sol.denominator = denom;
  sol.zero_sum = true;
  for (const auto& l : cd.excluded_locus) {
    Poly r = to_params(l);
    if (!r.is_constant()) sol.excluded_locus.push_back(primitive_part(r));
  }
  for (auto& l : stripped_locus(trace, params)) sol.excluded_locus.push_back(std::move(l));

  const std::size_t needed = static_cast<std::size_t>(2 * f.degree - 6);
  if (sol.param_count() < needed)
    throw detail::stage_unsolvable("parameters", "only " + std::to_string(sol.param_count()) +
                                                     " parameters survive, " +
                                                     std::to_string(needed) + " required");
  sol.certificate = certify(f.poly, sol, prob.q, opt.certify);
  result.solution = std::move(sol);
  result.route = "value";
  return result;
}

}  // namespace symdio
