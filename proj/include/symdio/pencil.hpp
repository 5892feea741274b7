#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symdio/gcd.hpp"
#include "symdio/symfunc.hpp"
#include "symdio/verify.hpp"

namespace symdio {

/// x_i = u_i t + v_i with u = (a,-a,b,-b,1,-1) and v = (-1,c,-c,d,-d,1).
/// Ambient: t, a, b, c, d, then any extra symbols the form carries.
struct PencilConfig {
  VarList ambient;
  VarList extras;
  std::vector<Poly> u, v;

  static constexpr std::size_t t = 0, a = 1, b = 2, c = 3, d = 4;

  std::size_t nvars() const { return ambient.size(); }
  Poly var(std::size_t i) const { return Poly::variable(nvars(), i); }
  Poly one() const { return Poly::constant(nvars(), 1); }

  static PencilConfig standard(const VarList& extras = {}) {
    PencilConfig cfg;
    cfg.extras = extras;
    cfg.ambient = VarList({pencil_var(), param_a(), param_b(), unknown_c(), unknown_d()})
                      .concat(extras);
    Poly A = cfg.var(a), B = cfg.var(b), C = cfg.var(c), D = cfg.var(d), one = cfg.one();
    cfg.u = primitive_point<Poly>(6, {A, B}).entries;
    cfg.v = primitive_point<Poly>(6, {C, D}, {1, 2, 3, 4, 5, 0}).entries;
    return cfg;
  }
};

/// S1 t^3 + S2 t^2 + S3 t + S4 after the root t = 0 is divided out.
struct CubicCoeffs {
  Poly S1, S2, S3, S4;
};

/// G is over y1..y6 followed by cfg.extras.
inline Poly build_pencil(const Poly& G, const PencilConfig& cfg) {
  if (G.nvars() != 6 + cfg.extras.size())
    throw usage_error("AmbientMismatch", "pencil needs a form in 6 variables plus its symbols");
  std::vector<Poly> images;
  for (std::size_t i = 0; i < 6; ++i) images.push_back(cfg.u[i] * cfg.var(PencilConfig::t) + cfg.v[i]);
  for (std::size_t j = 0; j < cfg.extras.size(); ++j) images.push_back(cfg.var(5 + j));
  Poly P = compose(G, images);
  auto by_t = coeffs_in_var(P, PencilConfig::t);
  if (!by_t[0].is_zero())
    throw math_error("EndpointNotZero", "the form does not vanish on (-1,c,-c,d,-d,1)");
  if (by_t.size() > 5)
    throw math_error("EndpointNotZero", "the form does not vanish on (a,-a,b,-b,1,-1)");
  return P;
}

inline CubicCoeffs extract_cubic(const Poly& pencil, const PencilConfig& cfg) {
  Poly t = cfg.var(PencilConfig::t);
  auto by_t = coeffs_in_var(exact_divide(pencil, t), PencilConfig::t);
  if (by_t.size() > 4) throw math_error("EndpointNotZero", "pencil has degree above 4 in t");
  by_t.resize(4, Poly(cfg.nvars()));
  return {by_t[3], by_t[2], by_t[1], by_t[0]};
}

/// c = c_num / den and d = d_num / den over the point parameters. The raw
/// formula for the first eliminated unknown is kept for inspection:
/// c = c_formula_num / c_formula_den in terms of (a, b, d).
struct CDSolution {
  Poly c_num, d_num, den;
  Poly c_formula_num, c_formula_den;
  bool solved_for_d = false;
  std::optional<std::size_t> free_unknown;  // set when S2 vanishes on the line S1 = 0
  std::vector<Poly> excluded_locus;
};

namespace detail {

struct LinearParts {
  Poly alpha, beta, gamma;  // S = alpha*x + beta*y + gamma
};

inline LinearParts split_linear(const Poly& S, std::size_t x, std::size_t y) {
  auto bx = coeffs_in_var(S, x);
  bx.resize(2, Poly(S.nvars()));
  auto by = coeffs_in_var(bx[0], y);
  by.resize(2, Poly(S.nvars()));
  return {bx[1], by[1], by[0]};
}

/// Divides a tuple by its polynomial gcd and rational content; the first
/// entry ends with a positive leading coefficient.
inline void normalize_tuple(std::vector<Poly*> ps) {
  std::vector<Poly> nz;
  for (auto* p : ps)
    if (!p->is_zero()) nz.push_back(*p);
  if (nz.empty()) return;
  Poly g = poly_gcd(std::span<const Poly>(nz));
  if (!g.is_constant())
    for (auto* p : ps) *p = exact_divide(*p, g);
  Integer cg = 0, cl = 1;
  for (auto* p : ps)
    for (const auto& c : p->raw_coeffs()) {
      cg = gcd(cg, c.get_num());
      cl = lcm(cl, c.get_den());
    }
  Rational s = make_rational(cl, cg);
  if (!ps.front()->is_zero() && ps.front()->leading_coeff() < 0) s = -s;
  for (auto* p : ps) *p = p->scaled(s);
}

/// Writes the degree-D polynomial S(c, d) as Den^D * S(Cn/Den, Dn/Den).
inline Poly homogenize_cd(const Poly& S, int D, const Poly& Cn, const Poly& Dn, const Poly& Den) {
  const std::size_t n = S.nvars();
  std::vector<std::size_t> cd{PencilConfig::c, PencilConfig::d};
  std::map<std::size_t, Poly> sub{{PencilConfig::c, Cn}, {PencilConfig::d, Dn}};
  Poly acc(n);
  Poly den_pow = Poly::constant(n, 1);
  std::vector<Poly> den_pows{den_pow};
  for (int k = 1; k <= D; ++k) den_pows.push_back(den_pows.back() * Den);
  for (int k = 0; k <= D; ++k) {
    Poly part = homogeneous_part(S, cd, k);
    if (part.is_zero()) continue;
    acc += substitute(part, sub) * den_pows[D - k];
  }
  return acc;
}

struct LineParam {
  Poly Cn, Dn, Den;
  std::size_t free;
};

/// When S2 is singular at (1, 1) and splits off a rational line through it,
/// each such line as c = Cn/Den, d = Dn/Den with one of c, d free.
inline std::vector<LineParam> conic_components(const Poly& S2, const PencilConfig& cfg) {
  const std::size_t c = PencilConfig::c, d = PencilConfig::d;
  const std::vector<std::size_t> cd{c, d};
  Poly one = cfg.one(), C = cfg.var(c), D = cfg.var(d);
  Poly shifted = substitute(S2, {{c, C + one}, {d, D + one}});
  if (homogeneous_part(shifted, cd, 2) != shifted) return {};
  auto bc = coeffs_in_var(shifted, c);
  bc.resize(3, Poly(cfg.nvars()));
  Poly alpha = bc[2];
  Poly beta = bc[1].is_zero() ? Poly(cfg.nvars()) : exact_divide(bc[1], D);
  Poly gamma = bc[0].is_zero() ? Poly(cfg.nvars()) : exact_divide(bc[0], D.pow(2));
  std::vector<LineParam> out;
  // (c-1) * (alpha (c-1) + beta (d-1)) when gamma = 0.
  if (gamma.is_zero() && !beta.is_zero())
    out.push_back({beta * C, beta - alpha * (C - one), beta, c});
  // (d-1) * (beta (c-1) + gamma (d-1)) when alpha = 0.
  if (alpha.is_zero() && !beta.is_zero())
    out.push_back({beta - gamma * (D - one), beta * D, beta, d});
  if (beta.is_zero() && (alpha.is_zero() || gamma.is_zero()))
    out.push_back(alpha.is_zero() ? LineParam{C, one, one, c} : LineParam{one, D, one, d});
  return out;
}

}  // namespace detail

/// Annihilates S1 (linear in c, d) and S2 (quadratic, with the known root
/// d = 1 on the line S1 = 0).
inline CDSolution solve_cd(const CubicCoeffs& cs, const PencilConfig& cfg) {
  const std::vector<std::size_t> cd{PencilConfig::c, PencilConfig::d};
  if (cs.S1.degree_in(cd) > 1) throw math_error("NotLinear", "S1 has degree above 1 in c, d");
  if (cs.S2.degree_in(cd) > 2) throw math_error("NotQuadratic", "S2 has degree above 2 in c, d");

  std::size_t x = PencilConfig::c, y = PencilConfig::d;
  auto lin = detail::split_linear(cs.S1, x, y);
  bool swapped = false;
  if (lin.alpha.is_zero()) {
    std::swap(x, y);
    swapped = true;
    lin = detail::split_linear(cs.S1, x, y);
    if (lin.alpha.is_zero())
      throw math_error("DegenerateLinear", "S1 does not involve c or d");
  }
  const Poly& alpha = lin.alpha;
  Poly ylin = lin.beta * cfg.var(y) + lin.gamma;  // x = -ylin / alpha

  // alpha^2 * S2(x = -ylin/alpha, y), a quadratic in y.
  auto s = coeffs_in_var(cs.S2, x);
  s.resize(3, Poly(cfg.nvars()));
  Poly Q = s[0] * alpha * alpha - s[1] * alpha * ylin + s[2] * ylin * ylin;
  CDSolution out;
  out.solved_for_d = swapped;
  Poly den, xn, yn;
  if (Q.is_zero()) {
    // S2 vanishes along the whole line; y stays free.
    den = alpha;
    xn = -ylin;
    yn = alpha * cfg.var(y);
    out.free_unknown = y;
    out.excluded_locus = {primitive_part(alpha)};
  } else {
    auto cof = try_divide(Q, cfg.var(y) - cfg.one());
    if (!cof)
      throw math_error("KnownRootMissing", std::string("(") + (swapped ? "c" : "d") +
                                               " - 1) does not divide the eliminant");
    auto lm = coeffs_in_var(*cof, y);
    if (lm.size() > 2) throw math_error("NotQuadratic", "eliminant has degree above 2");
    lm.resize(2, Poly(cfg.nvars()));
    const Poly& lambda = lm[1];
    const Poly& mu = lm[0];
    if (lambda.is_zero())
      throw math_error("DegenerateLinear", "cofactor of the known root is constant in d");
    // y = -mu/lambda, x = (beta*mu - gamma*lambda) / (alpha*lambda).
    den = alpha * lambda;
    xn = lin.beta * mu - lin.gamma * lambda;
    yn = -(mu * alpha);
    out.excluded_locus = {primitive_part(alpha), primitive_part(lambda)};
  }
  detail::normalize_tuple({&den, &xn, &yn});
  out.den = den;
  out.c_num = swapped ? yn : xn;
  out.d_num = swapped ? xn : yn;

  Poly fnum = -ylin, fden = alpha;
  Poly g = poly_gcd(fnum, fden);
  if (!g.is_constant()) {
    fnum = exact_divide(fnum, g);
    fden = exact_divide(fden, g);
  }
  Rational k = content(fden);
  if (fden.leading_coeff() < 0) k = -k;
  out.c_formula_num = fnum.scaled(1 / k);
  out.c_formula_den = fden.scaled(1 / k);
  return out;
}

/// What the pencil produced, before certification: x_i = numerators[i] /
/// denominator in the pencil ambient (t, c and d eliminated unless
/// `free_unknowns` keeps them).
struct PencilAssembly {
  std::vector<Poly> numerators;
  Poly denominator;
  std::vector<Poly> excluded_locus;
  std::vector<std::size_t> free_unknowns;  // subset of {c, d}
  std::string branch;
};

/// Substitutes c = Cn/Den, d = Dn/Den, solves the remaining linear
/// equation S3 t + S4 = 0 and brings x = u t + v to a common denominator.
/// `homogeneous` allows dropping the denominator entirely.
inline PencilAssembly assemble_from_cd(const CubicCoeffs& cs, const PencilConfig& cfg,
                                       const Poly& Cn, const Poly& Dn, const Poly& Den,
                                       bool homogeneous) {
  const std::vector<std::size_t> cd{PencilConfig::c, PencilConfig::d};
  const int D3 = std::max(cs.S3.degree_in(cd), 0);
  const int D4 = std::max(cs.S4.degree_in(cd), 0);
  Poly S3h = detail::homogenize_cd(cs.S3, D3, Cn, Dn, Den);
  Poly S4h = detail::homogenize_cd(cs.S4, D4, Cn, Dn, Den);
  std::vector<Poly> V;
  for (const auto& vi : cfg.v) V.push_back(detail::homogenize_cd(vi, 1, Cn, Dn, Den));

  PencilAssembly out;
  std::vector<std::pair<Poly, Poly>> fractions;
  if (S3h.is_zero()) {
    if (!S4h.is_zero())
      throw math_error("StageUnsolvable", "linear stage: S3 vanishes but S4 does not");
    // The pencil vanishes for every t; take t = 1.
    out.branch = "pencil-identically-zero";
    for (std::size_t i = 0; i < 6; ++i) fractions.emplace_back(cfg.u[i] * Den + V[i], Den);
  } else {
    Poly g0 = poly_gcd(S3h, S4h);
    Poly S3r = S3h, S4r = S4h;
    if (!g0.is_constant()) {
      S3r = exact_divide(S3h, g0);
      S4r = S4h.is_zero() ? S4h : exact_divide(S4h, g0);
    }
    // t = -S4r Den^D3 / (S3r Den^D4); x_i = u_i t + V_i / Den.
    const int m = std::min(D3 + 1, D4);
    auto den_pow = [&](int k) { return Den.pow(static_cast<unsigned>(k)); };
    Poly common = S3r * den_pow(D4 + 1 - m);
    Poly tpart = S4r * den_pow(D3 + 1 - m);
    Poly vpart_scale = S3r * den_pow(D4 - m);
    for (std::size_t i = 0; i < 6; ++i)
      fractions.emplace_back(V[i] * vpart_scale - cfg.u[i] * tpart, common);
    out.excluded_locus.push_back(primitive_part(S3r));
    out.branch = "linear-t";
  }
  auto cleared = clear_denominators_tracked(fractions);
  if (homogeneous) {
    out.numerators = std::move(cleared.numerators);
    out.denominator = cfg.one();
  } else {
    // x = numerators * mult_den / mult_num.
    for (auto& x : cleared.numerators) out.numerators.push_back(x * cleared.mult_den);
    out.denominator = cleared.mult_num;
  }
  return out;
}

struct SolveOptions {
  CertifyOptions certify;
};

/// Result of the 6-variable pencil stage, certified against G.
struct PencilResult {
  ParametricSolution solution;
  std::string branch;
  std::optional<CDSolution> cd;
  std::optional<CubicCoeffs> cubic;
};

namespace detail {

/// True when the values split into pairs {v, -v}.
inline bool is_paired(std::vector<Rational> vals) {
  std::vector<Rational> neg;
  for (const auto& v : vals) neg.push_back(-v);
  std::sort(vals.begin(), vals.end());
  std::sort(neg.begin(), neg.end());
  return vals == neg;
}

/// A tuple is degenerate when it is a permuted primitive pattern at every
/// probe point (or vanishes there).
inline bool is_degenerate(const ParametricSolution& s) {
  const std::size_t k = s.params.size();
  std::vector<std::vector<Rational>> probes;
  std::vector<Rational> base(k, 5);
  if (k > 0) base[0] = 2;
  if (k > 1) base[1] = 3;
  for (std::size_t i = 2; i < k; ++i) base[i] = Rational(static_cast<long>(2 * i + 3));
  probes.push_back(base);
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<long> dist(-97, 97);
  for (int r = 0; r < 4; ++r) {
    std::vector<Rational> p(k);
    for (auto& x : p) x = make_rational(Integer(dist(rng)), Integer(1 + (dist(rng) & 7)));
    probes.push_back(p);
  }
  for (const auto& p : probes) {
    if (evaluate(s.denominator, p) == 0) continue;
    std::vector<Rational> vals;
    for (const auto& x : s.solutions) vals.push_back(evaluate(x, p));
    if (!is_paired(vals)) return false;
  }
  return true;
}

inline Poly pencil_to_params(const Poly& p, const PencilConfig& cfg,
                             const std::vector<std::size_t>& keep_unknowns, std::size_t nparams) {
  std::vector<std::size_t> idx(cfg.nvars(), drop_var);
  std::size_t next = 0;
  idx[PencilConfig::a] = next++;
  idx[PencilConfig::b] = next++;
  for (auto u : keep_unknowns) idx[u] = next++;
  for (std::size_t j = 0; j < cfg.extras.size(); ++j) idx[5 + j] = next++;
  return remap_vars(p, nparams, idx);
}

}  // namespace detail

/// The pencil construction on a quintic G(y1..y6; extras) vanishing on both
/// primitive families. For forms with extra symbols (reduction parameters)
/// the output keeps an explicit denominator because G is only jointly
/// homogeneous in (y, extras).
inline PencilResult solve_pencil(const Poly& G, const VarList& extras, const SolveOptions& opt,
                                 bool certify_result = true) {
  PencilConfig cfg = PencilConfig::standard(extras);
  const bool homogeneous = extras.size() == 0;
  VarList form_ambient = VarList::form_vars(6).concat(extras);
  PencilResult result;

  auto finish = [&](PencilAssembly as, const std::vector<Poly>& locus) {
    std::vector<VarTag> ptags{param_a(), param_b()};
    for (auto u : as.free_unknowns) ptags.push_back(cfg.ambient[u]);
    for (const auto& e : extras.tags()) ptags.push_back(e);
    VarList params(ptags);
    std::vector<Poly> xs;
    for (const auto& x : as.numerators)
      xs.push_back(detail::pencil_to_params(x, cfg, as.free_unknowns, params.size()));
    ParametricSolution sol = make_solution(params, std::move(xs));
    sol.denominator = detail::pencil_to_params(as.denominator, cfg, as.free_unknowns, params.size());
    for (const auto& l : locus) {
      Poly r = detail::pencil_to_params(l, cfg, as.free_unknowns, params.size());
      if (!r.is_constant()) sol.excluded_locus.push_back(primitive_part(r));
    }
    for (const auto& l : as.excluded_locus) {
      Poly r = detail::pencil_to_params(l, cfg, as.free_unknowns, params.size());
      if (!r.is_constant() && r.size() <= 4096) sol.excluded_locus.push_back(primitive_part(r));
    }
    sol.zero_sum = true;
    result.branch = as.branch;
    if (result.branch != "tautological" && detail::is_degenerate(sol))
      throw math_error("DegenerateSolution",
                       "the constructed tuple is a permuted primitive pattern");
    if (certify_result) sol.certificate = certify(G, form_ambient, sol, std::nullopt, opt.certify);
    result.solution = std::move(sol);
    return result;
  };

  Poly P = build_pencil(G, cfg);
  if (P.is_zero()) {
    PencilAssembly as;
    as.numerators = cfg.u;
    as.denominator = cfg.one();
    as.branch = "tautological";
    return finish(as, {});
  }
  CubicCoeffs cs = extract_cubic(P, cfg);
  result.cubic = cs;
  const Poly C = cfg.var(PencilConfig::c), D = cfg.var(PencilConfig::d), one = cfg.one();

  if (!cs.S1.is_zero()) {
    CDSolution cd = solve_cd(cs, cfg);
    result.cd = cd;
    auto as = assemble_from_cd(cs, cfg, cd.c_num, cd.d_num, cd.den, homogeneous);
    if (cd.free_unknown) {
      as.free_unknowns = {*cd.free_unknown};
      as.branch = "line-free";
    }
    return finish(std::move(as), cd.excluded_locus);
  }

  if (!cs.S2.is_zero()) {
    // Only S2 to annihilate: intersect the conic S2 = 0 with lines through
    // its known point (1, 1), c - 1 = k (d - 1).
    const std::vector<std::size_t> cd{PencilConfig::c, PencilConfig::d};
    if (cs.S2.degree_in(cd) > 2) throw math_error("NotQuadratic", "S2 has degree above 2");
    std::string last_error;
    // A component of the conic through (1, 1) is a line along which S2
    // vanishes identically; follow it with one unknown left free.
    for (auto& [Cn, Dn, Den, free] : detail::conic_components(cs.S2, cfg)) {
      try {
        auto as = assemble_from_cd(cs, cfg, Cn, Dn, Den, homogeneous);
        as.free_unknowns = {free};
        as.branch = "conic-component";
        return finish(std::move(as), {primitive_part(Den)});
      } catch (const Error& e) {
        if (e.name() != "StageUnsolvable" && e.name() != "DegenerateSolution") throw;
        last_error = e.what();
      }
    }
    for (Rational k : {Rational(2), Rational(-1), Rational(3), make_rational(1, 2)}) {
      Poly line_c = one + (D - one).scaled(k);
      Poly Q = substitute(cs.S2, {{PencilConfig::c, line_c}});
      if (Q.is_zero()) continue;
      auto cof = try_divide(Q, D - one);
      if (!cof) throw math_error("KnownRootMissing", "(d - 1) does not divide S2 on the line");
      auto lm = coeffs_in_var(*cof, PencilConfig::d);
      lm.resize(2, Poly(cfg.nvars()));
      if (lm[1].is_zero()) continue;
      // d = -mu/lambda, c = 1 + k (d - 1).
      Poly Den = lm[1], Dn = -lm[0];
      Poly Cn = Den + (Dn - Den).scaled(k);
      detail::normalize_tuple({&Den, &Cn, &Dn});
      try {
        auto as = assemble_from_cd(cs, cfg, Cn, Dn, Den, homogeneous);
        as.branch = "conic-line";
        return finish(std::move(as), {primitive_part(lm[1])});
      } catch (const Error& e) {
        if (e.name() != "StageUnsolvable" && e.name() != "DegenerateSolution") throw;
        last_error = e.what();
      }
    }
    throw math_error("StageUnsolvable", "conic stage: no usable line through (1,1)" +
                                            (last_error.empty() ? "" : "; " + last_error));
  }

  // S1 = S2 = 0: c and d stay free, t = -S4/S3.
  auto as = assemble_from_cd(cs, cfg, C, D, one, homogeneous);
  as.free_unknowns = {PencilConfig::c, PencilConfig::d};
  as.branch = "free-cd";
  return finish(std::move(as), {});
}

/// Symmetric quintic in x1..x6.
inline PencilResult solve_quintic(const SymmetricForm& f, const SolveOptions& opt = {}) {
  if (f.nvars != 6 || f.degree != 5)
    throw usage_error("NotSextenaryQuintic", "expected a quintic form in 6 variables");
  if (!f.symmetry_checked) throw math_error("NotSymmetric", "the quintic is not symmetric");
  auto canon = quintic_canonical(f);
  if (canon.A1 == 0 && canon.A2 == 0) {
    PencilConfig cfg = PencilConfig::standard();
    VarList params({param_a(), param_b()});
    std::vector<Poly> xs;
    for (const auto& ui : cfg.u) xs.push_back(detail::pencil_to_params(ui, cfg, {}, 2));
    ParametricSolution sol = make_solution(params, std::move(xs));
    sol.zero_sum = true;
    sol.certificate = certify(f.poly, sol, std::nullopt, opt.certify);
    PencilResult r;
    r.solution = std::move(sol);
    r.branch = "tautological";
    return r;
  }
  return solve_pencil(f.poly, VarList{}, opt);
}

}  // namespace symdio
