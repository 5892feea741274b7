#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "symdio/reduce.hpp"
#include "symdio/solution.hpp"
#include "symdio/symfunc.hpp"

namespace symdio {

using Json = nlohmann::json;

namespace detail {

inline Error bad_json(const std::string& what) { return usage_error("BadJson", what); }

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) throw bad_json(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw bad_json(std::string("missing field '") + key + "'");
  return *it;
}

inline std::size_t as_count(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw bad_json(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

inline Rational as_rational(const Json& j) {
  if (!j.is_string()) throw bad_json("rationals are written as \"num/den\" strings");
  return parse_rational(j.get<std::string>());
}

inline const Json& as_array(const Json& j, const char* what) {
  if (!j.is_array()) throw bad_json(std::string(what) + " must be an array");
  return j;
}

}  // namespace detail

// ---- Poly --------------------------------------------------------------

inline Json poly_to_json(const Poly& p) {
  Json terms = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto e = p.exponents(i);
    terms.push_back({{"e", std::vector<unsigned>(e.begin(), e.end())}, {"c", to_string(p.coeff(i))}});
  }
  return {{"nvars", p.nvars()}, {"terms", std::move(terms)}};
}

inline Poly poly_from_json(const Json& j) {
  const std::size_t n = detail::as_count(detail::member(j, "nvars"), "nvars");
  std::vector<std::pair<ExponentVector, Rational>> terms;
  for (const auto& t : detail::as_array(detail::member(j, "terms"), "terms")) {
    const auto& e = detail::as_array(detail::member(t, "e"), "e");
    if (e.size() != n) throw detail::bad_json("exponent vector length differs from nvars");
    ExponentVector ev;
    for (const auto& x : e) ev.push_back(detail::checked_exponent(detail::as_count(x, "exponent")));
    Rational c = detail::as_rational(detail::member(t, "c"));
    if (c == 0) throw detail::bad_json("zero coefficient stored");
    terms.emplace_back(std::move(ev), c);
  }
  Poly p = Poly::from_terms(n, terms);
  if (p.size() != terms.size()) throw detail::bad_json("repeated exponent vector");
  return p;
}

// ---- PowerSumExpr ------------------------------------------------------

inline Json to_json(const PowerSumExpr& e) {
  Json gens = Json::array();
  for (const auto& g : e.gens) gens.push_back({{"kind", g.kind == GenKind::p ? "p" : "q"}, {"k", g.k}});
  return {{"gens", std::move(gens)}, {"expr", poly_to_json(e.expr)}};
}

inline PowerSumExpr power_sum_expr_from_json(const Json& j) {
  PowerSumExpr e;
  for (const auto& g : detail::as_array(detail::member(j, "gens"), "gens")) {
    const auto& kind = detail::member(g, "kind");
    if (kind != "p" && kind != "q") throw detail::bad_json("generator kind must be \"p\" or \"q\"");
    std::size_t k = detail::as_count(detail::member(g, "k"), "k");
    if (k == 0) throw detail::bad_json("generator degree must be positive");
    e.gens.push_back({kind == "p" ? GenKind::p : GenKind::q, static_cast<unsigned>(k)});
  }
  e.expr = poly_from_json(detail::member(j, "expr"));
  if (e.expr.nvars() != e.gens.size()) throw detail::bad_json("expr ambient differs from gens");
  return e;
}

// ---- Certificate and ParametricSolution --------------------------------

inline Json to_json(const Certificate& c) {
  Json j = {{"kind", c.kind == Certificate::Kind::zero ? "zero" : "value"},
            {"method", c.method == Certificate::Method::symbolic ? "symbolic" : "randomized"},
            {"samples", c.samples}};
  if (c.kind == Certificate::Kind::value) j["q"] = to_string(c.q);
  if (c.method == Certificate::Method::randomized) {
    j["seed"] = c.seed;
    Json pts = Json::array();
    for (const auto& pt : c.sample_points) {
      Json row = Json::array();
      for (const auto& v : pt) row.push_back(to_string(v));
      pts.push_back(std::move(row));
    }
    j["sample_points"] = std::move(pts);
  }
  Json locus = Json::array();
  for (const auto& l : c.excluded_locus) locus.push_back(poly_to_json(l));
  j["excluded_locus"] = std::move(locus);
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  Certificate c;
  const auto& kind = detail::member(j, "kind");
  if (kind == "zero")
    c.kind = Certificate::Kind::zero;
  else if (kind == "value")
    c.kind = Certificate::Kind::value;
  else
    throw detail::bad_json("certificate kind must be \"zero\" or \"value\"");
  if (c.kind == Certificate::Kind::value) c.q = detail::as_rational(detail::member(j, "q"));
  const auto& method = detail::member(j, "method");
  if (method == "symbolic")
    c.method = Certificate::Method::symbolic;
  else if (method == "randomized")
    c.method = Certificate::Method::randomized;
  else
    throw detail::bad_json("certificate method must be \"symbolic\" or \"randomized\"");
  c.samples = detail::as_count(detail::member(j, "samples"), "samples");
  if (c.method == Certificate::Method::randomized) {
    c.seed = detail::member(j, "seed").get<std::uint64_t>();
    for (const auto& row : detail::as_array(detail::member(j, "sample_points"), "sample_points")) {
      std::vector<Rational> pt;
      for (const auto& v : detail::as_array(row, "sample point")) pt.push_back(detail::as_rational(v));
      c.sample_points.push_back(std::move(pt));
    }
  }
  if (j.contains("excluded_locus"))
    for (const auto& l : detail::as_array(j["excluded_locus"], "excluded_locus"))
      c.excluded_locus.push_back(poly_from_json(l));
  return c;
}

inline Json to_json(const ParametricSolution& s) {
  Json sols = Json::array(), locus = Json::array();
  for (const auto& x : s.solutions) sols.push_back(poly_to_json(x));
  for (const auto& l : s.excluded_locus) locus.push_back(poly_to_json(l));
  Json j = {{"nvars", s.nvars},
            {"params", s.params.names()},
            {"solutions", std::move(sols)},
            {"denominator", poly_to_json(s.denominator)},
            {"excluded_locus", std::move(locus)},
            {"zero_sum", s.zero_sum}};
  if (s.certificate) j["certificate"] = to_json(*s.certificate);
  return j;
}

/// "denominator" and "zero_sum" are optional on input (1 and false).
inline ParametricSolution solution_from_json(const Json& j) {
  std::vector<VarTag> tags;
  for (const auto& name : detail::as_array(detail::member(j, "params"), "params")) {
    if (!name.is_string()) throw detail::bad_json("parameter names must be strings");
    tags.push_back(parse_param_name(name.get<std::string>()));
  }
  VarList params(std::move(tags));
  std::vector<Poly> xs;
  for (const auto& x : detail::as_array(detail::member(j, "solutions"), "solutions")) {
    xs.push_back(poly_from_json(x));
    if (xs.back().nvars() != params.size())
      throw detail::bad_json("solution ambient differs from the parameter list");
  }
  const std::size_t n = detail::as_count(detail::member(j, "nvars"), "nvars");
  if (n != xs.size()) throw detail::bad_json("nvars differs from the number of solutions");
  ParametricSolution s = make_solution(std::move(params), std::move(xs));
  if (j.contains("denominator")) {
    s.denominator = poly_from_json(j["denominator"]);
    if (s.denominator.nvars() != s.params.size() || s.denominator.is_zero())
      throw detail::bad_json("denominator must be a nonzero polynomial in the parameters");
  }
  if (j.contains("excluded_locus"))
    for (const auto& l : detail::as_array(j["excluded_locus"], "excluded_locus")) {
      s.excluded_locus.push_back(poly_from_json(l));
      if (s.excluded_locus.back().nvars() != s.params.size())
        throw detail::bad_json("excluded locus ambient differs from the parameter list");
    }
  if (j.contains("zero_sum")) s.zero_sum = j["zero_sum"].get<bool>();
  if (j.contains("certificate")) s.certificate = certificate_from_json(j["certificate"]);
  return s;
}

// ---- ReductionTrace ----------------------------------------------------

inline Json to_json(const ReductionTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"j", s.j},
                     {"params", {var_name(s.c_tag()), var_name(s.d_tag())}},
                     {"in_vars", s.in_vars},
                     {"out_vars", s.out_vars}});
  Json stripped = Json::array();
  for (const auto& [factor, k] : t.stripped)
    stripped.push_back({{"factor", poly_to_json(factor)}, {"multiplicity", k}});
  return {{"source_vars", t.source.nvars},
          {"degree", t.source.degree},
          {"used_vars", t.used_vars},
          {"steps", std::move(steps)},
          {"base_ambient", t.base_ambient.names()},
          {"base_form", poly_to_json(t.base_form)},
          {"base_scale", to_string(t.base_scale)},
          {"stripped", std::move(stripped)},
          {"zero_form", t.zero_form}};
}

/// Rebuilds everything but the source form, which the trace does not carry.
inline ReductionTrace trace_from_json(const Json& j) {
  ReductionTrace t;
  t.source.nvars = detail::as_count(detail::member(j, "source_vars"), "source_vars");
  t.source.degree = detail::member(j, "degree").get<int>();
  t.used_vars = detail::as_count(detail::member(j, "used_vars"), "used_vars");
  std::vector<VarTag> extras;
  for (const auto& s : detail::as_array(detail::member(j, "steps"), "steps")) {
    auto step = QuadrupleStep::make(static_cast<unsigned>(detail::as_count(detail::member(s, "j"), "j")),
                                    detail::as_count(detail::member(s, "in_vars"), "in_vars"));
    if (detail::as_count(detail::member(s, "out_vars"), "out_vars") != step.out_vars)
      throw detail::bad_json("out_vars must be half of in_vars");
    extras.push_back(step.c_tag());
    extras.push_back(step.d_tag());
    t.steps.push_back(step);
  }
  t.extras = VarList(extras);
  std::vector<VarTag> ambient;
  for (const auto& name : detail::as_array(detail::member(j, "base_ambient"), "base_ambient"))
    ambient.push_back(parse_param_name(name.get<std::string>()));
  t.base_ambient = VarList(std::move(ambient));
  t.base_form = poly_from_json(detail::member(j, "base_form"));
  if (t.base_form.nvars() != t.base_ambient.size())
    throw detail::bad_json("base_form ambient differs from base_ambient");
  t.base_scale = detail::as_rational(detail::member(j, "base_scale"));
  for (const auto& s : detail::as_array(detail::member(j, "stripped"), "stripped"))
    t.stripped.emplace_back(poly_from_json(detail::member(s, "factor")),
                            static_cast<unsigned>(detail::as_count(detail::member(s, "multiplicity"),
                                                                   "multiplicity")));
  t.zero_form = detail::member(j, "zero_form").get<bool>();
  return t;
}

/// Sorted keys with a two-space indent, so equal values give equal bytes.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace symdio
