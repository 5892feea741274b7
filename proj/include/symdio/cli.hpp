#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "symdio/format.hpp"
#include "symdio/json.hpp"
#include "symdio/parse.hpp"
#include "symdio/reduce.hpp"
#include "symdio/verify.hpp"
#include "symdio/waring.hpp"

namespace symdio::cli {

/// Exit statuses of the command-line tool.
enum Exit : int { ok = 0, usage = 1, degenerate = 2 };

enum class Emit { text, json, latex };

struct Options {
  std::string form;
  std::string q;
  std::string solution;
  std::vector<std::string> assignments;  // name=value
  int params = -1;
  std::string emit = "text";
  std::string out;
  std::uint64_t seed = 1;
  double budget = 5e6;
};

namespace detail {

inline Emit emit_mode(const Options& o) {
  if (o.emit == "json") return Emit::json;
  if (o.emit == "latex") return Emit::latex;
  return Emit::text;
}

inline CertifyOptions certify_options(const Options& o) {
  CertifyOptions c;
  c.seed = o.seed;
  c.budget = o.budget;
  return c;
}

inline std::vector<std::string> generator_names(const PowerSumExpr& e) {
  std::vector<std::string> names;
  for (const auto& g : e.gens) names.push_back((g.kind == GenKind::p ? "p" : "q") + std::to_string(g.k));
  return names;
}

inline std::string certificate_text(const Certificate& c) {
  std::ostringstream s;
  s << "certificate: " << (c.kind == Certificate::Kind::zero ? "F = 0" : "F = " + to_display(c.q))
    << ", " << (c.method == Certificate::Method::symbolic ? "symbolic" : "randomized");
  if (c.method == Certificate::Method::randomized)
    s << " (" << c.samples << " samples, seed " << c.seed << ")";
  return s.str();
}

inline std::string solution_text(const ParametricSolution& s) {
  const auto names = s.params.names();
  std::ostringstream out;
  out << "parameters:";
  for (const auto& n : names) out << " " << n;
  out << "\n";
  for (std::size_t i = 0; i < s.solutions.size(); ++i)
    out << "x" << i + 1 << " = " << to_text(s.solutions[i], names) << "\n";
  if (!s.is_polynomial()) out << "denominator = " << to_text(s.denominator, names) << "\n";
  if (s.zero_sum) out << "x1 + ... + x" << s.nvars << " = 0\n";
  for (const auto& l : s.excluded_locus) out << "excluded: " << to_text(l, names) << " = 0\n";
  if (s.certificate) out << certificate_text(*s.certificate) << "\n";
  return out.str();
}

inline std::string solution_latex(const ParametricSolution& s) {
  std::vector<std::string> names;
  for (const auto& n : s.params.names()) names.push_back(n);
  std::ostringstream out;
  out << "\\[\n\\begin{aligned}\n";
  const bool frac = !s.is_polynomial();
  const std::string den = frac ? to_latex(s.denominator, names) : "";
  for (std::size_t i = 0; i < s.solutions.size(); ++i) {
    out << "x_{" << i + 1 << "} &= ";
    if (frac)
      out << "\\frac{" << to_latex(s.solutions[i], names) << "}{" << den << "}";
    else
      out << to_latex(s.solutions[i], names);
    out << (i + 1 < s.solutions.size() ? " \\\\\n" : "\n");
  }
  out << "\\end{aligned}\n\\]\n";
  return out.str();
}

inline std::string render(const ParametricSolution& s, Emit mode) {
  switch (mode) {
    case Emit::json: return dump(to_json(s));
    case Emit::latex: return solution_latex(s);
    case Emit::text: break;
  }
  return solution_text(s);
}

inline void write(const Options& o, const std::string& body, std::ostream& out) {
  if (o.out.empty()) {
    out << body;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw usage_error("FileNotWritable", "cannot write '" + o.out + "'");
  f << body;
}

inline ParametricSolution read_solution(const std::string& path) {
  std::string body = symdio::detail::read_file(path);
  try {
    return solution_from_json(Json::parse(body));
  } catch (const Json::exception& e) {
    throw usage_error("BadJson", path + ": " + e.what());
  }
}

inline std::vector<std::pair<VarTag, Rational>> parse_assignments(const std::vector<std::string>& raw) {
  std::vector<std::pair<VarTag, Rational>> out;
  for (const auto& a : raw) {
    auto eq = a.find('=');
    if (eq == std::string::npos) throw usage_error("BadAssignment", "expected name=value, got '" + a + "'");
    out.emplace_back(parse_param_name(a.substr(0, eq)), parse_rational(a.substr(eq + 1)));
  }
  return out;
}

/// Fixes every parameter past the first k, trying value sets 2, 3, 5, ...
/// shifted until the excluded locus is avoided.
inline ParametricSolution reduce_params(const ParametricSolution& s, std::size_t k, const Poly& form,
                                        const CertifyOptions& copt) {
  if (k >= s.param_count()) {
    if (k > s.param_count())
      throw usage_error("TooManyParameters", "the solution has only " +
                                                 std::to_string(s.param_count()) + " parameters");
    return s;
  }
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  const std::size_t nfix = s.param_count() - k;
  const std::size_t attempts = std::size(primes) - nfix;
  for (std::size_t shift = 0; shift <= attempts; ++shift) {
    std::vector<std::pair<VarTag, Rational>> fix;
    for (std::size_t i = 0; i < nfix; ++i) fix.emplace_back(s.params[k + i], Rational(primes[shift + i]));
    try {
      return specialize(s, fix, form, VarList::form_vars(static_cast<unsigned>(form.nvars())), copt);
    } catch (const Error& e) {
      if (e.name() != "ExcludedLocusHit" || shift == attempts) throw;
    }
  }
  throw math_error("ExcludedLocusHit", "no admissible specialization found");
}

inline Error degenerate_solution(const std::string& why) { return math_error("DegenerateSolution", why); }

// ---- commands -----------------------------------------------------------

inline int analyze(const Options& o, std::ostream& out) {
  SymmetricForm f = load_form(o.form);
  Json j = {{"nvars", f.nvars}, {"degree", f.degree}, {"symmetric", f.symmetry_checked}};
  std::optional<PowerSumExpr> ps;
  std::string ps_note;
  if (f.symmetry_checked) {
    try {
      ps = decompose_power_sums(f);
    } catch (const Error& e) {
      ps_note = e.what();
    }
  }
  std::optional<QuinticCanonical> canon;
  if (ps && f.nvars == 6 && f.degree == 5) canon = quintic_canonical(f);

  const Emit mode = emit_mode(o);
  if (mode == Emit::json) {
    if (ps) j["power_sums"] = to_json(*ps);
    if (!ps_note.empty()) j["power_sums_error"] = ps_note;
    if (canon) j["canonical"] = {{"A1", to_string(canon->A1)}, {"A2", to_string(canon->A2)}};
    write(o, dump(j), out);
    return ok;
  }
  std::ostringstream s;
  if (mode == Emit::latex) {
    s << "\\[\nF = " << (ps ? to_latex(ps->expr, generator_names(*ps)) : to_latex(f.poly, VarList::form_vars(static_cast<unsigned>(f.nvars)).names()))
      << "\n\\]\n";
    if (canon)
      s << "\\[\nA_{1} = " << to_display(canon->A1) << ", \\quad A_{2} = " << to_display(canon->A2)
        << "\n\\]\n";
  } else {
    s << "variables: " << f.nvars << "\n"
      << "degree: " << f.degree << "\n"
      << "symmetric: " << (f.symmetry_checked ? "yes" : "no") << "\n";
    if (ps) s << "power sums: " << to_text(ps->expr, generator_names(*ps)) << "\n";
    if (!ps_note.empty()) s << "power sums: unavailable (" << ps_note << ")\n";
    if (canon) s << "A1 = " << to_display(canon->A1) << "\nA2 = " << to_display(canon->A2) << "\n";
  }
  write(o, s.str(), out);
  return ok;
}

inline int solve(const Options& o, std::ostream& out) {
  SymmetricForm f = load_form(o.form);
  SolveOptions sopt{certify_options(o)};
  auto r = solve_reduced(f, sopt);
  if (r.trace.zero_form)
    throw degenerate_solution("the form vanishes on the reduction subspace; only primitive points result");
  if (r.base.branch == "tautological")
    throw degenerate_solution("the pencil vanishes identically (canonical A1 = A2 = 0); "
                              "only primitive points result");
  ParametricSolution s = std::move(r.solution);
  if (o.params >= 0) s = reduce_params(s, static_cast<std::size_t>(o.params), f.poly, sopt.certify);
  write(o, render(s, emit_mode(o)), out);
  return ok;
}

inline int waring(const Options& o, std::ostream& out) {
  if (o.q.empty()) throw usage_error("MissingValue", "waring needs --q");
  SymmetricForm f = load_form(o.form);
  SolveOptions sopt{certify_options(o)};
  auto r = solve_waring({f, parse_rational(o.q)}, sopt);
  ParametricSolution s = std::move(r.solution);
  if (o.params >= 0) s = reduce_params(s, static_cast<std::size_t>(o.params), f.poly, sopt.certify);
  write(o, render(s, emit_mode(o)), out);
  return ok;
}

inline int verify(const Options& o, std::ostream& out) {
  if (o.solution.empty()) throw usage_error("MissingValue", "verify needs --solution");
  SymmetricForm f = load_form(o.form);
  ParametricSolution s = read_solution(o.solution);
  if (s.nvars != f.nvars)
    throw usage_error("AmbientMismatch", "solution has " + std::to_string(s.nvars) +
                                             " coordinates, form has " + std::to_string(f.nvars));
  std::optional<Rational> q;
  if (!o.q.empty())
    q = parse_rational(o.q);
  else if (s.certificate && s.certificate->kind == Certificate::Kind::value)
    q = s.certificate->q;
  Certificate c = certify(f.poly, s, q, certify_options(o));
  const Emit mode = emit_mode(o);
  if (mode == Emit::json)
    write(o, dump(to_json(c)), out);
  else
    write(o, certificate_text(c) + "\n", out);
  return ok;
}

inline int specialize_cmd(const Options& o, std::ostream& out) {
  if (o.solution.empty()) throw usage_error("MissingValue", "specialize needs --solution");
  SymmetricForm f = load_form(o.form);
  ParametricSolution s = read_solution(o.solution);
  auto copt = certify_options(o);
  auto fix = parse_assignments(o.assignments);
  s = specialize(s, fix, f.poly, VarList::form_vars(static_cast<unsigned>(f.nvars)), copt);
  if (fix.empty() && !s.certificate) {
    std::optional<Rational> q;
    s.certificate = certify(f.poly, s, q, copt);
  }
  if (o.params >= 0) s = reduce_params(s, static_cast<std::size_t>(o.params), f.poly, copt);
  write(o, render(s, emit_mode(o)), out);
  return ok;
}

inline void report(const Error& e, const Options& o, std::ostream& out, std::ostream& err) {
  err << "error: " << e.name() << ": " << e.detail() << "\n";
  if (e.category() != Error::Category::math) return;
  std::string body;
  if (emit_mode(o) == Emit::json)
    body = dump(Json{{"status", "degenerate"}, {"error", e.name()}, {"detail", e.detail()}});
  else
    body = "degenerate: " + e.name() + "\n" + e.detail() + "\n";
  try {
    write(o, body, out);
  } catch (const Error&) {
  }
}

}  // namespace detail

/// Runs one command line; returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Parametric solutions of symmetric Diophantine equations"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_form) {
    auto* form = sub->add_option("--form", o.form,
                                 "Form: expression in x1..xN, diagonal:n:N, "
                                 "powersum-product:k1,k2,...:N, @file or file.json");
    if (needs_form) form->required();
    sub->add_option("--emit", o.emit, "Output format")->check(CLI::IsMember({"text", "json", "latex"}));
    sub->add_option("--out", o.out, "Write output to this file");
    sub->add_option("--seed", o.seed, "Seed for randomized certification");
    sub->add_option("--budget", o.budget, "Term budget for symbolic certification")
        ->check(CLI::PositiveNumber);
  };

  auto* analyze = app.add_subcommand("analyze", "Symmetry, degree and power-sum decomposition");
  add_common(analyze, true);
  auto* solve = app.add_subcommand("solve", "Certified parametric solution of F = 0");
  add_common(solve, true);
  solve->add_option("--params", o.params, "Specialize down to this many parameters")
      ->check(CLI::NonNegativeNumber);
  auto* waring = app.add_subcommand("waring", "Certified parametric solution of F = q");
  add_common(waring, true);
  waring->add_option("--q", o.q, "Right-hand side, an integer or p/q")->required();
  waring->add_option("--params", o.params, "Specialize down to this many parameters")
      ->check(CLI::NonNegativeNumber);
  auto* verify = app.add_subcommand("verify", "Re-certify a solution file against a form");
  add_common(verify, true);
  verify->add_option("--solution", o.solution, "Solution JSON file")->required();
  verify->add_option("--q", o.q, "Right-hand side (defaults to the file's certificate)");
  auto* spec = app.add_subcommand("specialize", "Fix parameters of a solution file");
  add_common(spec, true);
  spec->add_option("--solution", o.solution, "Solution JSON file")->required();
  spec->add_option("--set", o.assignments, "Assignment name=value (repeatable)");
  spec->add_option("--params", o.params, "Keep this many parameters")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Exit::ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  }

  try {
    if (analyze->parsed()) return detail::analyze(o, out);
    if (solve->parsed()) return detail::solve(o, out);
    if (waring->parsed()) return detail::waring(o, out);
    if (verify->parsed()) return detail::verify(o, out);
    return detail::specialize_cmd(o, out);
  } catch (const Error& e) {
    detail::report(e, o, out, err);
    return e.category() == Error::Category::math ? Exit::degenerate : Exit::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return Exit::usage;
  }
}

}  // namespace symdio::cli
