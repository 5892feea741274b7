#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symdio/poly.hpp"
#include "symdio/vars.hpp"

namespace symdio {

struct Certificate {
  enum class Kind { zero, value };
  enum class Method { symbolic, randomized };

  Kind kind = Kind::zero;
  Rational q = 0;  // meaningful for kind == value
  Method method = Method::symbolic;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<Rational>> sample_points;
  std::vector<Poly> excluded_locus;
};

/// x_i = solutions[i] / denominator, all polynomials over `params`.
/// The denominator is the constant 1 for polynomial solutions.
struct ParametricSolution {
  std::size_t nvars = 0;
  VarList params;
  std::vector<Poly> solutions;
  Poly denominator;
  std::vector<Poly> excluded_locus;
  std::optional<Certificate> certificate;
  bool zero_sum = false;

  std::size_t param_count() const { return params.size(); }
  bool is_polynomial() const { return denominator == Poly::constant(params.size(), 1); }
};

inline ParametricSolution make_solution(VarList params, std::vector<Poly> xs) {
  ParametricSolution s;
  s.nvars = xs.size();
  s.denominator = Poly::constant(params.size(), 1);
  s.params = std::move(params);
  s.solutions = std::move(xs);
  return s;
}

}  // namespace symdio
