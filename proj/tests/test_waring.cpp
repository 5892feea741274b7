#include <gtest/gtest.h>

#include <random>

#include "symdio/waring.hpp"
#include "test_util.hpp"

using namespace symdio;
using namespace symdio::testing;

namespace {

SymmetricForm p5_in_12() { return SymmetricForm::make_symmetric(generator(GenKind::p, 5, 12)); }

// Exact evaluation oracle: F(X/W) at a parameter point.
Rational value_at(const Poly& F, const ParametricSolution& s, const std::vector<Rational>& pt) {
  Rational w = evaluate(s.denominator, pt);
  std::vector<Rational> x;
  for (const auto& xi : s.solutions) x.push_back(evaluate(xi, pt) / w);
  return evaluate(F, x);
}

void expect_value_solution(const SymmetricForm& f, const Rational& q, const WaringResult& r,
                           std::uint64_t seed) {
  const auto& s = r.solution;
  ASSERT_TRUE(s.certificate.has_value());
  EXPECT_EQ(s.certificate->kind, Certificate::Kind::value);
  EXPECT_EQ(s.certificate->q, q);
  EXPECT_GE(s.param_count(), 4u);
  Poly sum(s.param_count());
  for (const auto& x : s.solutions) sum += x;
  EXPECT_TRUE(sum.is_zero());
  std::mt19937_64 rng(seed);
  int checked = 0;
  while (checked < 10) {
    std::vector<Rational> pt;
    for (std::size_t i = 0; i < s.param_count(); ++i) pt.push_back(random_rational(rng, 40, 6));
    if (evaluate(s.denominator, pt) == 0) continue;
    EXPECT_EQ(value_at(f.poly, s, pt), q);
    ++checked;
  }
}

}  // namespace

TEST(Waring, VariableCount) {
  EXPECT_EQ(waring_vars(5), 12u);
  EXPECT_EQ(waring_vars(7), 48u);
  EXPECT_THROW(solve_waring({SymmetricForm::make_symmetric(generator(GenKind::p, 5, 6)), 1}),
               Error);
}

TEST(Waring, FifthPowersEqualSeven) {
  auto f = p5_in_12();
  auto r = solve_waring({f, 7});
  EXPECT_EQ(r.route, "value");
  expect_value_solution(f, 7, r, 1);
}

TEST(Waring, FifthPowersEqualMinusThreeHalves) {
  auto f = p5_in_12();
  Rational q = make_rational(-3, 2);
  expect_value_solution(f, q, solve_waring({f, q}), 2);
}

TEST(Waring, ZeroTargetUsesHomogeneousRoute) {
  auto f = p5_in_12();
  auto r = solve_waring({f, 0});
  EXPECT_EQ(r.route, "homogeneous");
  ASSERT_TRUE(r.solution.certificate.has_value());
  EXPECT_EQ(r.solution.certificate->kind, Certificate::Kind::value);
  EXPECT_EQ(r.solution.certificate->q, 0);
  EXPECT_EQ(r.solution.param_count(), 2u);
  EXPECT_TRUE(compose(f.poly, r.solution.solutions).is_zero());
}

TEST(Waring, PencilParameterScalesLinearlyInQ) {
  auto f = p5_in_12();
  auto r1 = solve_waring({f, 5});
  auto r2 = solve_waring({f, 10});
  // t = q * t_num / t_den with t_num, t_den independent of q.
  EXPECT_EQ(r1.t_num, r2.t_num);
  EXPECT_EQ(r1.t_den, r2.t_den);
}

TEST(Waring, RandomQuinticCertifiedOrClassified) {
  std::mt19937_64 rng(55);
  Poly P = [&] {
    auto p = [](unsigned k) { return generator(GenKind::p, k, 12); };
    return p(5).scaled(random_nonzero_rational(rng)) +
           (p(3) * p(2)).scaled(random_nonzero_rational(rng)) +
           (p(1) * p(4)).scaled(random_rational(rng));
  }();
  auto f = SymmetricForm::make_symmetric(P);
  Rational q = make_rational(-3, 2);
  try {
    auto r = solve_waring({f, q});
    expect_value_solution(f, q, r, 3);
  } catch (const Error& e) {
    EXPECT_EQ(e.name(), "StageUnsolvable") << e.what();
  }
}
