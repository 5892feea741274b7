#include <gtest/gtest.h>

#include <random>

#include "symdio/poly.hpp"
#include "symdio/vars.hpp"
#include "test_util.hpp"

using namespace symdio;
using namespace symdio::testing;

TEST(Rational, CanonicalForm) {
  Rational r = make_rational(6, -4);
  EXPECT_EQ(r.get_num(), -3);
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_EQ(to_string(Rational(0)), "0/1");
  EXPECT_EQ(to_display(r), "-3/2");
  EXPECT_THROW(make_rational(1, 0), Error);
}

TEST(Rational, ParseLiterals) {
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-3/2"), make_rational(-3, 2));
  EXPECT_EQ(parse_rational("4/6"), make_rational(2, 3));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("1/-2"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(PolyArith, PowZeroIsOne) {
  Poly s = var(2, 0) + var(2, 1);
  EXPECT_EQ(s.pow(0), cst(2, 1));
}

TEST(PolyArith, DifferenceOfSquares) {
  Poly d = var(1, 0);
  EXPECT_EQ((d - cst(1, 1)) * (d + cst(1, 1)), d.pow(2) - cst(1, 1));
}

TEST(PolyArith, BinomialCoefficientOfT4) {
  // vars: t, a
  Poly t = var(2, 0), a = var(2, 1);
  Poly p = (a * t - cst(2, 1)).pow(5);
  // Oracle: (a t - 1)^5 = sum C(5,k) (a t)^k (-1)^(5-k); k = 4 gives -5 a^4 t^4.
  Rational expected = -5;
  EXPECT_EQ(p.coefficient_of(ExponentVector{4, 4}), expected);
  auto by_t = coeffs_in_var(p, 0);
  ASSERT_EQ(by_t.size(), 6u);
  EXPECT_EQ(by_t[4], a.pow(4).scaled(-5));
}

TEST(PolyArith, NvarsMismatchThrows) {
  EXPECT_THROW(var(2, 0) + var(3, 0), Error);
  EXPECT_THROW(var(2, 0) * var(3, 0), Error);
  EXPECT_THROW(Poly::variable(2, 2), Error);
}

TEST(PolyArith, NoZeroCoefficientsStored) {
  Poly x = var(2, 0), y = var(2, 1);
  Poly p = (x + y) - (x + y);
  EXPECT_TRUE(p.is_zero());
  Poly q = x * y - y * x + x;
  EXPECT_EQ(q.size(), 1u);
  for (const auto& c : (x + y).pow(4).raw_coeffs()) EXPECT_NE(c, 0);
}

TEST(PolyArith, TermsInDescendingGrlex) {
  Poly x = var(3, 0), y = var(3, 1), z = var(3, 2);
  Poly p = (x + y * z + cst(3, 2)).pow(3);
  for (std::size_t i = 1; i < p.size(); ++i)
    EXPECT_GT(detail::grlex_compare(p.exponents(i - 1).data(), p.exponents(i).data(), 3), 0);
}

TEST(PolyProperties, RingLaws) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 5;
    Poly p = random_poly(rng, n, 20), q = random_poly(rng, n, 20), r = random_poly(rng, n, 20);
    EXPECT_EQ((p + q) + r, p + (q + r));
    EXPECT_EQ((p * q) * r, p * (q * r));
    EXPECT_EQ(p * (q + r), p * q + p * r);
    EXPECT_EQ(p + q, q + p);
    EXPECT_EQ(p * q, q * p);
    EXPECT_EQ(p - p, Poly(n));
    EXPECT_EQ(p * cst(n, 1), p);
  }
}

TEST(Substitute, OddPowerCancellation) {
  // vars x1, x2, u
  Poly x1 = var(3, 0), x2 = var(3, 1), u = var(3, 2);
  Poly f = x1.pow(5) + x2.pow(5);
  EXPECT_TRUE(substitute(f, {{0, u}, {1, -u}}).is_zero());
}

TEST(Substitute, SingleVariable) {
  // vars x1, a, t
  Poly x1 = var(3, 0), a = var(3, 1), t = var(3, 2);
  Poly img = a * t - cst(3, 1);
  EXPECT_EQ(substitute(x1, {{0, img}}), img);
}

TEST(Substitute, IdentityMapIsIdentity) {
  std::mt19937_64 rng(5);
  Poly p = random_poly(rng, 4, 15);
  EXPECT_EQ(substitute(p, {}), p);
}

TEST(Substitute, AmbientMismatchThrows) {
  Poly p = var(2, 0) + var(2, 1);
  std::vector<Poly> images{var(3, 0), var(2, 0)};
  EXPECT_THROW(compose(p, images), Error);
}

TEST(Substitute, PencilEndpointsVanishForDiagonalQuintic) {
  // ambient: x1..x6 then t, a, b, c, d
  const std::size_t n = 11;
  Poly t = var(n, 6), a = var(n, 7), b = var(n, 8), c = var(n, 9), d = var(n, 10);
  Poly one = cst(n, 1);
  Poly f(n);
  for (std::size_t i = 0; i < 6; ++i) f += var(n, i).pow(5);
  std::vector<Poly> u{a, -a, b, -b, one, -one};
  std::vector<Poly> v{-one, c, -c, d, -d, one};
  std::map<std::size_t, Poly> m;
  for (std::size_t i = 0; i < 6; ++i) m.emplace(i, u[i] * t + v[i]);
  Poly pencil = substitute(f, m);
  auto by_t = coeffs_in_var(pencil, 6);
  EXPECT_TRUE(by_t[0].is_zero());
  EXPECT_LE(pencil.degree_in(6), 4);
  EXPECT_EQ(by_t.size(), 5u);
}

TEST(SubstituteProperties, RingHomomorphism) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    Poly p = random_poly(rng, 3, 8, 2), q = random_poly(rng, 3, 8, 2);
    std::map<std::size_t, Poly> m{{0, random_poly(rng, 3, 4, 2)}, {2, random_poly(rng, 3, 4, 2)}};
    EXPECT_EQ(substitute(p * q, m), substitute(p, m) * substitute(q, m));
    EXPECT_EQ(substitute(p + q, m), substitute(p, m) + substitute(q, m));
  }
}

TEST(Evaluate, PairedPrimitivePoint) {
  Poly f(6);
  for (std::size_t i = 0; i < 6; ++i) f += var(6, i).pow(5);
  std::vector<Rational> pt{1, -1, 2, -2, 3, -3};
  EXPECT_EQ(evaluate(f, pt), 0);
}

TEST(Evaluate, RationalPoint) {
  Poly f = var(2, 0) + var(2, 1);
  std::vector<Rational> pt{make_rational(1, 2), make_rational(1, 3)};
  EXPECT_EQ(evaluate(f, pt), make_rational(5, 6));
}

TEST(Evaluate, LengthMismatchThrows) {
  std::vector<Rational> pt{1};
  EXPECT_THROW(evaluate(var(2, 0), pt), Error);
}

TEST(EvaluateProperties, CommutesWithSubstitute) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    Poly p = random_poly(rng, 3, 10);
    std::vector<Poly> images{random_poly(rng, 2, 5), random_poly(rng, 2, 5), random_poly(rng, 2, 5)};
    std::vector<Rational> pt{random_rational(rng), random_rational(rng)};
    std::vector<Rational> image_values;
    for (const auto& im : images) image_values.push_back(evaluate(im, pt));
    EXPECT_EQ(evaluate(compose(p, images), pt), evaluate(p, image_values));
  }
}

TEST(CoeffsInVar, Quadratic) {
  Poly d = var(1, 0);
  auto cs = coeffs_in_var(d.pow(2) - cst(1, 1), 0);
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs[0], cst(1, -1));
  EXPECT_TRUE(cs[1].is_zero());
  EXPECT_EQ(cs[2], cst(1, 1));
}

TEST(CoeffsInVar, ConstantGivesSingleEntry) {
  auto cs = coeffs_in_var(cst(2, 7), 1);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0], cst(2, 7));
  EXPECT_EQ(coeffs_in_var(Poly(2), 0).size(), 1u);
}

TEST(CoeffsInVarProperties, RoundTrip) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    Poly p = random_poly(rng, 4, 20);
    std::size_t v = trial % 4;
    auto cs = coeffs_in_var(p, v);
    for (const auto& c : cs) EXPECT_FALSE(c.depends_on(v));
    EXPECT_EQ(from_coeffs_in_var(cs, v, 4), p);
  }
}

TEST(ExactDivide, Basic) {
  Poly d = var(1, 0), one = cst(1, 1);
  EXPECT_EQ(exact_divide(d.pow(2) - one, d - one), d + one);
  EXPECT_THROW(exact_divide(d.pow(2) - one, d - cst(1, 2)), Error);
  EXPECT_THROW(exact_divide(d, Poly(1)), Error);
}

TEST(ExactDivide, StripsPencilRoot) {
  // vars t, A, B, C, D
  Poly t = var(5, 0);
  Poly cubic = var(5, 1) * t.pow(3) + var(5, 2) * t.pow(2) + var(5, 3) * t + var(5, 4);
  EXPECT_EQ(exact_divide(t * cubic, t), cubic);
}

TEST(ExactDivideProperties, ProductRoundTrip) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + trial % 4;
    Poly p = random_poly(rng, n, 12), q = random_nonzero_poly(rng, n, 8);
    EXPECT_EQ(exact_divide(p * q, q), p);
  }
}

TEST(StripFactor, CountsMultiplicity) {
  Poly x = var(2, 0), y = var(2, 1);
  Poly f = x - y;
  Poly p = f.pow(3) * (x + y);
  EXPECT_EQ(strip_factor(p, f), 3u);
  EXPECT_EQ(p, x + y);
}

TEST(Content, PrimitivePartHasPositiveLead) {
  Poly x = var(2, 0), y = var(2, 1);
  Poly p = x.scaled(make_rational(-4, 3)) + y.scaled(make_rational(2, 9));
  Poly pp = primitive_part(p);
  EXPECT_EQ(pp, x.scaled(6) - y);
  EXPECT_EQ(content(p), make_rational(2, 9));
}

TEST(Remap, MovesAndDropsVariables) {
  Poly x = var(2, 0), y = var(2, 1);
  std::vector<std::size_t> idx{2, 0};
  Poly r = remap_vars(x * y.pow(2), 3, idx);
  EXPECT_EQ(r, var(3, 2) * var(3, 0).pow(2));
  std::vector<std::size_t> drop{0, drop_var};
  EXPECT_THROW(remap_vars(y, 1, drop), Error);
  EXPECT_EQ(remap_vars(x, 1, drop), var(1, 0));
}

TEST(Homogeneity, Detection) {
  Poly x = var(2, 0), y = var(2, 1);
  EXPECT_TRUE(is_homogeneous(x.pow(3) + x * y.pow(2)));
  EXPECT_FALSE(is_homogeneous(x.pow(3) + y));
  EXPECT_TRUE(is_homogeneous(Poly(2)));
}

TEST(Exponent, OverflowIsReported) {
  Poly x = Poly::variable(1, 0, 60000);
  EXPECT_THROW(x * x, Error);
}

TEST(VarList, NamesAndDuplicates) {
  VarList vl({pencil_var(), param_a(), param_b(), reduction_c(1), reduction_d(1)});
  EXPECT_EQ(vl.names(), (std::vector<std::string>{"t", "a", "b", "c1", "d1"}));
  EXPECT_EQ(vl.index_of(reduction_d(1)), 4u);
  EXPECT_THROW(VarList({param_a(), param_a()}), Error);
  EXPECT_EQ(parse_param_name("d2"), reduction_d(2));
  EXPECT_THROW(parse_param_name("zz"), Error);
}

TEST(PolyArith, LargeProductsMatchSchoolbookOracle) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 6; ++trial) {
    std::size_t n = 1 + trial % 3;
    Poly p = random_poly(rng, n, 120, 12), q = random_poly(rng, n, 120, 12);
    if (trial % 2) p = -p;
    std::vector<std::pair<ExponentVector, Rational>> terms;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) {
        ExponentVector e(n);
        for (std::size_t v = 0; v < n; ++v) e[v] = p.exponents(i)[v] + q.exponents(j)[v];
        terms.emplace_back(std::move(e), p.coeff(i) * q.coeff(j));
      }
    EXPECT_EQ(p * q, Poly::from_terms(n, terms)) << "trial " << trial;
  }
}

TEST(PolyArith, DensePowerAgreesWithEvaluation) {
  Poly a = var(2, 0), b = var(2, 1);
  Poly x = (a.pow(3) - b.scaled(make_rational(7, 2)) + a * b.pow(5) - cst(2, 11)).pow(4);
  Poly y = x.pow(3);
  std::vector<Rational> pt{make_rational(-3, 5), make_rational(2, 7)};
  Rational xv = evaluate(x, pt);
  EXPECT_EQ(evaluate(y, pt), xv * xv * xv);
}
