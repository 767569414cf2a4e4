#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nlocus/core/binary_form.hpp"
#include "nlocus/core/factor.hpp"
#include "nlocus/core/parse.hpp"
#include "nlocus/core/roots_of_unity.hpp"

using namespace nlocus;

namespace {

const RationalField QQ{};

HPoly<Rational> q(const std::string& s) { return parse_poly<Rational>(s, QQ); }

// Random homogeneous polynomial with small integer coefficients.
HPoly<Rational> random_poly(std::mt19937_64& gen, int degree, int density_percent) {
  HPoly<Rational> p(QQ, degree);
  for (const auto& m : monomials(degree)) {
    if (static_cast<int>(gen() % 100) >= density_percent) continue;
    long c = static_cast<long>(gen() % 19) - 9;
    p.add_term(m, Rational(c));
  }
  return p;
}

}  // namespace

TEST(Monomials, IndexMatchesSortedEnumeration) {
  for (int l = 0; l <= 12; ++l) {
    // oracle: brute-force enumeration sorted with the canonical comparator
    std::vector<Mono> all;
    for (int a = 0; a <= l; ++a)
      for (int b = 0; a + b <= l; ++b)
        for (int c = 0; a + b + c <= l; ++c) all.push_back(Mono{{a, b, c, l - a - b - c}});
    std::sort(all.begin(), all.end(), CanonicalOrder{});
    ASSERT_EQ(all.size(), monomial_count(l));
    auto listed = monomials(l);
    ASSERT_EQ(listed, all);
    for (std::size_t k = 0; k < all.size(); ++k) EXPECT_EQ(monomial_index(all[k]), k);
  }
}

TEST(Monomials, FirstIsHighestPowerOfZ0) {
  EXPECT_EQ(monomials(4).front(), (Mono{{4, 0, 0, 0}}));
  EXPECT_EQ(monomials(4).back(), (Mono{{0, 0, 0, 4}}));
}

TEST(Cyclotomic, ModulusPolynomials) {
  auto phi = [](unsigned n) {
    std::vector<long> out;
    for (const auto& c : detail::cyclotomic_polynomial(n)) out.push_back(c.get_si());
    return out;
  };
  EXPECT_EQ(phi(1), (std::vector<long>{-1, 1}));
  EXPECT_EQ(phi(4), (std::vector<long>{1, 0, 1}));
  EXPECT_EQ(phi(8), (std::vector<long>{1, 0, 0, 0, 1}));
  EXPECT_EQ(phi(9), (std::vector<long>{1, 0, 0, 1, 0, 0, 1}));
  EXPECT_EQ(phi(12), (std::vector<long>{1, 0, -1, 0, 1}));
}

TEST(Cyclotomic, ZetaPowersAndInverse) {
  CyclotomicField K8(8);
  auto z = K8.zeta(1);
  auto z4 = z * z * z * z;
  EXPECT_EQ(z4, K8.from_int(-1));
  EXPECT_EQ(K8.zeta(8), K8.one());
  EXPECT_EQ(K8.zeta(-1) * z, K8.one());
  std::mt19937_64 gen(7);
  for (int t = 0; t < 30; ++t) {
    std::vector<mpq_class> c(4);
    for (auto& x : c) x = mpq_class(static_cast<long>(gen() % 11) - 5, static_cast<unsigned long>(gen() % 4 + 1));
    Cyclotomic a(K8, c);
    if (a.is_zero()) continue;
    EXPECT_EQ(a * a.inverse(), K8.one());
    // Galois action is a ring automorphism
    Cyclotomic b = a * z + K8.from_int(3);
    EXPECT_EQ((a * b).galois(3), a.galois(3) * b.galois(3));
  }
}

TEST(Cyclotomic, MixedConductorsRejected) {
  CyclotomicField K8(8), K12(12);
  EXPECT_THROW((void)(K8.one() + K12.one()), FieldMismatch);
}

TEST(PrimeField, Arithmetic) {
  PrimeField F{65537};
  auto a = F.from_int(-1);
  EXPECT_EQ(a.value(), 65536u);
  EXPECT_EQ(a * a, F.one());
  EXPECT_EQ(F.from_rational(mpq_class(1, 2)) * F.from_int(2), F.one());
  EXPECT_THROW(F.zero().inverse(), DivisionByZero);
}

TEST(Parse, RoundTripFixed) {
  auto f = q("z0^4 + z1^4 - z2^2*z3^2");
  EXPECT_EQ(f.degree(), 4);
  EXPECT_EQ(f.to_string(), "z0^4+z1^4-z2^2*z3^2");
  auto g = q("1/2*z0*z1 - 3 z2^2");
  EXPECT_EQ(g.to_string(), "1/2*z0*z1-3*z2^2");
  EXPECT_EQ(q(g.to_string()), g);
  auto h = q("(z0 + z1)^2");
  EXPECT_EQ(h.to_string(), "z0^2+2*z0*z1+z1^2");
}

TEST(Parse, RoundTripRandom) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 50; ++t) {
    auto f = random_poly(gen, 1 + static_cast<int>(gen() % 6), 40);
    EXPECT_EQ(parse_poly<Rational>(f.to_string(), QQ, f.degree()), f) << f.to_string();
  }
}

TEST(Parse, CyclotomicRoundTrip) {
  CyclotomicField K8(8);
  auto f = parse_poly<Cyclotomic>("z0 - zeta(8)*z3", K8);
  EXPECT_EQ(f.to_string(), "z0-zeta(8)*z3");
  auto g = parse_poly<Cyclotomic>("(1+zeta(8))*z1^2 + zeta(4)*z2^2", K8);
  EXPECT_EQ(g.to_string(), "(1+zeta(8))*z1^2+zeta(8)^2*z2^2");
  EXPECT_EQ(parse_poly<Cyclotomic>(g.to_string(), K8), g);
  auto w = parse_poly<Cyclotomic>("zeta(8)^4*z0", K8);
  EXPECT_EQ(w.to_string(), "-z0");
}

TEST(Parse, Errors) {
  EXPECT_THROW(q("z0^2 + z1"), DegreeMismatch);
  EXPECT_THROW(q("z0 + "), ParseError);
  EXPECT_THROW(q("z4"), ParseError);
  EXPECT_THROW(q("zeta(8)*z0"), FieldMismatch);
  EXPECT_THROW(parse_poly<Cyclotomic>("zeta(3)*z0", CyclotomicField(8)), FieldMismatch);
  EXPECT_THROW(parse_poly<ModP>("zeta(2)*z0", PrimeField{7}), FieldMismatch);
  try {
    q("z0 + ?");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
}

TEST(HPoly, PartialsAndEuler) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 20; ++t) {
    int d = 2 + static_cast<int>(gen() % 4);
    auto f = random_poly(gen, d, 60);
    // Euler identity: sum z_i dF/dz_i = d F
    HPoly<Rational> e(QQ, d);
    for (int i = 0; i < 4; ++i) e += HPoly<Rational>::variable(QQ, i) * f.partial(i);
    EXPECT_EQ(e, Rational(d) * f);
  }
}

TEST(HPoly, ExactDivision) {
  auto w = q("z0 + 2*z1 - z3");
  auto a = q("z0^3 - z1*z2*z3 + 5*z2^3");
  auto quot = exact_divide(w * a, w);
  ASSERT_TRUE(quot);
  EXPECT_EQ(*quot, a);
  EXPECT_FALSE(exact_divide(w * a + q("z1^4"), w));
}

TEST(HPoly, LinearSubstitutionIsInvertible) {
  auto f = q("z0^3 + z1*z2*z3 - z2^3");
  std::array<std::array<Rational, 4>, 4> T{};
  std::array<std::array<Rational, 4>, 4> Tinv{};
  for (int i = 0; i < 4; ++i) {
    T[i][i] = Rational(1);
    Tinv[i][i] = Rational(1);
  }
  T[0][1] = Rational(2);   // z0 -> z0 + 2 z1
  Tinv[0][1] = Rational(-2);
  auto g = substitute_linear(f, T);
  EXPECT_EQ(substitute_linear(g, Tinv), f);
  std::array<std::array<Rational, 4>, 4> singular{};
  EXPECT_THROW(substitute_linear(f, singular), PreconditionError);
}

TEST(BinaryForms, RestrictLineAndProportional) {
  auto f = q("z0^4 + z1^4 + z2^4 + z3^4");
  auto b = restrict_line(f, 1, 2);
  EXPECT_EQ(b.vars, (std::array<int, 2>{0, 3}));
  EXPECT_EQ(b.to_string(), "z0^4+z3^4");
  auto g = Rational(-3) * b;
  auto c = binary_proportional(g, b);
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, Rational(-3));
  auto h = restrict_line(q("z0^3*z3 + z0*z3^3"), 1, 2);
  EXPECT_FALSE(binary_proportional(h, b));
}

TEST(BinaryForms, FactorMonomialPowers) {
  auto f = restrict_line(q("z0^2*z3"), 1, 2);
  auto fac = binary_factor(f);
  EXPECT_EQ(fac.unit, Rational(1));
  ASSERT_EQ(fac.factors.size(), 2u);
  std::map<std::string, int> got;
  for (const auto& [g, m] : fac.factors) got[g.to_string()] = m;
  EXPECT_EQ(got["z0"], 2);
  EXPECT_EQ(got["z3"], 1);
}

TEST(Factor, QuarticSumIrreducibleOverQ) {
  auto f = restrict_line(q("z0^4 + z3^4"), 1, 2);
  auto fac = binary_factor(f);
  ASSERT_EQ(fac.factors.size(), 1u);
  EXPECT_EQ(fac.factors[0].first.degree, 4);
  // Oracle: x^4+1 has no rational root and no monic integer quadratic
  // factor; Gauss's lemma bounds candidate constant terms to +-1 and the
  // linear coefficient to |a| <= 3 by the root bound.
  for (int r : {-1, 1}) EXPECT_NE(r * r * r * r + 1, 0);
  for (int b : {-1, 1})
    for (int a = -3; a <= 3; ++a) {
      UPoly<Rational> quad(QQ, {Rational(b), Rational(a), Rational(1)});
      UPoly<Rational> quartic(QQ, {Rational(1), Rational(0), Rational(0), Rational(0), Rational(1)});
      EXPECT_FALSE((quartic % quad).is_zero());
    }
}

TEST(Factor, QuarticSumSplitsOverZeta8) {
  CyclotomicField K8(8);
  auto f = restrict_line(parse_poly<Cyclotomic>("z0^4 + z3^4", K8), 1, 2);
  auto fac = binary_factor(f);
  ASSERT_EQ(fac.factors.size(), 4u);
  // Oracle: the odd powers of zeta_8 are the roots of x^4 + 1.
  for (const auto& [g, m] : fac.factors) {
    EXPECT_EQ(m, 1);
    ASSERT_EQ(g.degree, 1);
    Cyclotomic root = -g.coeffs[1];
    bool odd_power = false;
    for (long k : {1, 3, 5, 7}) odd_power = odd_power || root == K8.zeta(k);
    EXPECT_TRUE(odd_power) << g.to_string();
  }
}

TEST(Factor, RecoversPlantedFactorsOverQ) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 15; ++t) {
    // product of planted irreducible-by-construction pieces: linear factors
    // and x^2 + c with c > 0 (no real roots)
    UPoly<Rational> f = UPoly<Rational>::constant(QQ, Rational(static_cast<long>(gen() % 5) + 1));
    std::vector<std::pair<UPoly<Rational>, int>> planted;
    int nlin = 1 + static_cast<int>(gen() % 3);
    for (int k = 0; k < nlin; ++k) {
      UPoly<Rational> lin(QQ, {Rational(static_cast<long>(gen() % 13) - 6 + 20 * k), Rational(1)});
      int mult = 1 + static_cast<int>(gen() % 2);
      planted.emplace_back(lin, mult);
      f = f * lin.pow(mult);
    }
    UPoly<Rational> quad(QQ, {Rational(static_cast<long>(gen() % 7) + 1), Rational(0), Rational(1)});
    planted.emplace_back(quad, 1);
    f = f * quad;
    auto fac = factor(f);
    std::size_t total = 0;
    for (const auto& [g, m] : fac.factors) {
      total += 1;
      bool found = false;
      for (const auto& [h, mm] : planted)
        if (h == g && mm == m) found = true;
      EXPECT_TRUE(found) << g.to_string();
    }
    EXPECT_EQ(total, planted.size());
    // reconstruct
    UPoly<Rational> back = UPoly<Rational>::constant(QQ, fac.unit);
    for (const auto& [g, m] : fac.factors) back = back * g.pow(m);
    EXPECT_EQ(back, f);
  }
}

TEST(Factor, CyclotomicNormSquarefreeShift) {
  // x^2 - 2 stays irreducible over Q(zeta_8)?  No: sqrt 2 = zeta + zeta^7.
  CyclotomicField K8(8);
  UPoly<Cyclotomic> f(K8, {K8.from_int(-2), K8.zero(), K8.one()});
  auto fac = factor(f);
  ASSERT_EQ(fac.factors.size(), 2u);
  Cyclotomic s = K8.zeta(1) + K8.zeta(7);
  EXPECT_EQ(s * s, K8.from_int(2));
  // x^2 - 3 is irreducible over Q(zeta_8): sqrt 3 generates Q(zeta_12)
  UPoly<Cyclotomic> g(K8, {K8.from_int(-3), K8.zero(), K8.one()});
  EXPECT_EQ(factor(g).factors.size(), 1u);
}

TEST(RootsOfUnity, Rational) {
  EXPECT_EQ(root_of_unity_order(Rational(-1)), 2u);
  EXPECT_EQ(root_of_unity_order(Rational(1)), 1u);
  EXPECT_FALSE(root_of_unity_test(Rational(2)));
  EXPECT_FALSE(root_of_unity_test(Rational(mpq_class(1, 2))));
}

TEST(RootsOfUnity, Cyclotomic) {
  CyclotomicField K8(8);
  EXPECT_EQ(root_of_unity_order(K8.zeta(3)), 8u);
  EXPECT_EQ(root_of_unity_order(K8.zeta(2)), 4u);
  EXPECT_EQ(root_of_unity_order(-K8.one()), 2u);
  EXPECT_FALSE(root_of_unity_test(K8.one() + K8.zeta(1)));
  CyclotomicField K3(3);
  EXPECT_EQ(root_of_unity_order(-K3.zeta(1)), 6u);
}
