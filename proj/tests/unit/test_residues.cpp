#include <gtest/gtest.h>

#include <algorithm>

#include "nlocus/core/parse.hpp"
#include "nlocus/residues.hpp"

using namespace nlocus;

namespace {

const RationalField QQ{};

HPoly<Rational> q(const std::string& s) { return parse_poly<Rational>(s, QQ); }

const HPoly<Rational>& fermat() {
  static const auto f = q("z0^4+z1^4+z2^4+z3^4");
  return f;
}

const std::array<std::pair<int, int>, 3> kPairs{{{1, 2}, {2, 3}, {3, 1}}};

std::vector<std::string> sorted_strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

PQFamilySpec<Rational> pq_spec(int p, int qq, int r, std::vector<Rational> cs) {
  PQFamilySpec<Rational> s;
  s.field = QQ;
  s.sigma = {1, 2, 3};
  s.p = p;
  s.q = qq;
  s.r = r;
  s.c = Rational(1);
  s.cs = std::move(cs);
  s.w = q("z0");
  s.A = q("z0^3+z1^3+z2^3+z3^3");
  return s;
}

// oracle: evaluate -G / dF/dz0 at each numeric point and compare the
// multiset with exact rational roots by nearest matching
bool numeric_matches(const std::vector<NumericResidue>& num, std::vector<Rational> exact, double tol) {
  for (const auto& v : num) {
    auto best = exact.end();
    double gap = tol;
    for (auto it = exact.begin(); it != exact.end(); ++it) {
      double g = (v.value - numeric::embed(*it, v.value.precision())).magnitude();
      if (g <= gap) gap = g, best = it;
    }
    if (best == exact.end()) return false;
    exact.erase(best);
  }
  return exact.empty();
}

}  // namespace

TEST(Residues, OmegaCalibratesToMinusOne) {
  Sampler rng(2);
  std::vector<HPoly<Rational>> surfaces{fermat()};
  while (surfaces.size() < 4) {
    auto F = rng.poly<Rational>(QQ, 4);
    try {
      JacobianRing<Rational>::build(F);
      surfaces.push_back(F);
    } catch (const NotTransversal&) {
    }
  }
  for (const auto& F : surfaces)
    for (auto [i, j] : kPairs) {
      auto c = delta_constant_certificate(F, F.partial(0), i, j);
      ASSERT_TRUE(c);
      EXPECT_EQ(*c, Rational(-1));
    }
}

TEST(Residues, ProportionalityOnFermat) {
  auto c = delta_constant_certificate(fermat(), q("z0^3"), 1, 2);
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, Rational(mpq_class(-1, 4)));
  auto V = delta_value_polynomial(fermat(), q("z0^3"), 1, 2);
  // oracle: (y + 1/4)^4 expanded by repeated multiplication
  auto lin = UPoly<Rational>(QQ, {Rational(mpq_class(1, 4)), Rational(1)});
  EXPECT_EQ(V, lin.pow(4));
  EXPECT_FALSE(delta_constant_certificate(fermat(), q("z0^2*z3"), 1, 2));
}

TEST(Residues, ConstantCaseValuePolynomial) {
  auto V = delta_value_polynomial(fermat(), fermat().partial(0), 2, 3);
  EXPECT_EQ(V, UPoly<Rational>(QQ, {Rational(1), Rational(1)}).pow(4));
  auto rep = residue_report(fermat(), fermat().partial(0), 3, 1);
  ASSERT_TRUE(rep.constant);
  ASSERT_TRUE(rep.roots);
  EXPECT_EQ(sorted_strings(*rep.roots), (std::vector<std::string>{"-1", "-1", "-1", "-1"}));
}

TEST(Residues, XiVanishesOnLinesThroughThirdSlot) {
  auto spec = pq_spec(1, 0, 4, {Rational(1), Rational(2), Rational(-1), Rational(3)});
  auto F = pq_polynomial(spec);
  auto x = xi(spec);
  for (auto [i, j] : {std::pair{2, 3}, std::pair{3, 1}}) {
    auto c = delta_constant_certificate(F, x, i, j);
    ASSERT_TRUE(c);
    EXPECT_TRUE(c->is_zero());
  }
}

TEST(Residues, XiOnDegenerateLine) {
  // w = z0 vanishes at [0:0:0:1] on z1 = z2 = 0: three points give -p and
  // the point on w gives a shifted value
  auto spec = pq_spec(1, 1, 2, {Rational(1), Rational(-1)});
  auto F = pq_polynomial(spec);
  auto x = xi(spec);
  auto rep = residue_report(F, x, 1, 2);
  EXPECT_FALSE(rep.constant);
  ASSERT_TRUE(rep.roots);
  EXPECT_EQ(sorted_strings(*rep.roots), (std::vector<std::string>{"-1", "-1", "-1", "3"}));
  EXPECT_TRUE(numeric_matches(numeric_delta(F, x, 1, 2), *rep.roots, 1e-25));
  // w also meets z3 = z1 = 0, at [0:0:1:0]: q at three points, -q (d - 1) there
  auto rep31 = residue_report(F, x, 3, 1);
  ASSERT_TRUE(rep31.roots);
  EXPECT_EQ(sorted_strings(*rep31.roots), (std::vector<std::string>{"-3", "1", "1", "1"}));
  EXPECT_TRUE(numeric_matches(numeric_delta(F, x, 3, 1), *rep31.roots, 1e-25));
}

TEST(Residues, NumericPrecision) {
  auto vals = numeric_delta(fermat(), fermat().partial(0), 1, 2, 128);
  ASSERT_EQ(vals.size(), 4u);
  for (const auto& v : vals) {
    EXPECT_LT((v.value - numeric::from_double(-1.0, 128)).magnitude(), 1e-30);
    EXPECT_LT(v.radius, 1e-30);
  }
  auto coarse = numeric_delta(fermat(), q("z0^2*z3+z3^3"), 1, 2, 64);
  auto fine = numeric_delta(fermat(), q("z0^2*z3+z3^3"), 1, 2, 256);
  EXPECT_LT(numeric_polynomial_gap(fine, delta_value_polynomial(fermat(), q("z0^2*z3+z3^3"), 1, 2), 256), 1e-60);
  EXPECT_LT(numeric_polynomial_gap(coarse, delta_value_polynomial(fermat(), q("z0^2*z3+z3^3"), 1, 2), 64), 1e-12);
}

TEST(Residues, ExactAndNumericAgreeOnRandomInstances) {
  Sampler rng(404);
  int done = 0;
  while (done < 20) {
    auto F = rng.poly<Rational>(QQ, 4);
    auto G = rng.nonzero_poly<Rational>(QQ, 3, 60);
    auto [i, j] = kPairs[static_cast<std::size_t>(rng.below(3))];
    UPoly<Rational> V;
    try {
      V = delta_value_polynomial(F, G, i, j);
    } catch (const Degenerate&) {
      continue;
    }
    auto vals = numeric_delta(F, G, i, j, 160);
    double scale = 1;
    for (const auto& v : vals) scale = std::max(scale, v.value.magnitude());
    EXPECT_LT(numeric_polynomial_gap(vals, V, 160), 1e-30 * std::pow(scale, 4)) << F << " | " << G;
    // each numeric value is a root of V
    std::vector<numeric::Complex> exact;
    for (const auto& c : V.coeffs()) exact.push_back(numeric::embed(c, 160));
    for (const auto& v : vals) EXPECT_LT(numeric::horner(exact, v.value).magnitude(), 1e-25 * std::pow(scale, 4));
    ++done;
  }
}

TEST(Residues, RationalityDecidedByFactorization) {
  // points t = z3/z0 with t^4 = -1; G = z0^3 + z0^2 z3 gives -(1 + t)/4
  auto rep = residue_report(fermat(), q("z0^3+z0^2*z3"), 1, 2);
  EXPECT_FALSE(rep.roots);
  // -(1 + t^2)/4 with t^2 = +-i
  auto rep2 = residue_report(fermat(), q("z0^3+z0*z3^2"), 1, 2);
  EXPECT_FALSE(rep2.roots);
  auto F = q("z0^4-z3^4+z1^4+z2^4");
  auto rep3 = residue_report(F, q("z0^3+z0*z3^2"), 1, 2);
  // t^4 = 1: t^2 = 1 twice and t^2 = -1 twice -> values -1/2 and 0
  ASSERT_TRUE(rep3.roots);
  EXPECT_EQ(sorted_strings(*rep3.roots), (std::vector<std::string>{"-1/2", "-1/2", "0", "0"}));
}

TEST(Residues, Linearity) {
  auto spec = pq_spec(1, 1, 2, {Rational(1), Rational(-1)});
  auto F = pq_polynomial(spec);
  auto om = F.partial(0), x = xi(spec);
  Rational a(3), b(mpq_class(-2, 5));
  auto mix = numeric_delta(F, a * om + b * x, 2, 3);
  auto vo = numeric_delta(F, om, 2, 3), vx = numeric_delta(F, x, 2, 3);
  ASSERT_EQ(mix.size(), vo.size());
  for (std::size_t k = 0; k < mix.size(); ++k) {
    auto combo = numeric::embed(a, 128) * vo[k].value + numeric::embed(b, 128) * vx[k].value;
    EXPECT_LT((mix[k].value - combo).magnitude(), 1e-28);
  }
}

TEST(Residues, CyclotomicEmbedding) {
  CyclotomicField Z8(8);
  auto z = numeric::embed(Z8.zeta(1), 128);
  EXPECT_NEAR(z.re.to_double(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(z.im.to_double(), std::sqrt(0.5), 1e-15);
  auto F = parse_poly<Cyclotomic>("z0^4+z1^4+z2^4+z3^4 + zeta(8)*z0^2*z3^2", Z8);
  auto vals = numeric_delta(F, F.partial(0), 1, 2);
  for (const auto& v : vals) EXPECT_LT((v.value - numeric::from_double(-1.0, 128)).magnitude(), 1e-30);
  auto c = delta_constant_certificate(F, F.partial(0), 1, 2);
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, -Z8.one());
  PrimeField P{101};
  auto Fp = parse_poly<ModP>("z0^4+z1^4+z2^4+z3^4", P);
  EXPECT_THROW(numeric_delta(Fp, Fp.partial(0), 1, 2), PreconditionError);
}

TEST(Residues, DegenerateConfigurations) {
  // line restriction z0^2 z3^2 is not squarefree
  auto F = q("z0^2*z3^2+z1^4+z2^4");
  EXPECT_THROW(delta_constant_certificate(F, F.partial(0), 1, 2), Degenerate);
  // [1:0] on the line has f = dF/dz0 = 0 with f squarefree
  auto H = q("z0^3*z3+z3^4+z1^4+z2^4");
  EXPECT_THROW(delta_value_polynomial(H, q("z0^3"), 1, 2), Degenerate);
  EXPECT_THROW(numeric_delta(H, q("z0^3"), 1, 2), Degenerate);
  EXPECT_THROW(delta_value_polynomial(fermat(), q("z0^3"), 1, 1), PreconditionError);
  EXPECT_THROW(delta_value_polynomial(fermat(), q("z0^2"), 1, 2), DegreeMismatch);
}

TEST(Residues, RootOfUnityCondition) {
  auto s = pq_spec(1, 1, 2, {Rational(1), Rational(-1)});
  EXPECT_TRUE(root_of_unity_family_condition(s));
  s.cs = {Rational(1), Rational(2)};
  EXPECT_FALSE(root_of_unity_family_condition(s));
  s.cs = {Rational(3), Rational(-3)};
  EXPECT_TRUE(root_of_unity_family_condition(s));
  CyclotomicField Z8(8);
  PQFamilySpec<Cyclotomic> c;
  c.field = Z8;
  c.cs = {Z8.zeta(1), Z8.zeta(3)};
  EXPECT_TRUE(root_of_unity_family_condition(c));
  c.cs = {Z8.zeta(1), Z8.zeta(1) + Z8.one()};
  EXPECT_FALSE(root_of_unity_family_condition(c));
  c.cs.clear();
  EXPECT_THROW(root_of_unity_family_condition(c), PreconditionError);
}
