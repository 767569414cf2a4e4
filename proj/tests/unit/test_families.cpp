#include <gtest/gtest.h>

#include <algorithm>

#include "nlocus/families.hpp"

using namespace nlocus;

namespace {

const RationalField QQ{};

HPoly<Rational> q(const std::string& s, std::optional<int> d = std::nullopt) { return parse_poly<Rational>(s, QQ, d); }

PQFamilySpec<Rational> standard_spec() {
  PQFamilySpec<Rational> s;
  s.field = QQ;
  s.sigma = {1, 2, 3};
  s.p = 1;
  s.q = 1;
  s.r = 2;
  s.c = Rational(1);
  s.cs = {Rational(1), Rational(-1)};
  s.w = q("z0");
  s.A = q("z0^3+z1^3+z2^3+z3^3");
  return s;
}

std::vector<std::string> sorted_strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

// Random PQ spec with canonical sigma and nonzero distinct roots.
PQFamilySpec<Rational> random_spec(Sampler& rng, int p, int qq, int d) {
  PQFamilySpec<Rational> s;
  s.field = QQ;
  s.p = p;
  s.q = qq;
  s.r = d / (p + qq);
  std::vector<std::array<int, 3>> perms;
  if (qq == 0) perms = {{1, 2, 3}, {1, 3, 2}, {2, 3, 1}};
  else perms = {{1, 2, 3}, {2, 1, 3}, {3, 1, 2}};
  s.sigma = perms[static_cast<std::size_t>(rng.below(3))];
  s.c = Rational(1);
  std::vector<long> used;
  while (static_cast<int>(s.cs.size()) < s.r) {
    long v = rng.nonzero_coefficient();
    if (std::find(used.begin(), used.end(), v) != used.end()) continue;
    used.push_back(v);
    s.cs.push_back(Rational(v));
  }
  s.w = q("z0") + rng.poly<Rational>(QQ, 1, 50);
  while (s.w.coefficient(Mono::variable(0)).is_zero()) s.w = q("z0") + rng.poly<Rational>(QQ, 1, 50);
  s.A = rng.poly<Rational>(QQ, d - 1);
  return s;
}

}  // namespace

TEST(Families, BuildPQExamples) {
  auto s = standard_spec();
  EXPECT_EQ(pq_polynomial(s), q("z0*(z0^3+z1^3+z2^3+z3^3) + z1^4 - z2^2*z3^2"));
  auto lin = s;
  lin.p = 1;
  lin.q = 0;
  lin.r = 4;
  lin.cs = {Rational(1), Rational(2), Rational(3), Rational(4)};
  EXPECT_EQ(pq_polynomial(lin).degree(), 4);
  EXPECT_EQ(restrict_line(pq_polynomial(lin) - q("z0^4+z0*z1^3+z0*z2^3+z0*z3^3"), 0, 3).degree, 4);
  auto bad = s;
  bad.r = 3;
  bad.cs.push_back(Rational(2));
  EXPECT_THROW(pq_polynomial(bad), PreconditionError);
  auto nonco = s;
  nonco.p = 2;
  nonco.q = 2;
  nonco.r = 1;
  nonco.cs = {Rational(1)};
  EXPECT_THROW(pq_polynomial(nonco), PreconditionError);
}

TEST(Families, XiFormula) {
  EXPECT_EQ(xi(standard_spec()), q("3*z2^3 - 3*z3^3"));
}

TEST(Families, EqualityCaseOnStandardMember) {
  Sampler rng(4);
  auto [spec, R] = transversal_pq_member(standard_spec(), rng);
  EXPECT_EQ(family_codim(R, spec), 10u);
  auto sig = sigma_space_check(R, spec);
  EXPECT_TRUE(sig.equal);
  EXPECT_EQ(sig.kernel.dim(), 2u);
  // oracle: the defining condition against the whole tangent ideal
  EXPECT_EQ(tangent_annihilator(R, tangent_ideal_pq(R, spec)), sig.kernel);
  auto T = tangent_ideal_pq(R, spec);
  EXPECT_TRUE(T.contains(R.surface()));
  for (const auto& m : monomials(3)) EXPECT_TRUE(T.contains(spec.w * HPoly<Rational>::monomial(QQ, m)));
  auto x = xi(spec);
  auto th = th31_check(R, x);
  EXPECT_EQ(th.quotient_dim, 10u);
  EXPECT_TRUE(th.equality);
  EXPECT_TRUE(th.ci_certified);
  auto th2 = th31_check(R, omega(R) + x);
  EXPECT_EQ(th2.quotient_dim, 10u);
  EXPECT_TRUE(th2.ci_certified);
  EXPECT_EQ(annihilator_piece(R, x, 4), T);
  EXPECT_EQ(annihilator_piece(R, x, 1), Subspace<Rational>::span(QQ, 1, {spec.w}));
}

TEST(Families, CodimensionAcrossDegrees) {
  Sampler rng(12);
  for (int d : {4, 5, 6}) {
    auto s = random_spec(rng, 1, d % 2 == 0 ? 1 : 0, d);
    if (d == 6) s = random_spec(rng, 2, 1, 6);
    auto [spec, R] = transversal_pq_member(s, rng);
    EXPECT_EQ(static_cast<long>(family_codim(R, spec)), binomial(d + 2, 2) - 5) << d;
    EXPECT_EQ(mult_kernel(R, spec.w).dim(), 2u);
    EXPECT_TRUE(sigma_space_check(R, spec).equal);
  }
}

TEST(Families, SigmaSpaceOutsideFamily) {
  Sampler rng(19);
  auto [spec, R] = transversal_pq_member(standard_spec(), rng);
  // same w, generic surface: only omega survives
  for (;;) {
    auto F = rng.poly<Rational>(QQ, 4);
    try {
      auto G = JacobianRing<Rational>::build(F);
      auto k = mult_kernel(G, spec.w);
      EXPECT_EQ(k.dim(), 1u);
      EXPECT_TRUE(k.contains(omega(G)));
      break;
    } catch (const NotTransversal&) {
    }
  }
}

TEST(Families, GammaSpace) {
  Sampler rng(21);
  for (;;) {
    auto F = rng.poly<Rational>(QQ, 4);
    try {
      auto R = JacobianRing<Rational>::build(F);
      auto g = gamma_space(R, rng.nonzero_poly<Rational>(QQ, 1));
      EXPECT_EQ(g.dim_phi, 6u);
      EXPECT_TRUE(g.basis.empty());
      break;
    } catch (const NotTransversal&) {
    }
  }
  for (auto [p, qq] : {std::pair{1, 1}, std::pair{1, 0}, std::pair{2, 1}}) {
    int d = p + qq == 3 ? 6 : 4;
    auto [spec, R] = transversal_pq_member(random_spec(rng, p, qq, d), rng);
    auto g = gamma_space(R, spec.w);
    EXPECT_EQ(g.dim_phi + g.basis.size(), 6u);
    EXPECT_GE(g.basis.size(), 1u);
    for (const auto& datum : g.basis) EXPECT_TRUE(in_gamma(R, spec.w, datum));
    // (0, q, -p) on the sigma slots with L = -(q z_s2 dw/dz_s2 - p z_s3 dw/dz_s3) / w0
    GammaDatum<Rational> expected{{Rational(0), Rational(0), Rational(0)}, HPoly<Rational>(QQ, 1)};
    expected.gamma[static_cast<std::size_t>(spec.sigma[1] - 1)] = Rational(spec.q);
    expected.gamma[static_cast<std::size_t>(spec.sigma[2] - 1)] = Rational(-spec.p);
    auto zs2 = HPoly<Rational>::variable(QQ, spec.sigma[1]), zs3 = HPoly<Rational>::variable(QQ, spec.sigma[2]);
    Rational w0 = spec.w.coefficient(Mono::variable(0));
    expected.L = (-w0.inverse()) * (Rational(spec.q) * (zs2 * spec.w.partial(spec.sigma[1])) -
                                    Rational(spec.p) * (zs3 * spec.w.partial(spec.sigma[2])));
    EXPECT_TRUE(in_gamma(R, spec.w, expected));
    auto space = euler_constraint_space(spec.w, expected, d);
    EXPECT_TRUE(space.contains(R.surface()));
  }
}

TEST(Families, EulerConstraintSpecializations) {
  auto w = q("z0+z1-2*z3");
  GammaDatum<Rational> euler{{Rational(1), Rational(1), Rational(1)}, q("z0")};
  auto space = euler_constraint_space(w, euler, 4);
  EXPECT_TRUE(space.contains(multiples(w, 4)));
  EXPECT_EQ(space, multiples(w, 4));
  GammaDatum<Rational> pure{{Rational(0), Rational(0), Rational(0)}, q("z2")};
  auto sp2 = euler_constraint_space(w, pure, 4);
  // oracle: G with dG/dz0 in w P^2, checked monomial by monomial on a basis
  auto W3 = multiples(w, 3);
  for (const auto& g : sp2.basis_polys()) EXPECT_TRUE(W3.contains(g.partial(0)));
  Sampler rng(9);
  for (int t = 0; t < 20; ++t) {
    auto g = rng.poly<Rational>(QQ, 4, 30) + (rng.below(2) ? multiples(w, 4).basis_polys()[0] : HPoly<Rational>(QQ, 4));
    EXPECT_EQ(sp2.contains(g), W3.contains(g.partial(0)));
  }
  EXPECT_TRUE(sp2.contains(q("z1^4-z3^2*z2^2")));
}

TEST(Families, SupportLineRecover) {
  auto line = support_line_recover(q("z1^4 - z2^2*z3^2"), {Rational(0), Rational(1), Rational(-1)});
  ASSERT_TRUE(line);
  EXPECT_EQ(line->p, 1);
  EXPECT_EQ(line->q, 1);
  EXPECT_EQ(line->r, 2);
  ASSERT_TRUE(line->roots);
  EXPECT_EQ(sorted_strings(*line->roots), (std::vector<std::string>{"-1", "1"}));
  // two vertex points only: degenerate (1, 0) branch
  auto bin = support_line_recover(q("z1^4 + z2^4"), {Rational(0), Rational(0), Rational(1)});
  ASSERT_TRUE(bin);
  EXPECT_EQ(bin->p, 1);
  EXPECT_EQ(bin->q, 0);
  EXPECT_EQ(bin->r, 4);
  EXPECT_EQ(bin->sigma, (std::array<int, 3>{1, 2, 3}));
  EXPECT_FALSE(bin->roots);  // x^4 + 1 does not split over Q
  EXPECT_THROW(support_line_recover(q("z1^2*z2^2"), {Rational(0), Rational(1), Rational(-1)}), PreconditionError);
  EXPECT_THROW(support_line_recover(q("z1^4 - z2^2*z3^2"), {Rational(1), Rational(0), Rational(0)}), PreconditionError);
}

TEST(Families, ClassifyRoundTrip) {
  Sampler rng(7);
  for (auto [p, qq, d] : {std::tuple{1, 0, 4}, std::tuple{1, 1, 4}, std::tuple{2, 1, 6}, std::tuple{1, 1, 6}}) {
    for (int t = 0; t < 2; ++t) {
      auto spec = random_spec(rng, p, qq, d);
      auto F = pq_polynomial(spec);
      auto got = classify_with_witness(F, spec.w);
      ASSERT_TRUE(got);
      ASSERT_TRUE(got->spec);
      EXPECT_EQ(got->spec->sigma, spec.sigma);
      EXPECT_EQ(got->spec->p, spec.p);
      EXPECT_EQ(got->spec->q, spec.q);
      EXPECT_EQ(got->spec->r, spec.r);
      EXPECT_EQ(sorted_strings(got->spec->cs), sorted_strings(spec.cs));
      EXPECT_EQ(got->scale * pq_polynomial(*got->spec), F);
    }
  }
  EXPECT_FALSE(classify_with_witness(q("z0^4+z1^4+z2^4+z3^4"), q("z0")));
  auto spec = standard_spec();
  EXPECT_FALSE(classify_with_witness(pq_polynomial(spec), q("z0+z1+2*z2-z3")));
}

TEST(Families, EulerOdeKernel) {
  auto L = q("z1+2*z2");
  auto z0 = q("z0");
  for (int m = 0; m <= 6; ++m) {
    for (int a = 0; a <= m; ++a) {
      auto k = euler_ode_kernel(Rational(a), L - z0, L, m);
      ASSERT_EQ(k.dim(), 1u);
      EXPECT_TRUE(k.contains((L - z0).pow(a) * L.pow(m - a)));
    }
    for (auto a : {Rational(m + 1), Rational(-1), Rational(mpq_class(1, 2))})
      EXPECT_EQ(euler_ode_kernel(a, L - z0, L, m).dim(), 0u);
    auto constants = euler_ode_kernel(Rational(0), z0, L, m);
    EXPECT_EQ(constants, Subspace<Rational>::span(QQ, m, {L.pow(m)}));
  }
  EXPECT_THROW(euler_ode_kernel(Rational(1), q("z3"), L, 2), PreconditionError);
}

TEST(Families, CaseOneChain) {
  auto u = q("z1");
  auto L = q("z2-3*z3");
  auto z0 = q("z0");
  for (int d = 4; d <= 6; ++d) {
    auto chain = case_one_chain<Rational>(QQ, d, u);
    ASSERT_EQ(static_cast<int>(chain.size()), d + 1);
    HPoly<Rational> total(QQ, d);
    for (int nu = 0; nu <= d; ++nu) {
      Mono m;
      m.e[0] = d - nu;
      EXPECT_EQ(chain[static_cast<std::size_t>(nu)],
                HPoly<Rational>::monomial(QQ, m, Rational((nu % 2 ? -1 : 1) * binomial(d, nu))));
      total += L.pow(nu) * chain[static_cast<std::size_t>(nu)];
    }
    EXPECT_EQ(total, (z0 - L).pow(d));
  }
}

TEST(Families, BinaryProjection) {
  int d = 4;
  EXPECT_EQ(binary_projection_dim(Subspace<Rational>::full_degree(QQ, d)), 5u);
  EXPECT_EQ(binary_projection_dim(multiples(q("z2"), d)), 0u);
  auto w = q("z1+z0-z3");
  Sampler rng(2);
  auto s = standard_spec();
  s.w = q("z0+z1");
  auto [spec, R] = transversal_pq_member(s, rng);
  EXPECT_GE(binary_projection_dim(tangent_ideal_pq(R, spec)), static_cast<std::size_t>(d));
  EXPECT_EQ(binary_projection_dim(multiples(w, d)), 4u);
}

TEST(Families, Thresholds) {
  auto t4 = threshold_check(4);
  EXPECT_EQ(t4.floor, 10);
  EXPECT_TRUE(t4.t1);
  EXPECT_FALSE(t4.t2);
  EXPECT_FALSE(threshold_check(3).t1);
  EXPECT_TRUE(threshold_check(6).t2);
  EXPECT_FALSE(threshold_check(5).t2);
  EXPECT_EQ(threshold_check(10).floor, 61);
  EXPECT_TRUE(threshold_check(10).t3);
  EXPECT_FALSE(threshold_check(9).t3);
  for (int d = 3; d < 40; ++d) {
    auto a = threshold_check(d), b = threshold_check(d + 1);
    EXPECT_LE(a.t1, b.t1);
    EXPECT_LE(a.t2, b.t2);
    EXPECT_LE(a.t3, b.t3);
  }
}

TEST(Families, FermatIsT12MemberOverZeta8) {
  CyclotomicField K8(8);
  auto P = [&](const std::string& s) { return parse_poly<Cyclotomic>(s, K8); };
  TijFamilySpec<Cyclotomic> s;
  s.field = K8;
  s.pair = {1, 2};
  s.w = P("z0 - zeta(8)*z3");
  auto A = exact_divide(P("z0^4+z3^4"), s.w);
  ASSERT_TRUE(A);
  s.A = *A;
  s.B = HPoly<Cyclotomic>(K8, 2);
  s.ci = K8.one();
  s.cj = K8.one();
  EXPECT_EQ(tij_polynomial(s), P("z0^4+z1^4+z2^4+z3^4"));
  auto bad = s;
  bad.ci = K8.zero();
  EXPECT_THROW(tij_polynomial(bad), PreconditionError);
}

TEST(Families, TijCodimension) {
  // oracle: modulo w the products z_i z_j B contribute dim P^(d-2) of three
  // variables; z_i^d, z_j^d add two, and moving w adds three more
  Sampler rng(33);
  for (int d : {4, 5}) {
    TijFamilySpec<Rational> s;
    s.field = QQ;
    s.pair = {1, 2};
    s.w = q("z0") + rng.poly<Rational>(QQ, 1);
    s.A = rng.poly<Rational>(QQ, d - 1);
    s.B = rng.poly<Rational>(QQ, d - 2);
    s.ci = Rational(1);
    s.cj = Rational(2);
    auto c = family_codim(s);
    long fixed = binomial(d + 3, 3) - (binomial(d + 2, 3) + binomial(d, 2) + 2);
    EXPECT_EQ(static_cast<long>(c.fixed_w_codim), fixed) << d;
    EXPECT_EQ(static_cast<long>(c.codim), fixed - 3) << d;
    EXPECT_EQ(c.parameter_count, 2L * d - 1);
    EXPECT_TRUE(c.matches_parameter_count);
  }
}

TEST(Families, CaseTwoMultiplicationKernel) {
  // F = w A + sum_mu b_mu z3^mu (L - z0)^(d - mu), w and L in span{z1, z2}
  Sampler rng(55);
  auto w = q("z1-2*z2"), L = q("z1+z2"), z0 = q("z0"), z3 = q("z3");
  int d = 4;
  for (int attempt = 0; attempt < 20; ++attempt) {
    auto A = rng.poly<Rational>(QQ, d - 1);
    HPoly<Rational> F = w * A;
    for (int mu = 0; mu <= d; ++mu) F += Rational(rng.nonzero_coefficient()) * (z3.pow(mu) * (L - z0).pow(d - mu));
    try {
      auto R = JacobianRing<Rational>::build(F);
      auto k = mult_kernel(R, w);
      EXPECT_TRUE(k.contains(omega(R)));
      EXPECT_TRUE(k.contains(eta(A, L)));
      EXPECT_EQ(k, Subspace<Rational>::span(QQ, d - 1, {omega(R), eta(A, L)}));
      return;
    } catch (const NotTransversal&) {
    }
  }
  FAIL() << "no transversal case-two member";
}

TEST(Families, KappaOnFermat) {
  auto R = JacobianRing<Rational>::build(q("z0^4+z1^4+z2^4+z3^4"));
  EXPECT_EQ(kappa(R), q("4*z1^3"));
  auto k = mult_kernel(R, q("z1"));
  EXPECT_TRUE(k.contains(kappa(R)));
  EXPECT_TRUE(k.contains(omega(R)));
}

TEST(Families, BlockRoundTrip) {
  auto s = standard_spec();
  auto text = to_block(s);
  auto back = pq_from_block<Rational>(parse_key_values(text), QQ);
  EXPECT_EQ(pq_polynomial(back), pq_polynomial(s));
  EXPECT_EQ(to_block(back), text);
  CyclotomicField K8(8);
  PQFamilySpec<Cyclotomic> c;
  c.field = K8;
  c.r = 2;
  c.c = K8.one();
  c.cs = {K8.zeta(1) + K8.one(), K8.zeta(3)};
  c.w = parse_poly<Cyclotomic>("z0", K8);
  c.A = parse_poly<Cyclotomic>("z1^3", K8);
  auto ctext = to_block(c);
  EXPECT_EQ(to_block(pq_from_block<Cyclotomic>(parse_key_values(ctext), K8)), ctext);
  EXPECT_THROW(pq_from_block<Rational>(parse_key_values("p = 1\n"), QQ), PreconditionError);
}
