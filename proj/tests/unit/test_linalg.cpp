#include <gtest/gtest.h>

#include "nlocus/core/parse.hpp"
#include "nlocus/linalg/subspace.hpp"
#include "nlocus/random.hpp"

using namespace nlocus;

namespace {

const RationalField QQ{};

HPoly<Rational> q(const std::string& s) { return parse_poly<Rational>(s, QQ); }

std::vector<SparseRow<Rational>> random_rows(Sampler& rng, std::size_t n, std::size_t cols, int density) {
  std::vector<SparseRow<Rational>> rows(n);
  for (auto& r : rows)
    for (std::uint32_t c = 0; c < cols; ++c) {
      if (rng.below(100) >= density) continue;
      long num = rng.coefficient();
      if (num == 0) continue;
      r.emplace_back(c, Rational(mpq_class(num, static_cast<unsigned long>(rng.below(5) + 1))));
    }
  return rows;
}

}  // namespace

TEST(Span, DuplicatesAndEmpty) {
  auto s = Subspace<Rational>::span(QQ, 2, {q("z0^2"), q("z0^2"), q("z1^2")});
  EXPECT_EQ(s.dim(), 2u);
  auto e = Subspace<Rational>::span(QQ, 3, std::vector<HPoly<Rational>>{});
  EXPECT_EQ(e.dim(), 0u);
  EXPECT_EQ(e.quotient_dim(), 20u);
  std::vector<HPoly<Rational>> all;
  for (const auto& m : monomials(4)) all.push_back(HPoly<Rational>::monomial(QQ, m));
  EXPECT_EQ(Subspace<Rational>::span(QQ, 4, all).dim(), 35u);
  EXPECT_EQ(Subspace<Rational>::full_degree(QQ, 4).quotient_dim(), 0u);
  EXPECT_THROW(Subspace<Rational>::span(QQ, 2, {q("z0^3")}), DegreeMismatch);
}

TEST(Span, EchelonIsIdempotent) {
  Sampler rng(5);
  for (int t = 0; t < 10; ++t) {
    auto rows = random_rows(rng, 8, 20, 40);
    auto s = Subspace<Rational>::span(QQ, 20, rows);
    auto again = Subspace<Rational>::span(QQ, 20, s.rows());
    EXPECT_EQ(again, s);
  }
}

TEST(Echelon, ModularPathMatchesGaussJordan) {
  // oracle: plain Gauss-Jordan over Q
  Sampler rng(17);
  for (int t = 0; t < 25; ++t) {
    std::size_t cols = 5 + static_cast<std::size_t>(rng.below(30));
    std::size_t n = 1 + static_cast<std::size_t>(rng.below(40));
    auto rows = random_rows(rng, n, cols, 30 + static_cast<int>(rng.below(60)));
    // force a dependent row now and then
    if (n > 2 && !rows[0].empty()) {
      SparseRow<Rational> combo;
      auto a = linalg::dense_from_sparse(rows[0], cols, QQ), b = linalg::dense_from_sparse(rows[1], cols, QQ);
      for (std::size_t c = 0; c < cols; ++c) a[c] = a[c] * Rational(3) - b[c] * Rational(mpq_class(1, 7));
      rows.push_back(linalg::sparse_from_dense(a));
    }
    auto fast = linalg::reduced_echelon<Rational>(QQ, cols, rows);
    auto slow = linalg::generic_echelon<Rational>(QQ, cols, rows);
    EXPECT_EQ(fast.pivots, slow.pivots);
    EXPECT_EQ(fast.rows, slow.rows);
    EXPECT_EQ(linalg::rank<Rational>(QQ, cols, rows), slow.rank());
  }
}

TEST(Echelon, LargeEntriesReconstruct) {
  // entries near 2^80 force several lifting steps
  std::vector<SparseRow<Rational>> rows;
  mpz_class big = mpz_class(1) << 80;
  for (int i = 0; i < 6; ++i) {
    SparseRow<Rational> r;
    for (std::uint32_t c = 0; c < 8; ++c)
      r.emplace_back(c, Rational(mpq_class(big + (i + 1) * (c + 3) * (c + 1) + i * i * i)));
    rows.push_back(r);
  }
  auto fast = linalg::reduced_echelon<Rational>(QQ, 8, rows);
  auto slow = linalg::generic_echelon<Rational>(QQ, 8, rows);
  EXPECT_EQ(fast.rows, slow.rows);
}

TEST(Kernel, RankNullity) {
  Sampler rng(23);
  // single functional "coefficient of z0^3"
  auto k = Subspace<Rational>::kernel(QQ, 20, {{{0u, Rational(1)}}}, 3);
  EXPECT_EQ(k.quotient_dim(), 1u);
  auto z = Subspace<Rational>::kernel(QQ, 20, {SparseRow<Rational>{}}, 3);
  EXPECT_EQ(z.dim(), 20u);
  for (int t = 0; t < 10; ++t) {
    auto rows = random_rows(rng, 5, 20, 70);
    auto ker = Subspace<Rational>::kernel(QQ, 20, rows, 3);
    auto rowspace = Subspace<Rational>::span(QQ, 20, rows);
    EXPECT_EQ(ker.dim() + rowspace.dim(), 20u);
    for (const auto& r : rows)
      for (const auto& v : ker.rows()) {
        Rational acc(0);
        auto dv = linalg::dense_from_sparse(v, 20, QQ);
        for (const auto& [c, x] : r) acc += x * dv[c];
        EXPECT_TRUE(acc.is_zero());
      }
    // cross-check over a prime field
    PrimeField F{65537};
    std::vector<SparseRow<ModP>> mrows;
    for (const auto& r : rows) {
      SparseRow<ModP> m;
      for (const auto& [c, x] : r) {
        ModP y = F.from_rational(x.value());
        if (!y.is_zero()) m.emplace_back(c, y);
      }
      mrows.push_back(m);
    }
    EXPECT_EQ(Subspace<ModP>::kernel(F, 20, mrows).dim(), ker.dim());
  }
}

TEST(Subspace, MembershipAndEquality) {
  auto a = Subspace<Rational>::span(QQ, 2, {q("z0^2"), q("z1^2")});
  auto b = Subspace<Rational>::span(QQ, 2, {q("z1^2"), q("z0^2")});
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.contains(q("z0^2+z1^2")));
  EXPECT_FALSE(a.contains(q("z2^2")));
  auto c = Subspace<Rational>::span(QQ, 2, {q("z2^2")});
  EXPECT_THROW((void)a.sum(Subspace<Rational>::full_degree(QQ, 3)), DegreeMismatch);
  EXPECT_EQ(a.intersect(c).dim(), 0u);
}

TEST(Subspace, DimensionFormula) {
  Sampler rng(31);
  for (int t = 0; t < 15; ++t) {
    std::vector<HPoly<Rational>> ga, gb;
    int na = 1 + static_cast<int>(rng.below(8)), nb = 1 + static_cast<int>(rng.below(8));
    // shared vectors make the intersection nontrivial
    auto shared = rng.poly<Rational>(QQ, 2, 50);
    ga.push_back(shared);
    gb.push_back(shared);
    for (int i = 0; i < na; ++i) ga.push_back(rng.poly<Rational>(QQ, 2, 30));
    for (int i = 0; i < nb; ++i) gb.push_back(rng.poly<Rational>(QQ, 2, 30));
    auto a = Subspace<Rational>::span(QQ, 2, ga), b = Subspace<Rational>::span(QQ, 2, gb);
    auto s = a.sum(b), i = a.intersect(b);
    EXPECT_EQ(s.dim() + i.dim(), a.dim() + b.dim());
    EXPECT_TRUE(s.contains(a));
    EXPECT_TRUE(a.contains(i));
    EXPECT_TRUE(b.contains(i));
  }
}
