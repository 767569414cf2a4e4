#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nlocus/errors.hpp"
#include "nlocus/linalg/modular.hpp"
#include "nlocus/scalar/scalar.hpp"

namespace nlocus::linalg {

// Sparse row: (column, value) pairs with increasing columns, no zeros.
template <Scalar K>
using SparseRow = std::vector<std::pair<std::uint32_t, K>>;

// Reduced row echelon form.  rows[i] has a leading 1 in column pivots[i].
template <Scalar K>
struct Echelon {
  std::size_t cols = 0;
  std::vector<SparseRow<K>> rows;
  std::vector<std::uint32_t> pivots;

  std::size_t rank() const { return pivots.size(); }
};

template <Scalar K>
SparseRow<K> sparse_from_dense(const std::vector<K>& v) {
  SparseRow<K> r;
  for (std::size_t c = 0; c < v.size(); ++c)
    if (!v[c].is_zero()) r.emplace_back(static_cast<std::uint32_t>(c), v[c]);
  return r;
}

template <Scalar K>
std::vector<K> dense_from_sparse(const SparseRow<K>& r, std::size_t cols, const FieldOf<K>& f) {
  std::vector<K> v(cols, f.zero());
  for (const auto& [c, x] : r) v[c] = x;
  return v;
}

template <Scalar K>
Echelon<K> identity_echelon(const FieldOf<K>& f, std::size_t cols) {
  Echelon<K> e;
  e.cols = cols;
  for (std::size_t c = 0; c < cols; ++c) {
    e.pivots.push_back(static_cast<std::uint32_t>(c));
    e.rows.push_back({{static_cast<std::uint32_t>(c), f.one()}});
  }
  return e;
}

// Plain Gauss-Jordan over any exact field.
template <Scalar K>
Echelon<K> generic_echelon(const FieldOf<K>& f, std::size_t cols, const std::vector<SparseRow<K>>& input) {
  std::vector<SparseRow<K>> pivot_row(cols);
  std::vector<bool> has_pivot(cols, false);
  std::size_t rank = 0;
  std::vector<K> v(cols, f.zero());
  for (const auto& row : input) {
    if (rank == cols) break;
    if (row.empty()) continue;
    for (auto& x : v)
      if (!x.is_zero()) x = f.zero();
    for (const auto& [c, x] : row) v[c] += x;
    for (std::size_t c = 0; c < cols; ++c) {
      if (v[c].is_zero()) continue;
      if (!has_pivot[c]) {
        K inv = v[c].inverse();
        SparseRow<K> nr;
        for (std::size_t j = c; j < cols; ++j)
          if (!v[j].is_zero()) nr.emplace_back(static_cast<std::uint32_t>(j), v[j] * inv);
        pivot_row[c] = std::move(nr);
        has_pivot[c] = true;
        ++rank;
        break;
      }
      K t = v[c];
      for (const auto& [j, x] : pivot_row[c]) v[j] -= t * x;
    }
  }
  // back substitution, latest pivots first
  Echelon<K> out;
  out.cols = cols;
  for (std::size_t c = cols; c-- > 0;) {
    if (!has_pivot[c]) continue;
    auto& row = pivot_row[c];
    bool needs = false;
    for (std::size_t k = 1; k < row.size(); ++k)
      if (has_pivot[row[k].first]) needs = true;
    if (!needs) continue;
    for (auto& x : v)
      if (!x.is_zero()) x = f.zero();
    for (const auto& [j, x] : row) v[j] = x;
    for (std::size_t k = c + 1; k < cols; ++k) {
      if (!has_pivot[k] || v[k].is_zero()) continue;
      K t = v[k];
      for (const auto& [j, x] : pivot_row[k]) v[j] -= t * x;
    }
    SparseRow<K> nr;
    for (std::size_t j = c; j < cols; ++j)
      if (!v[j].is_zero()) nr.emplace_back(static_cast<std::uint32_t>(j), v[j]);
    row = std::move(nr);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (!has_pivot[c]) continue;
    out.pivots.push_back(static_cast<std::uint32_t>(c));
    out.rows.push_back(std::move(pivot_row[c]));
  }
  return out;
}

namespace detail {

using IntRow = std::vector<std::pair<std::uint32_t, mpz_class>>;

inline IntRow clear_denominators(const SparseRow<Rational>& row) {
  mpz_class l = 1;
  for (const auto& [c, x] : row) l = lcm(l, x.value().get_den());
  IntRow out;
  out.reserve(row.size());
  for (const auto& [c, x] : row) out.emplace_back(c, x.value().get_num() * (l / x.value().get_den()));
  return out;
}

inline std::vector<ModRow> reduce_rows(const std::vector<IntRow>& rows, std::uint64_t p) {
  std::vector<ModRow> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out[r].reserve(rows[r].size());
    for (const auto& [c, x] : rows[r]) {
      std::uint64_t v = mpz_fdiv_ui(x.get_mpz_t(), p);
      if (v) out[r].emplace_back(c, v);
    }
  }
  return out;
}

// n/d with |n|, d <= bound and n = u d mod m, if it exists.
inline bool rational_reconstruct(const mpz_class& u, const mpz_class& m, const mpz_class& bound, mpz_class& num,
                                 mpz_class& den) {
  mpz_class r0 = m, r1 = u, t0 = 0, t1 = 1, q, tmp;
  while (r1 > bound) {
    mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || abs(t1) > bound) return false;
  if (gcd(r1, t1) != 1) return false;
  if (t1 < 0) {
    num = -r1;
    den = -t1;
  } else {
    num = r1;
    den = t1;
  }
  return true;
}

// Attempts the RREF whose pivot columns are those found mod p, by p-adic
// lifting of A X = B and exact verification against every input row.
inline std::optional<Echelon<Rational>> dixon_attempt(std::size_t cols, const std::vector<IntRow>& rows,
                                                      const ModularEchelon& me) {
  const std::uint64_t p = me.p;
  const std::size_t r = me.rank();
  std::vector<long> slot(cols, -1);  // pivot index, or -(nonpivot index) - 2
  std::vector<std::uint32_t> nonpivots;
  for (std::size_t i = 0; i < r; ++i) slot[me.pivots[i]] = static_cast<long>(i);
  for (std::size_t c = 0; c < cols; ++c)
    if (slot[c] < 0) {
      slot[c] = -static_cast<long>(nonpivots.size()) - 2;
      nonpivots.push_back(static_cast<std::uint32_t>(c));
    }
  const std::size_t k = nonpivots.size();

  std::vector<std::vector<std::pair<std::uint32_t, mpz_class>>> a_int(r);
  std::vector<std::vector<std::uint64_t>> a_mod(r, std::vector<std::uint64_t>(r, 0));
  std::vector<std::vector<mpz_class>> resid(r, std::vector<mpz_class>(k, 0));
  std::size_t hadamard_bits = 0;
  for (std::size_t i = 0; i < r; ++i) {
    mpz_class norm2 = 0;
    for (const auto& [c, x] : rows[me.source[i]]) {
      norm2 += x * x;
      long s = slot[c];
      if (s >= 0) {
        a_int[i].emplace_back(static_cast<std::uint32_t>(s), x);
        a_mod[i][static_cast<std::size_t>(s)] = mpz_fdiv_ui(x.get_mpz_t(), p);
      } else {
        resid[i][static_cast<std::size_t>(-s - 2)] = x;
      }
    }
    hadamard_bits += mpz_sizeinbase(norm2.get_mpz_t(), 2) / 2 + 1;
  }
  ModularSolver solver(p, std::move(a_mod));
  if (solver.singular()) return std::nullopt;

  const std::size_t needed_bits = 2 * hadamard_bits + 4;
  std::vector<std::vector<mpz_class>> acc(r, std::vector<mpz_class>(k, 0));
  mpz_class modulus = 1;
  std::size_t next_check = 48;
  std::vector<std::uint64_t> col(r);

  auto try_finish = [&]() -> std::optional<Echelon<Rational>> {
    mpz_class bound;
    mpz_class half = modulus / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    // cheap probe on one entry first
    {
      mpz_class n, d;
      if (!rational_reconstruct(acc[r - 1][k - 1], modulus, bound, n, d)) return std::nullopt;
    }
    mpz_class den = 1;
    std::vector<std::vector<mpz_class>> num(r, std::vector<mpz_class>(k));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        mpz_class y = acc[i][j] * den;
        mpz_fdiv_r(y.get_mpz_t(), y.get_mpz_t(), modulus.get_mpz_t());
        if (y > half) y -= modulus;
        if (abs(y) <= bound) {
          num[i][j] = y;
          continue;
        }
        mpz_class n, d;
        if (y < 0) y += modulus;
        if (!rational_reconstruct(y, modulus, bound, n, d)) return std::nullopt;
        den *= d;
        for (std::size_t i2 = 0; i2 <= i; ++i2)
          for (std::size_t j2 = 0; j2 < (i2 == i ? j : k); ++j2)
            if (num[i2][j2] != 0) num[i2][j2] *= d;
        num[i][j] = n;
      }
    }
    // echelon shape: nothing left of a row's pivot
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < k && nonpivots[j] < me.pivots[i]; ++j)
        if (num[i][j] != 0) return std::nullopt;
    // every input row must satisfy v_N = v_P X
    std::vector<std::pair<std::size_t, const mpz_class*>> vp;
    std::vector<const mpz_class*> vn(k, nullptr);
    mpz_class t;
    for (const auto& row : rows) {
      vp.clear();
      std::fill(vn.begin(), vn.end(), nullptr);
      for (const auto& [c, x] : row) {
        long s = slot[c];
        if (s >= 0) vp.emplace_back(static_cast<std::size_t>(s), &x);
        else vn[static_cast<std::size_t>(-s - 2)] = &x;
      }
      for (std::size_t j = 0; j < k; ++j) {
        if (vn[j]) t = den * *vn[j];
        else t = 0;
        for (const auto& [i, x] : vp) mpz_submul(t.get_mpz_t(), x->get_mpz_t(), num[i][j].get_mpz_t());
        if (t != 0) return std::nullopt;
      }
    }
    Echelon<Rational> e;
    e.cols = cols;
    e.pivots = me.pivots;
    for (std::size_t i = 0; i < r; ++i) {
      SparseRow<Rational> row;
      row.emplace_back(me.pivots[i], Rational(1));
      for (std::size_t j = 0; j < k; ++j)
        if (num[i][j] != 0) row.emplace_back(nonpivots[j], Rational(num[i][j], den));
      std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      e.rows.push_back(std::move(row));
    }
    return e;
  };

  for (;;) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < r; ++i) col[i] = mpz_fdiv_ui(resid[i][j].get_mpz_t(), p);
      solver.solve(col);
      for (std::size_t i = 0; i < r; ++i) {
        if (col[i]) mpz_addmul_ui(acc[i][j].get_mpz_t(), modulus.get_mpz_t(), col[i]);
      }
      for (std::size_t i = 0; i < r; ++i) {
        auto& rv = resid[i][j];
        for (const auto& [s, a] : a_int[i])
          if (col[s]) mpz_submul_ui(rv.get_mpz_t(), a.get_mpz_t(), col[s]);
        mpz_divexact_ui(rv.get_mpz_t(), rv.get_mpz_t(), p);
      }
    }
    modulus *= p;
    std::size_t bits = mpz_sizeinbase(modulus.get_mpz_t(), 2);
    if (bits >= next_check || bits >= needed_bits) {
      if (auto e = try_finish()) return e;
      if (bits >= needed_bits) return std::nullopt;
      next_check = bits + bits / 2;
    }
  }
}

}  // namespace detail

inline constexpr int kModularAttempts = 5;

// RREF over Q: pivots found mod p, exact values by p-adic lifting, result
// verified exactly; falls back to plain elimination after repeated failures.
inline Echelon<Rational> rational_echelon(std::size_t cols, const std::vector<SparseRow<Rational>>& input) {
  std::vector<detail::IntRow> rows;
  rows.reserve(input.size());
  for (const auto& r : input)
    if (!r.empty()) rows.push_back(detail::clear_denominators(r));
  Echelon<Rational> empty;
  empty.cols = cols;
  if (rows.empty()) return empty;
  for (int attempt = 0; attempt < kModularAttempts; ++attempt) {
    std::uint64_t p = modular_prime(1, attempt);
    auto me = modular_echelon(p, cols, detail::reduce_rows(rows, p));
    if (me.rank() == cols) return identity_echelon<Rational>(RationalField{}, cols);
    if (me.rank() == 0) continue;
    if (auto e = detail::dixon_attempt(cols, rows, me)) return *e;
  }
  return generic_echelon<Rational>(RationalField{}, cols, input);
}

// Rank of the rows reduced through `map`, or nothing when an entry has a
// denominator divisible by the prime.
template <Scalar K>
std::optional<std::size_t> modular_rank(const ModularMap& map, std::size_t cols, const std::vector<SparseRow<K>>& rows) {
  std::vector<ModRow> mr(rows.size());
  try {
    if constexpr (is_rational_v<K>) {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto ir = detail::clear_denominators(rows[r]);
        for (const auto& [c, x] : ir) {
          std::uint64_t v = mpz_fdiv_ui(x.get_mpz_t(), map.p);
          if (v) mr[r].emplace_back(c, v);
        }
      }
    } else {
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& [c, x] : rows[r]) {
          std::uint64_t v = reduce_mod(x, map);
          if (v) mr[r].emplace_back(c, v);
        }
    }
  } catch (const DivisionByZero&) {
    return std::nullopt;
  }
  return modular_echelon(map.p, cols, mr).rank();
}

template <Scalar K>
Echelon<K> reduced_echelon(const FieldOf<K>& f, std::size_t cols, const std::vector<SparseRow<K>>& input) {
  if constexpr (is_rational_v<K>) {
    return rational_echelon(cols, input);
  } else if constexpr (is_modp_v<K>) {
    std::vector<ModRow> mr(input.size());
    for (std::size_t r = 0; r < input.size(); ++r)
      for (const auto& [c, x] : input[r])
        if (!x.is_zero()) mr[r].emplace_back(c, x.value());
    auto me = modular_echelon(f.p, cols, mr, true);
    Echelon<K> e;
    e.cols = cols;
    e.pivots = me.pivots;
    for (const auto& row : me.rows) {
      SparseRow<K> sr;
      for (std::size_t c = 0; c < cols; ++c)
        if (row[c]) sr.emplace_back(static_cast<std::uint32_t>(c), ModP(row[c], f.p));
      e.rows.push_back(std::move(sr));
    }
    return e;
  } else {
    // A full rank image under a homomorphism to F_p certifies full rank.
    for (int attempt = 0; attempt < 2; ++attempt) {
      auto r = modular_rank<K>(modular_map(f, attempt), cols, input);
      if (r && *r == cols) return identity_echelon<K>(f, cols);
      if (r) break;
    }
    return generic_echelon<K>(f, cols, input);
  }
}

// Rank with modular lower bounds; `upper` is a known bound that a modular
// rank may certify.
template <Scalar K>
std::size_t rank(const FieldOf<K>& f, std::size_t cols, const std::vector<SparseRow<K>>& rows,
                 std::optional<std::size_t> upper = std::nullopt) {
  std::size_t nonzero = 0;
  for (const auto& r : rows) nonzero += !r.empty();
  std::size_t cap = std::min(nonzero, cols);
  if (upper) cap = std::min(cap, *upper);
  if (cap == 0) return 0;
  if constexpr (is_modp_v<K>) {
    return *modular_rank<K>(modular_map(f, 0), cols, rows);
  } else {
    for (int attempt = 0; attempt < 2; ++attempt) {
      auto r = modular_rank<K>(modular_map(f, attempt), cols, rows);
      if (r && *r >= cap) return *r;
    }
    return reduced_echelon<K>(f, cols, rows).rank();
  }
}

}  // namespace nlocus::linalg
