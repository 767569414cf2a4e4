#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nlocus/core/hpoly.hpp"
#include "nlocus/linalg/echelon.hpp"

namespace nlocus {

template <Scalar K>
using SparseRow = linalg::SparseRow<K>;

template <Scalar K>
SparseRow<K> to_row(const HPoly<K>& p) {
  SparseRow<K> r;
  r.reserve(p.size());
  for (const auto& [m, c] : p.terms()) r.emplace_back(static_cast<std::uint32_t>(monomial_index(m)), c);
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return r;
}

template <Scalar K>
HPoly<K> from_row(const FieldOf<K>& f, int degree, const SparseRow<K>& r) {
  auto mons = monomials(degree);
  HPoly<K> p(f, degree);
  for (const auto& [c, x] : r) p.add_term(mons[c], x);
  return p;
}

// Linear subspace of K^n in canonical reduced echelon form, optionally tied
// to a polynomial degree (n = number of monomials of that degree).
template <Scalar K>
class Subspace {
 public:
  using field_type = FieldOf<K>;

  Subspace() = default;
  Subspace(field_type f, std::size_t ambient, std::optional<int> degree = std::nullopt)
      : f_(std::move(f)), degree_(degree) {
    ech_.cols = ambient;
  }

  static Subspace span(const field_type& f, std::size_t ambient, const std::vector<SparseRow<K>>& vectors,
                       std::optional<int> degree = std::nullopt) {
    Subspace s(f, ambient, degree);
    s.ech_ = linalg::reduced_echelon<K>(f, ambient, vectors);
    return s;
  }
  static Subspace span(const field_type& f, int degree, const std::vector<HPoly<K>>& polys) {
    std::vector<SparseRow<K>> rows;
    rows.reserve(polys.size());
    for (const auto& p : polys) {
      if (p.degree() != degree && !p.is_zero()) throw DegreeMismatch("spanning polynomials of the wrong degree");
      rows.push_back(to_row(p));
    }
    return span(f, monomial_count(degree), rows, degree);
  }
  static Subspace full(const field_type& f, std::size_t ambient, std::optional<int> degree = std::nullopt) {
    Subspace s(f, ambient, degree);
    s.ech_ = linalg::identity_echelon<K>(f, ambient);
    return s;
  }
  static Subspace full_degree(const field_type& f, int degree) { return full(f, monomial_count(degree), degree); }

  // {x : <row, x> = 0 for every row}
  static Subspace kernel(const field_type& f, std::size_t cols, const std::vector<SparseRow<K>>& rows,
                         std::optional<int> degree = std::nullopt) {
    Subspace s = span(f, cols, rows);
    Subspace k = s.annihilator();
    k.degree_ = degree;
    return k;
  }

  const field_type& field() const { return f_; }
  std::size_t ambient() const { return ech_.cols; }
  std::size_t dim() const { return ech_.rank(); }
  std::size_t quotient_dim() const { return ambient() - dim(); }
  std::optional<int> degree() const { return degree_; }
  const linalg::Echelon<K>& echelon() const { return ech_; }
  const std::vector<std::uint32_t>& pivots() const { return ech_.pivots; }
  const std::vector<SparseRow<K>>& rows() const { return ech_.rows; }

  // Non-pivot columns in increasing order.
  std::vector<std::uint32_t> free_columns() const {
    std::vector<std::uint32_t> out;
    std::size_t i = 0;
    for (std::uint32_t c = 0; c < ambient(); ++c) {
      if (i < ech_.pivots.size() && ech_.pivots[i] == c) {
        ++i;
        continue;
      }
      out.push_back(c);
    }
    return out;
  }

  // Normal form modulo the subspace, supported on free columns.
  std::vector<K> reduce_dense(std::vector<K> v) const {
    for (std::size_t i = 0; i < ech_.rows.size(); ++i) {
      K t = v[ech_.pivots[i]];
      if (t.is_zero()) continue;
      for (const auto& [c, x] : ech_.rows[i]) v[c] -= t * x;
    }
    return v;
  }
  SparseRow<K> reduce(const SparseRow<K>& v) const {
    return linalg::sparse_from_dense(reduce_dense(linalg::dense_from_sparse(v, ambient(), f_)));
  }
  HPoly<K> reduce(const HPoly<K>& p) const {
    require_degree(p.degree());
    return HPoly<K>::from_dense(f_, p.degree(), reduce_dense(p.dense()));
  }

  bool contains(const SparseRow<K>& v) const { return reduce(v).empty(); }
  bool contains(const HPoly<K>& p) const { return reduce(p).is_zero(); }
  bool contains(const Subspace& o) const {
    check(o);
    for (const auto& r : o.rows())
      if (!contains(r)) return false;
    return true;
  }

  Subspace sum(const Subspace& o) const {
    check(o);
    std::vector<SparseRow<K>> rows = ech_.rows;
    rows.insert(rows.end(), o.ech_.rows.begin(), o.ech_.rows.end());
    return span(f_, ambient(), rows, degree_);
  }

  // Orthogonal complement for the standard pairing.
  Subspace annihilator() const {
    std::vector<SparseRow<K>> basis;
    std::vector<long> where(ambient(), -1);
    for (std::size_t i = 0; i < ech_.pivots.size(); ++i) where[ech_.pivots[i]] = static_cast<long>(i);
    std::vector<SparseRow<K>> cols_of_free(ambient());
    for (std::size_t i = 0; i < ech_.rows.size(); ++i)
      for (const auto& [c, x] : ech_.rows[i])
        if (where[c] < 0) cols_of_free[c].emplace_back(ech_.pivots[i], -x);
    for (auto c : free_columns()) {
      SparseRow<K> v = std::move(cols_of_free[c]);
      v.emplace_back(c, f_.one());
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      basis.push_back(std::move(v));
    }
    return span(f_, ambient(), basis, degree_);
  }

  Subspace intersect(const Subspace& o) const {
    check(o);
    return annihilator().sum(o.annihilator()).annihilator();
  }

  std::vector<HPoly<K>> basis_polys() const {
    if (!degree_) throw PreconditionError("subspace has no polynomial degree");
    std::vector<HPoly<K>> out;
    for (const auto& r : ech_.rows) out.push_back(from_row(f_, *degree_, r));
    return out;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient() || a.dim() != b.dim()) return false;
    if (a.ech_.pivots != b.ech_.pivots) return false;
    return a.ech_.rows == b.ech_.rows;
  }

 private:
  void check(const Subspace& o) const {
    if (!(o.f_ == f_)) throw FieldMismatch("subspaces over different fields");
    if (o.ambient() != ambient()) throw DegreeMismatch("subspaces of different ambient spaces");
  }
  void require_degree(int d) const {
    if (degree_ && *degree_ != d) throw DegreeMismatch("polynomial degree differs from subspace degree");
    if (monomial_count(d) != ambient()) throw DegreeMismatch("polynomial does not fit the ambient space");
  }

  field_type f_{};
  std::optional<int> degree_;
  linalg::Echelon<K> ech_;
};

}  // namespace nlocus
