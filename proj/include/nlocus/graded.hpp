#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <vector>

#include "nlocus/core/hpoly.hpp"
#include "nlocus/linalg/subspace.hpp"

namespace nlocus {

template <Scalar K>
struct IdealSpec {
  FieldOf<K> field;
  std::vector<HPoly<K>> generators;

  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& g : generators) out.push_back(g.degree());
    return out;
  }
};

// Number of degree-l monomials with exponents a_i < e_i.
inline long monomial_quotient_count(const std::array<int, 4>& e, int l) {
  if (l < 0) return 0;
  long count = 0;
  for (int a0 = 0; a0 < e[0] && a0 <= l; ++a0)
    for (int a1 = 0; a1 < e[1] && a0 + a1 <= l; ++a1)
      for (int a2 = 0; a2 < e[2] && a0 + a1 + a2 <= l; ++a2) {
        int a3 = l - a0 - a1 - a2;
        if (a3 < e[3]) ++count;
      }
  return count;
}

// Coefficient of t^l in prod (1 - t^e_i) / (1 - t)^4.
inline long ci_series_coeff(const std::array<int, 4>& e, int l) {
  long total = 0;
  for (int mask = 0; mask < 16; ++mask) {
    int shift = 0, bits = 0;
    for (int i = 0; i < 4; ++i)
      if (mask & (1 << i)) {
        shift += e[static_cast<std::size_t>(i)];
        ++bits;
      }
    long term = binomial(l - shift + 3, 3);
    total += (bits % 2 ? -term : term);
  }
  return total;
}

namespace detail {

template <Scalar K>
std::vector<SparseRow<K>> ideal_rows(const IdealSpec<K>& ideal, int l) {
  std::vector<SparseRow<K>> rows;
  for (const auto& g : ideal.generators) {
    int rest = l - g.degree();
    if (rest < 0 || g.is_zero()) continue;
    for (const auto& m : monomials(rest)) {
      SparseRow<K> r;
      r.reserve(g.size());
      for (const auto& [t, c] : g.terms()) r.emplace_back(static_cast<std::uint32_t>(monomial_index(t * m)), c);
      std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

// Lower bound for dim (P/I)_l from the complete-intersection series, valid
// for at most four generators.
template <Scalar K>
std::optional<std::size_t> rank_upper_bound(const IdealSpec<K>& ideal, int l) {
  if (ideal.generators.size() > 4) return std::nullopt;
  std::array<int, 4> e{};
  for (std::size_t i = 0; i < 4; ++i)
    e[i] = i < ideal.generators.size() ? ideal.generators[i].degree() : l + 1;
  long floor = ci_series_coeff(e, l);
  if (floor < 0) floor = 0;
  return monomial_count(l) - static_cast<std::size_t>(floor);
}

}  // namespace detail

template <Scalar K>
Subspace<K> ideal_piece(const IdealSpec<K>& ideal, int l) {
  return Subspace<K>::span(ideal.field, monomial_count(l), detail::ideal_rows(ideal, l), l);
}

template <Scalar K>
std::size_t hilbert(const IdealSpec<K>& ideal, int l) {
  if (l < 0) return 0;
  auto rows = detail::ideal_rows(ideal, l);
  return monomial_count(l) -
         linalg::rank<K>(ideal.field, monomial_count(l), rows, detail::rank_upper_bound(ideal, l));
}

// Complete intersection test for an ideal whose pieces come from
// `quotient_dim(l)`, against generator degrees `e`: the Hilbert function
// must match the CI series through the socle degree plus one.
inline bool is_complete_intersection(const std::array<int, 4>& e, const std::function<std::size_t(int)>& quotient_dim) {
  int socle = std::accumulate(e.begin(), e.end(), 0) - 4;
  for (int l = 0; l <= socle + 1; ++l)
    if (static_cast<long>(quotient_dim(l)) != ci_series_coeff(e, l)) return false;
  return true;
}

template <Scalar K>
bool is_complete_intersection(const IdealSpec<K>& ideal) {
  if (ideal.generators.size() != 4) throw PreconditionError("complete intersection test needs four generators");
  std::array<int, 4> e{};
  for (std::size_t i = 0; i < 4; ++i) e[i] = ideal.generators[i].degree();
  return is_complete_intersection(e, [&](int l) { return hilbert(ideal, l); });
}

}  // namespace nlocus
