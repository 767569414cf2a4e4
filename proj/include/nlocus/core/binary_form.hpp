#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlocus/core/factor.hpp"
#include "nlocus/core/hpoly.hpp"
#include "nlocus/core/upoly.hpp"

namespace nlocus {

// Binary form sum_k coeffs[k] * a^(degree-k) * b^k in two named variables
// (indices into z0..z3, or -1 for the parameters s, t of a line).
template <Scalar K>
struct BinaryForm {
  using field_type = FieldOf<K>;

  field_type field;
  std::array<int, 2> vars{-1, -1};
  int degree = 0;
  std::vector<K> coeffs;

  BinaryForm() = default;
  BinaryForm(field_type f, std::array<int, 2> v, int deg) : field(std::move(f)), vars(v), degree(deg) {
    coeffs.assign(static_cast<std::size_t>(deg + 1), field.zero());
  }

  bool is_zero() const {
    for (const auto& c : coeffs)
      if (!c.is_zero()) return false;
    return true;
  }

  K eval(const K& a, const K& b) const {
    // Horner in the ratio, homogeneous form kept exact for b = 0
    K acc = field.zero();
    K apow = field.one();
    std::vector<K> bp(coeffs.size(), field.one());
    for (std::size_t k = 1; k < coeffs.size(); ++k) bp[k] = bp[k - 1] * b;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      acc += coeffs[k] * apow * bp[k];
      apow *= a;
    }
    return acc;
  }

  friend BinaryForm operator*(const BinaryForm& x, const BinaryForm& y) {
    BinaryForm r(x.field, x.vars, x.degree + y.degree);
    for (std::size_t i = 0; i < x.coeffs.size(); ++i)
      for (std::size_t j = 0; j < y.coeffs.size(); ++j) r.coeffs[i + j] += x.coeffs[i] * y.coeffs[j];
    return r;
  }
  friend BinaryForm operator*(const K& s, BinaryForm x) {
    for (auto& c : x.coeffs) c = s * c;
    return x;
  }
  friend BinaryForm operator+(BinaryForm x, const BinaryForm& y) {
    if (x.degree != y.degree) throw DegreeMismatch("adding binary forms of different degrees");
    for (std::size_t k = 0; k < x.coeffs.size(); ++k) x.coeffs[k] += y.coeffs[k];
    return x;
  }
  friend bool operator==(const BinaryForm& x, const BinaryForm& y) {
    return x.degree == y.degree && x.coeffs == y.coeffs;
  }

  // u(x) = f(x, 1)
  UPoly<K> dehomogenize() const {
    std::vector<K> c(coeffs.size(), field.zero());
    for (std::size_t k = 0; k < coeffs.size(); ++k) c[coeffs.size() - 1 - k] = coeffs[k];
    return UPoly<K>(field, std::move(c));
  }
  static BinaryForm homogenize(const UPoly<K>& u, int degree, std::array<int, 2> vars) {
    if (u.degree() > degree) throw DegreeMismatch("polynomial exceeds form degree");
    BinaryForm r(u.field(), vars, degree);
    for (int j = 0; j <= u.degree(); ++j) r.coeffs[static_cast<std::size_t>(degree - j)] = u.coefficient(j);
    return r;
  }

  std::string var_name(int slot) const {
    int v = vars[static_cast<std::size_t>(slot)];
    if (v < 0) return slot == 0 ? "s" : "t";
    return "z" + std::to_string(v);
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k].is_zero()) continue;
      bool neg = coeffs[k].is_negative();
      K mag = neg ? -coeffs[k] : coeffs[k];
      out += out.empty() ? (neg ? "-" : "") : (neg ? "-" : "+");
      int ea = degree - static_cast<int>(k), eb = static_cast<int>(k);
      std::string mono;
      auto put = [&](int slot, int e) {
        if (e == 0) return;
        if (!mono.empty()) mono += "*";
        mono += var_name(slot);
        if (e >= 2) mono += "^" + std::to_string(e);
      };
      put(0, ea);
      put(1, eb);
      std::string coef = mag.to_string();
      if (!mag.is_atomic()) coef = "(" + coef + ")";
      if (mono.empty()) out += coef;
      else out += (mag.is_one() ? "" : coef + "*") + mono;
    }
    return out.empty() ? "0" : out;
  }
};

// f restricted to z_i = z_j = 0, as a form in the two remaining variables.
template <Scalar K>
BinaryForm<K> restrict_line(const HPoly<K>& f, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= kVariables || j >= kVariables)
    throw PreconditionError("restrict_line needs two distinct coordinate indices");
  std::array<int, 2> rest{-1, -1};
  int n = 0;
  for (int v = 0; v < kVariables; ++v)
    if (v != i && v != j) rest[static_cast<std::size_t>(n++)] = v;
  BinaryForm<K> r(f.field(), rest, f.degree());
  for (const auto& [m, c] : f.terms()) {
    if (m[i] || m[j]) continue;
    r.coeffs[static_cast<std::size_t>(m[rest[1]])] += c;
  }
  return r;
}

// c with f = c * g, if it exists.
template <Scalar K>
std::optional<K> binary_proportional(const BinaryForm<K>& f, const BinaryForm<K>& g) {
  if (f.degree != g.degree) throw DegreeMismatch("binary forms of different degrees");
  std::optional<K> ratio;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    if (g.coeffs[k].is_zero()) {
      if (!f.coeffs[k].is_zero()) return std::nullopt;
      continue;
    }
    K r = f.coeffs[k] / g.coeffs[k];
    if (ratio && !(*ratio == r)) return std::nullopt;
    ratio = r;
  }
  if (!ratio) return f.field.zero();  // g = 0 and f = 0
  return ratio;
}

template <Scalar K>
struct BinaryFactorization {
  K unit;
  std::vector<std::pair<BinaryForm<K>, int>> factors;
};

// Irreducible factors over the coefficient field.  Factors are monic in the
// first variable, except the second variable itself.
template <Scalar K>
BinaryFactorization<K> binary_factor(const BinaryForm<K>& f) {
  if (f.is_zero()) throw PreconditionError("cannot factor the zero form");
  std::size_t low = 0;
  while (f.coeffs[low].is_zero()) ++low;
  BinaryFactorization<K> out{f.coeffs[low], {}};
  if (low > 0) {
    BinaryForm<K> b(f.field, f.vars, 1);
    b.coeffs[1] = f.field.one();
    out.factors.emplace_back(b, static_cast<int>(low));
  }
  // f = b^low * g with g(a, b) = sum_{k >= low} c_k a^(n-k) b^(k-low)
  int gdeg = f.degree - static_cast<int>(low);
  if (gdeg > 0) {
    BinaryForm<K> g(f.field, f.vars, gdeg);
    for (int k = 0; k <= gdeg; ++k) g.coeffs[static_cast<std::size_t>(k)] = f.coeffs[low + static_cast<std::size_t>(k)];
    auto uf = factor(g.dehomogenize());
    for (auto& [u, mult] : uf.factors)
      out.factors.emplace_back(BinaryForm<K>::homogenize(u, u.degree(), f.vars), mult);
  }
  return out;
}

// Determinant of a small dense matrix by elimination.
template <Scalar K>
K determinant(std::vector<std::vector<K>> m, const FieldOf<K>& field) {
  std::size_t n = m.size();
  K det = field.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c].is_zero()) ++piv;
    if (piv == n) return field.zero();
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    K inv = m[c][c].inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c].is_zero()) continue;
      K t = m[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) m[r][k] -= t * m[c][k];
    }
  }
  return det;
}

// Homogeneous (Sylvester) resultant of two binary forms.
template <Scalar K>
K resultant(const BinaryForm<K>& f, const BinaryForm<K>& g) {
  std::size_t m = static_cast<std::size_t>(f.degree), n = static_cast<std::size_t>(g.degree);
  std::size_t size = m + n;
  if (size == 0) return f.field.one();
  std::vector<std::vector<K>> syl(size, std::vector<K>(size, f.field.zero()));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) syl[r][r + k] = f.coeffs[k];
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) syl[n + r][r + k] = g.coeffs[k];
  return determinant(std::move(syl), f.field);
}

}  // namespace nlocus
