#pragma once

#include <array>
#include <map>
#include <ostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlocus/core/monomial.hpp"
#include "nlocus/errors.hpp"
#include "nlocus/scalar/scalar.hpp"

namespace nlocus {

// Homogeneous polynomial in z0..z3 with a declared degree; the zero
// polynomial keeps its degree.
template <Scalar K>
class HPoly {
 public:
  using scalar_type = K;
  using field_type = FieldOf<K>;
  using TermMap = std::map<Mono, K, CanonicalOrder>;

  HPoly() : HPoly(field_type{}, 0) {}
  HPoly(field_type f, int degree) : field_(std::move(f)), degree_(degree) {
    if (degree < 0) throw DegreeMismatch("negative degree");
  }

  static HPoly monomial(const field_type& f, const Mono& m, const K& c) {
    HPoly r(f, m.degree());
    r.add_term(m, c);
    return r;
  }
  static HPoly monomial(const field_type& f, const Mono& m) { return monomial(f, m, f.one()); }
  static HPoly variable(const field_type& f, int i) { return monomial(f, Mono::variable(i)); }
  static HPoly constant(const field_type& f, const K& c) { return monomial(f, Mono{}, c); }

  int degree() const { return degree_; }
  const field_type& field() const { return field_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  K coefficient(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? field_.zero() : it->second;
  }

  void add_term(const Mono& m, const K& c) {
    if (m.degree() != degree_) throw DegreeMismatch("term degree differs from polynomial degree");
    if (c.is_zero()) return;
    check_scalar(c);
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  HPoly operator-() const {
    HPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  HPoly& operator+=(const HPoly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  HPoly& operator-=(const HPoly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
  friend HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }

  friend HPoly operator*(const HPoly& a, const HPoly& b) {
    a.check_field(b);
    HPoly r(a.field_, a.degree_ + b.degree_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  friend HPoly operator*(const K& s, const HPoly& a) {
    HPoly r(a.field_, a.degree_);
    if (s.is_zero()) return r;
    a.check_scalar(s);
    for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, s * c);
    return r;
  }
  HPoly& operator*=(const HPoly& o) { return *this = *this * o; }

  HPoly pow(int e) const {
    if (e < 0) throw PreconditionError("negative exponent");
    HPoly r = constant(field_, field_.one());
    HPoly base = *this;
    while (e) {
      if (e & 1) r = r * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return r;
  }

  // d/dz_i; the result has degree one less.
  HPoly partial(int i) const {
    if (degree_ == 0) throw DegreeMismatch("derivative of a constant");
    HPoly r(field_, degree_ - 1);
    for (const auto& [m, c] : terms_) {
      int a = m[i];
      if (a == 0) continue;
      Mono n = m;
      n.e[static_cast<std::size_t>(i)] -= 1;
      r.add_term(n, field_.from_int(a) * c);
    }
    return r;
  }

  // Sets the listed variables to zero.
  HPoly vanish(std::initializer_list<int> vars) const {
    HPoly r(field_, degree_);
    for (const auto& [m, c] : terms_) {
      bool keep = true;
      for (int v : vars)
        if (m[v] != 0) keep = false;
      if (keep) r.terms_.emplace(m, c);
    }
    return r;
  }

  // Coordinates in the canonical monomial basis of degree d.
  std::vector<K> dense() const {
    std::vector<K> v(monomial_count(degree_), field_.zero());
    for (const auto& [m, c] : terms_) v[monomial_index(m)] = c;
    return v;
  }
  static HPoly from_dense(const field_type& f, int degree, const std::vector<K>& v) {
    auto mons = monomials(degree);
    if (v.size() != mons.size()) throw DegreeMismatch("dense vector length does not match degree");
    HPoly r(f, degree);
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v[k].is_zero()) r.terms_.emplace(mons[k], v[k]);
    return r;
  }

  // Replaces z_i by images[i]; all images must share one degree.
  HPoly substitute(const std::array<HPoly, kVariables>& images) const {
    int e = images[0].degree();
    for (const auto& im : images) {
      if (im.degree() != e) throw DegreeMismatch("substitution images of different degrees");
      check_field(im);
    }
    HPoly r(field_, degree_ * e);
    // cache of powers per variable
    std::array<std::vector<HPoly>, kVariables> powers;
    for (int i = 0; i < kVariables; ++i) powers[i].push_back(constant(field_, field_.one()));
    auto power = [&](int i, int k) -> const HPoly& {
      auto& pv = powers[static_cast<std::size_t>(i)];
      while (static_cast<int>(pv.size()) <= k) pv.push_back(pv.back() * images[static_cast<std::size_t>(i)]);
      return pv[static_cast<std::size_t>(k)];
    };
    for (const auto& [m, c] : terms_) {
      HPoly t = constant(field_, c);
      for (int i = 0; i < kVariables; ++i)
        if (m[i]) t = t * power(i, m[i]);
      r += t;
    }
    return r;
  }

  friend bool operator==(const HPoly& a, const HPoly& b) {
    return a.field_ == b.field_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      bool neg = c.is_negative();
      K mag = neg ? -c : c;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? "-" : "+";
      }
      bool constant_term = m.degree() == 0;
      std::string coef = mag.to_string();
      if (!mag.is_atomic()) coef = "(" + coef + ")";
      if (constant_term) {
        out += coef;
      } else {
        if (!mag.is_one()) out += coef + "*";
        out += m.to_string();
      }
    }
    return out;
  }

 private:
  void check_scalar(const K& c) const {
    if (!(c.field() == field_)) throw FieldMismatch("coefficient from a different field");
  }
  void check_field(const HPoly& o) const {
    if (!(o.field_ == field_)) throw FieldMismatch("polynomials over different fields");
  }
  void check_compatible(const HPoly& o) const {
    check_field(o);
    if (o.degree_ != degree_) throw DegreeMismatch("adding polynomials of different degrees");
  }

  field_type field_;
  int degree_ = 0;
  TermMap terms_;
};

template <Scalar K>
std::ostream& operator<<(std::ostream& os, const HPoly<K>& p) {
  return os << p.to_string();
}

// Exact quotient f / g, or nothing when g does not divide f.
template <Scalar K>
std::optional<HPoly<K>> exact_divide(HPoly<K> f, const HPoly<K>& g) {
  if (g.is_zero()) throw DivisionByZero();
  if (g.degree() > f.degree()) {
    if (f.is_zero()) return HPoly<K>(f.field(), 0);
    return std::nullopt;
  }
  HPoly<K> q(f.field(), f.degree() - g.degree());
  const auto& [lm, lc] = *g.terms().begin();
  K inv = lc.inverse();
  while (!f.is_zero()) {
    const auto& [fm, fc] = *f.terms().begin();
    if (!lm.divides(fm)) return std::nullopt;
    auto t = HPoly<K>::monomial(f.field(), fm / lm, fc * inv);
    q += t;
    f -= t * g;
  }
  return q;
}

// z_i -> sum_j matrix[i][j] z_j.  The matrix must be invertible.
template <Scalar K>
HPoly<K> substitute_linear(const HPoly<K>& f, const std::array<std::array<K, kVariables>, kVariables>& matrix) {
  const auto& fld = f.field();
  // invertibility by elimination on a copy
  auto m = matrix;
  for (int c = 0, r = 0; c < kVariables; ++c, ++r) {
    int piv = r;
    while (piv < kVariables && m[piv][c].is_zero()) ++piv;
    if (piv == kVariables) throw PreconditionError("linear substitution is not invertible");
    std::swap(m[piv], m[r]);
    for (int k = r + 1; k < kVariables; ++k) {
      if (m[k][c].is_zero()) continue;
      K t = m[k][c] / m[r][c];
      for (int j = c; j < kVariables; ++j) m[k][j] -= t * m[r][j];
    }
  }
  std::array<HPoly<K>, kVariables> images;
  for (int i = 0; i < kVariables; ++i) {
    HPoly<K> lin(fld, 1);
    for (int j = 0; j < kVariables; ++j) lin.add_term(Mono::variable(j), matrix[i][j]);
    images[i] = lin;
  }
  return f.substitute(images);
}

}  // namespace nlocus
