#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlocus/errors.hpp"
#include "nlocus/scalar/scalar.hpp"

namespace nlocus {

// Dense univariate polynomial, coefficients lowest degree first, no
// trailing zeros (the zero polynomial is empty).
template <Scalar K>
class UPoly {
 public:
  using field_type = FieldOf<K>;

  UPoly() = default;
  explicit UPoly(field_type f) : f_(std::move(f)) {}
  UPoly(field_type f, std::vector<K> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) { trim(); }

  static UPoly constant(const field_type& f, const K& c) { return UPoly(f, {c}); }
  static UPoly x(const field_type& f) { return UPoly(f, {f.zero(), f.one()}); }

  const field_type& field() const { return f_; }
  const std::vector<K>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  K coefficient(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : f_.zero();
  }
  K leading() const { return c_.empty() ? f_.zero() : c_.back(); }

  UPoly monic() const {
    if (c_.empty()) return *this;
    K inv = c_.back().inverse();
    UPoly r = *this;
    for (auto& a : r.c_) a *= inv;
    return r;
  }

  UPoly operator-() const {
    UPoly r = *this;
    for (auto& a : r.c_) a = -a;
    return r;
  }
  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<K> c(std::max(a.c_.size(), b.c_.size()), a.f_.zero());
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return UPoly(a.f_, std::move(c));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly(a.f_);
    std::vector<K> c(a.c_.size() + b.c_.size() - 1, a.f_.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(a.f_, std::move(c));
  }
  friend UPoly operator*(const K& s, const UPoly& a) {
    UPoly r = a;
    for (auto& x : r.c_) x = s * x;
    r.trim();
    return r;
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  // Quotient and remainder.
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
    if (d.is_zero()) throw DivisionByZero();
    UPoly r = *this;
    if (r.degree() < d.degree()) return {UPoly(f_), r};
    std::vector<K> q(static_cast<std::size_t>(r.degree() - d.degree() + 1), f_.zero());
    K inv = d.leading().inverse();
    for (int k = r.degree(); k >= d.degree(); --k) {
      K t = r.c_[static_cast<std::size_t>(k)] * inv;
      if (t.is_zero()) continue;
      q[static_cast<std::size_t>(k - d.degree())] = t;
      for (int j = 0; j <= d.degree(); ++j)
        r.c_[static_cast<std::size_t>(k - d.degree() + j)] -= t * d.c_[static_cast<std::size_t>(j)];
    }
    r.trim();
    return {UPoly(f_, std::move(q)), r};
  }
  UPoly operator%(const UPoly& d) const { return divmod(d).second; }
  UPoly operator/(const UPoly& d) const { return divmod(d).first; }

  UPoly derivative() const {
    if (c_.size() <= 1) return UPoly(f_);
    std::vector<K> c;
    for (std::size_t k = 1; k < c_.size(); ++k) c.push_back(f_.from_int(static_cast<long>(k)) * c_[k]);
    return UPoly(f_, std::move(c));
  }

  K eval(const K& x) const {
    K acc = f_.zero();
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  // p(x + a)
  UPoly shift(const K& a) const {
    UPoly r(f_);
    UPoly lin(f_, {a, f_.one()});
    for (std::size_t k = c_.size(); k-- > 0;) r = r * lin + constant(f_, c_[k]);
    return r;
  }

  UPoly pow(int e) const {
    UPoly r = constant(f_, f_.one());
    for (int k = 0; k < e; ++k) r = r * *this;
    return r;
  }

  std::string to_string(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (c_[k].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += "(" + c_[k].to_string() + ")";
      if (k >= 1) out += "*" + var;
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  field_type f_;
  std::vector<K> c_;
};

template <Scalar K>
UPoly<K> gcd(UPoly<K> a, UPoly<K> b) {
  while (!b.is_zero()) {
    auto r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Yun's squarefree decomposition over a field of characteristic zero:
// f = lc * prod parts[i]^(i+1), parts monic and pairwise coprime.
template <Scalar K>
std::vector<UPoly<K>> squarefree_parts(const UPoly<K>& f) {
  std::vector<UPoly<K>> parts;
  if (f.degree() <= 0) return parts;
  UPoly<K> fd = f.derivative();
  UPoly<K> a = gcd(f, fd);
  UPoly<K> b = f / a;
  UPoly<K> c = fd / a;
  UPoly<K> d = c - b.derivative();
  while (b.degree() > 0) {
    UPoly<K> g = gcd(b, d);
    parts.push_back(g);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
  }
  while (!parts.empty() && parts.back().degree() == 0) parts.pop_back();
  return parts;
}

}  // namespace nlocus
