#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "nlocus/errors.hpp"
#include "nlocus/scalar/prime_field.hpp"

namespace nlocus {

namespace detail {

// Coefficients (lowest degree first) of the n-th cyclotomic polynomial.
inline std::vector<mpz_class> cyclotomic_polynomial(unsigned n) {
  // x^n - 1 divided by every Phi_e with e | n, e < n.
  std::vector<mpz_class> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (unsigned e = 1; e < n; ++e) {
    if (n % e) continue;
    std::vector<mpz_class> div = cyclotomic_polynomial(e);
    std::size_t dd = div.size() - 1;
    std::vector<mpz_class> quot(num.size() - dd, 0);
    for (std::size_t k = num.size(); k-- > dd;) {
      mpz_class c = num[k];
      quot[k - dd] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j) num[k - dd + j] -= c * div[j];
    }
    num = std::move(quot);
  }
  return num;
}

struct CyclotomicData {
  unsigned n = 1;
  unsigned phi = 1;
  std::vector<mpz_class> modulus;             // monic, degree phi
  std::vector<std::vector<mpq_class>> power;  // power[j] = zeta^j reduced, j < n
};

}  // namespace detail

class Cyclotomic;

// Q(zeta_n), elements stored as coefficient vectors in the power basis
// 1, zeta, ..., zeta^(phi(n)-1).
class CyclotomicField {
 public:
  CyclotomicField() : CyclotomicField(1) {}
  explicit CyclotomicField(unsigned n) {
    if (n == 0) throw PreconditionError("cyclotomic conductor must be positive");
    auto d = std::make_shared<detail::CyclotomicData>();
    d->n = n;
    d->modulus = detail::cyclotomic_polynomial(n);
    d->phi = static_cast<unsigned>(d->modulus.size() - 1);
    std::vector<mpq_class> cur(d->phi, 0);
    cur[0] = 1;
    for (unsigned j = 0; j < n; ++j) {
      d->power.push_back(cur);
      // multiply by zeta
      std::vector<mpq_class> next(d->phi, 0);
      mpq_class top = cur[d->phi - 1];
      for (unsigned k = d->phi - 1; k > 0; --k) next[k] = cur[k - 1];
      next[0] = 0;
      for (unsigned k = 0; k < d->phi; ++k) next[k] -= top * d->modulus[k];
      cur = std::move(next);
    }
    data_ = std::move(d);
  }

  unsigned conductor() const { return data_->n; }
  unsigned degree() const { return data_->phi; }
  const detail::CyclotomicData& data() const { return *data_; }

  Cyclotomic zero() const;
  Cyclotomic one() const;
  Cyclotomic from_int(long v) const;
  Cyclotomic from_rational(const mpq_class& v) const;
  // zeta_n^k
  Cyclotomic zeta(long k) const;
  // zeta_m^k for m dividing the conductor
  Cyclotomic root_of_unity(unsigned m, long k) const;

  std::string name() const { return "zeta:" + std::to_string(data_->n); }
  bool operator==(const CyclotomicField& o) const { return data_->n == o.data_->n; }

 private:
  std::shared_ptr<const detail::CyclotomicData> data_;
};

class Cyclotomic {
 public:
  using field_type = CyclotomicField;

  Cyclotomic() : c_(1, 0) {}
  Cyclotomic(CyclotomicField f, std::vector<mpq_class> coeffs) : f_(std::move(f)), c_(std::move(coeffs)) {
    if (c_.size() != f_.degree()) throw InternalError("cyclotomic coefficient length mismatch");
    for (auto& x : c_) x.canonicalize();
  }

  const CyclotomicField& field() const { return f_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (sgn(x) != 0) return false;
    return true;
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (sgn(c_[k]) != 0) return false;
    return true;
  }
  // True when the element lies in Q.
  bool is_rational() const {
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (sgn(c_[k]) != 0) return false;
    return true;
  }

  Cyclotomic operator-() const {
    Cyclotomic r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  Cyclotomic& operator+=(const Cyclotomic& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Cyclotomic& operator-=(const Cyclotomic& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Cyclotomic& operator*=(const Cyclotomic& o) {
    check(o);
    const auto& d = f_.data();
    unsigned phi = d.phi;
    if (phi == 1) {
      c_[0] *= o.c_[0];
      return *this;
    }
    std::vector<mpq_class> prod(2 * phi - 1, 0);
    for (unsigned i = 0; i < phi; ++i) {
      if (sgn(c_[i]) == 0) continue;
      for (unsigned j = 0; j < phi; ++j)
        if (sgn(o.c_[j]) != 0) prod[i + j] += c_[i] * o.c_[j];
    }
    for (unsigned k = 2 * phi - 2; k >= phi; --k) {
      if (sgn(prod[k]) == 0) continue;
      mpq_class t = prod[k];
      for (unsigned j = 0; j <= phi; ++j) prod[k - phi + j] -= t * d.modulus[j];
    }
    prod.resize(phi);
    c_ = std::move(prod);
    return *this;
  }
  Cyclotomic& operator/=(const Cyclotomic& o) { return *this *= o.inverse(); }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
  friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
  friend Cyclotomic operator/(Cyclotomic a, const Cyclotomic& b) { return a /= b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    return a.f_ == b.f_ && a.c_ == b.c_;
  }

  // Solves (multiplication by this) * x = 1 in the power basis.
  Cyclotomic inverse() const {
    if (is_zero()) throw DivisionByZero();
    unsigned phi = f_.degree();
    // columns: this * zeta^j
    std::vector<std::vector<mpq_class>> m(phi, std::vector<mpq_class>(phi + 1, 0));
    Cyclotomic col = *this;
    Cyclotomic z = f_.zeta(1);
    for (unsigned j = 0; j < phi; ++j) {
      for (unsigned i = 0; i < phi; ++i) m[i][j] = col.c_[i];
      col *= z;
    }
    m[0][phi] = 1;
    for (unsigned c = 0; c < phi; ++c) {
      unsigned piv = c;
      while (sgn(m[piv][c]) == 0) ++piv;
      std::swap(m[piv], m[c]);
      mpq_class inv = 1 / m[c][c];
      for (unsigned k = c; k <= phi; ++k) m[c][k] *= inv;
      for (unsigned r = 0; r < phi; ++r) {
        if (r == c || sgn(m[r][c]) == 0) continue;
        mpq_class t = m[r][c];
        for (unsigned k = c; k <= phi; ++k) m[r][k] -= t * m[c][k];
      }
    }
    std::vector<mpq_class> out(phi);
    for (unsigned i = 0; i < phi; ++i) out[i] = m[i][phi];
    return Cyclotomic(f_, std::move(out));
  }

  // Image under the automorphism zeta -> zeta^k, gcd(k, n) = 1.
  Cyclotomic galois(long k) const {
    const auto& d = f_.data();
    long n = d.n;
    Cyclotomic r = f_.zero();
    for (unsigned j = 0; j < d.phi; ++j) {
      if (sgn(c_[j]) == 0) continue;
      long e = ((static_cast<long>(j) * k) % n + n) % n;
      const auto& pw = d.power[static_cast<std::size_t>(e)];
      for (unsigned i = 0; i < d.phi; ++i) r.c_[i] += c_[j] * pw[i];
    }
    return r;
  }

  // Image under zeta -> root in F_p (root must be a primitive n-th root).
  std::uint64_t reduce_mod(std::uint64_t p, std::uint64_t root) const {
    std::uint64_t acc = 0, pw = 1;
    for (const auto& x : c_) {
      if (sgn(x) != 0) acc = (acc + mulmod(mpq_mod_u64(x, p), pw, p)) % p;
      pw = mulmod(pw, root, p);
    }
    return acc;
  }

  bool is_atomic() const {
    int nz = 0;
    for (const auto& x : c_) nz += sgn(x) != 0;
    return nz <= 1;
  }
  bool is_negative() const {
    if (!is_atomic()) return false;
    for (const auto& x : c_)
      if (sgn(x) != 0) return sgn(x) < 0;
    return false;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    std::string z = "zeta(" + std::to_string(f_.conductor()) + ")";
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (sgn(c_[j]) == 0) continue;
      mpq_class a = abs(c_[j]);
      bool neg = sgn(c_[j]) < 0;
      if (out.empty()) {
        if (neg) out += "-";
      } else {
        out += neg ? "-" : "+";
      }
      if (j == 0) {
        out += a.get_str();
        continue;
      }
      if (a != 1) out += a.get_str() + "*";
      out += z;
      if (j >= 2) out += "^" + std::to_string(j);
    }
    return out;
  }

 private:
  void check(const Cyclotomic& o) const {
    if (!(o.f_ == f_)) throw FieldMismatch("mixed cyclotomic conductors");
  }

  CyclotomicField f_;
  std::vector<mpq_class> c_;
};

inline Cyclotomic CyclotomicField::zero() const { return Cyclotomic(*this, std::vector<mpq_class>(degree(), 0)); }
inline Cyclotomic CyclotomicField::one() const { return from_int(1); }
inline Cyclotomic CyclotomicField::from_int(long v) const { return from_rational(mpq_class(v)); }
inline Cyclotomic CyclotomicField::from_rational(const mpq_class& v) const {
  std::vector<mpq_class> c(degree(), 0);
  c[0] = v;
  return Cyclotomic(*this, std::move(c));
}
inline Cyclotomic CyclotomicField::zeta(long k) const {
  long n = data_->n;
  long e = ((k % n) + n) % n;
  return Cyclotomic(*this, data_->power[static_cast<std::size_t>(e)]);
}
inline Cyclotomic CyclotomicField::root_of_unity(unsigned m, long k) const {
  if (m == 0 || data_->n % m != 0)
    throw FieldMismatch("zeta(" + std::to_string(m) + ") is not in " + name());
  return zeta(k * static_cast<long>(data_->n / m));
}

}  // namespace nlocus
