#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "nlocus/errors.hpp"

namespace nlocus {

class Rational;

struct RationalField {
  Rational zero() const;
  Rational one() const;
  Rational from_int(long v) const;
  Rational from_rational(const mpq_class& v) const;
  std::string name() const { return "q"; }
  bool operator==(const RationalField&) const { return true; }
};

class Rational {
 public:
  using field_type = RationalField;

  Rational() = default;
  Rational(long v) : v_(v) {}
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
    if (den == 0) throw DivisionByZero();
    v_.canonicalize();
  }

  const mpq_class& value() const { return v_; }
  RationalField field() const { return {}; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  Rational inverse() const {
    if (is_zero()) throw DivisionByZero();
    return Rational(mpq_class(1) / v_);
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero();
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }

  std::string to_string() const { return v_.get_str(); }

  // Printing as a polynomial coefficient needs to know whether a sign or
  // parentheses are required.
  bool is_negative() const { return sgn(v_) < 0; }
  bool is_atomic() const { return true; }

 private:
  mpq_class v_;
};

inline Rational RationalField::zero() const { return Rational(0); }
inline Rational RationalField::one() const { return Rational(1); }
inline Rational RationalField::from_int(long v) const { return Rational(v); }
inline Rational RationalField::from_rational(const mpq_class& v) const { return Rational(v); }

}  // namespace nlocus
