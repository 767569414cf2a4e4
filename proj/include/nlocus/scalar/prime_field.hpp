#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "nlocus/errors.hpp"

namespace nlocus {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  if (((a | b) >> 32) == 0) return a * b % p;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw DivisionByZero();
  return powmod(a, p - 2, p);
}

inline std::uint64_t mpz_mod_u64(const mpz_class& v, std::uint64_t p) {
  static_assert(sizeof(unsigned long) == 8);
  return mpz_fdiv_ui(v.get_mpz_t(), p);
}

// Reduction of a rational number; throws DivisionByZero when p divides the
// denominator.
inline std::uint64_t mpq_mod_u64(const mpq_class& v, std::uint64_t p) {
  std::uint64_t den = mpz_mod_u64(v.get_den(), p);
  return mulmod(mpz_mod_u64(v.get_num(), p), invmod(den, p), p);
}

class ModP;

struct PrimeField {
  std::uint64_t p = 2;

  ModP zero() const;
  ModP one() const;
  ModP from_int(long v) const;
  ModP from_rational(const mpq_class& v) const;
  std::string name() const { return "fp:" + std::to_string(p); }
  bool operator==(const PrimeField& o) const { return p == o.p; }
};

class ModP {
 public:
  using field_type = PrimeField;

  ModP() = default;
  ModP(std::uint64_t value, std::uint64_t p) : v_(value % p), p_(p) {}

  std::uint64_t value() const { return v_; }
  std::uint64_t modulus() const { return p_; }
  PrimeField field() const { return {p_}; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  ModP inverse() const { return ModP(invmod(v_, p_), p_); }

  ModP operator-() const { return ModP(v_ == 0 ? 0 : p_ - v_, p_); }
  ModP& operator+=(const ModP& o) {
    check(o);
    v_ += o.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  ModP& operator-=(const ModP& o) {
    check(o);
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
    return *this;
  }
  ModP& operator*=(const ModP& o) {
    check(o);
    v_ = mulmod(v_, o.v_, p_);
    return *this;
  }
  ModP& operator/=(const ModP& o) {
    check(o);
    v_ = mulmod(v_, invmod(o.v_, p_), p_);
    return *this;
  }
  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  friend bool operator==(const ModP& a, const ModP& b) { return a.v_ == b.v_ && a.p_ == b.p_; }

  std::string to_string() const { return std::to_string(v_); }
  bool is_negative() const { return false; }
  bool is_atomic() const { return true; }

 private:
  void check(const ModP& o) const {
    if (o.p_ != p_) throw FieldMismatch("mixed prime moduli");
  }

  std::uint64_t v_ = 0;
  std::uint64_t p_ = 2;
};

inline ModP PrimeField::zero() const { return ModP(0, p); }
inline ModP PrimeField::one() const { return ModP(1, p); }
inline ModP PrimeField::from_int(long v) const {
  long r = v % static_cast<long>(p);
  if (r < 0) r += static_cast<long>(p);
  return ModP(static_cast<std::uint64_t>(r), p);
}
inline ModP PrimeField::from_rational(const mpq_class& v) const { return ModP(mpq_mod_u64(v, p), p); }

}  // namespace nlocus
