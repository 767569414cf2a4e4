#pragma once

#include <concepts>
#include <ostream>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "nlocus/scalar/cyclotomic.hpp"
#include "nlocus/scalar/prime_field.hpp"
#include "nlocus/scalar/rational.hpp"

namespace nlocus {

template <class K>
concept Scalar = std::copyable<K> && std::equality_comparable<K> && requires(const K a, const K b) {
  typename K::field_type;
  { a + b } -> std::same_as<K>;
  { a - b } -> std::same_as<K>;
  { a * b } -> std::same_as<K>;
  { a / b } -> std::same_as<K>;
  { -a } -> std::same_as<K>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.is_one() } -> std::same_as<bool>;
  { a.inverse() } -> std::same_as<K>;
  { a.field() } -> std::convertible_to<typename K::field_type>;
  { a.to_string() } -> std::same_as<std::string>;
  { a.field().zero() } -> std::same_as<K>;
  { a.field().from_int(1L) } -> std::same_as<K>;
};

template <Scalar K>
std::ostream& operator<<(std::ostream& os, const K& a) {
  return os << a.to_string();
}

template <Scalar K>
using FieldOf = typename K::field_type;

template <class K>
inline constexpr bool is_rational_v = std::is_same_v<K, Rational>;
template <class K>
inline constexpr bool is_cyclotomic_v = std::is_same_v<K, Cyclotomic>;
template <class K>
inline constexpr bool is_modp_v = std::is_same_v<K, ModP>;

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    out.push_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// A ring homomorphism from a coefficient field onto F_p.  For cyclotomic
// fields p = 1 mod n and `root` is the image of zeta_n.
struct ModularMap {
  std::uint64_t p = 0;
  std::uint64_t root = 1;
};

inline constexpr std::uint64_t kModularPrimeCeiling = 2147483648ULL;  // 2^31

// index-th prime below 2^31 congruent to 1 mod `conductor`, descending.
inline std::uint64_t modular_prime(std::uint64_t conductor, int index) {
  std::uint64_t step = conductor < 2 ? 1 : conductor;
  std::uint64_t c = kModularPrimeCeiling - 1;
  c -= (c - 1) % step;  // c = 1 mod step
  int seen = 0;
  for (;; c -= step) {
    if (is_prime_u64(c)) {
      if (seen == index) return c;
      ++seen;
    }
  }
}

inline std::uint64_t primitive_root_of_unity(std::uint64_t order, std::uint64_t p) {
  if (order <= 1) return 1;
  auto qs = prime_factors(order);
  for (std::uint64_t a = 2; a < p; ++a) {
    std::uint64_t r = powmod(a, (p - 1) / order, p);
    bool ok = true;
    for (auto q : qs)
      if (powmod(r, order / q, p) == 1) ok = false;
    if (ok) return r;
  }
  throw InternalError("no primitive root of unity");
}

inline ModularMap modular_map(const RationalField&, int index) { return {modular_prime(1, index), 1}; }
inline ModularMap modular_map(const CyclotomicField& f, int index) {
  std::uint64_t p = modular_prime(f.conductor(), index);
  return {p, primitive_root_of_unity(f.conductor(), p)};
}
inline ModularMap modular_map(const PrimeField& f, int) { return {f.p, 1}; }

inline std::uint64_t reduce_mod(const Rational& a, const ModularMap& m) { return mpq_mod_u64(a.value(), m.p); }
inline std::uint64_t reduce_mod(const Cyclotomic& a, const ModularMap& m) { return a.reduce_mod(m.p, m.root); }
inline std::uint64_t reduce_mod(const ModP& a, const ModularMap& m) {
  if (a.modulus() != m.p) throw FieldMismatch("modular map prime differs from field prime");
  return a.value();
}

}  // namespace nlocus
