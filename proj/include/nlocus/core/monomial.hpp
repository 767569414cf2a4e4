#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "nlocus/errors.hpp"

namespace nlocus {

inline constexpr int kVariables = 4;

inline long binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of monomials of degree l in z0..z3.
inline std::size_t monomial_count(int l) { return l < 0 ? 0 : static_cast<std::size_t>(binomial(l + 3, 3)); }

struct Mono {
  std::array<int, kVariables> e{0, 0, 0, 0};

  static Mono variable(int i) {
    Mono m;
    m.e[static_cast<std::size_t>(i)] = 1;
    return m;
  }
  int degree() const { return e[0] + e[1] + e[2] + e[3]; }
  int operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

  friend Mono operator*(const Mono& a, const Mono& b) {
    Mono r;
    for (int i = 0; i < kVariables; ++i) r.e[i] = a.e[i] + b.e[i];
    return r;
  }
  bool divides(const Mono& o) const {
    for (int i = 0; i < kVariables; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  friend Mono operator/(const Mono& a, const Mono& b) {
    Mono r;
    for (int i = 0; i < kVariables; ++i) r.e[i] = a.e[i] - b.e[i];
    return r;
  }
  friend bool operator==(const Mono&, const Mono&) = default;

  std::string to_string() const {
    std::string out;
    for (int i = 0; i < kVariables; ++i) {
      if (e[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += "z" + std::to_string(i);
      if (e[i] >= 2) out += "^" + std::to_string(e[i]);
    }
    return out.empty() ? "1" : out;
  }
};

// Canonical order: higher degree first, then lexicographic with
// z0 > z1 > z2 > z3 (descending exponent vectors).
struct CanonicalOrder {
  bool operator()(const Mono& a, const Mono& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    for (int i = 0; i < kVariables; ++i)
      if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    return false;
  }
};

// Position of m among the degree-l monomials in canonical order.
inline std::size_t monomial_index(const Mono& m) {
  long l = m.degree();
  long a0 = m.e[0], a1 = m.e[1], a2 = m.e[2];
  long rest = l - a0;
  long after = rest - a1;
  return static_cast<std::size_t>(binomial(l - a0 + 2, 3) + binomial(rest - a1 + 1, 2) + (after - a2));
}

// All degree-l monomials in canonical order.
inline std::vector<Mono> monomials(int l) {
  std::vector<Mono> out;
  if (l < 0) return out;
  out.reserve(monomial_count(l));
  for (int a0 = l; a0 >= 0; --a0)
    for (int a1 = l - a0; a1 >= 0; --a1)
      for (int a2 = l - a0 - a1; a2 >= 0; --a2) out.push_back(Mono{{a0, a1, a2, l - a0 - a1 - a2}});
  return out;
}

}  // namespace nlocus
