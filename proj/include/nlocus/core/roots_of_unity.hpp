#pragma once

#include <numeric>
#include <optional>

#include "nlocus/scalar/scalar.hpp"

namespace nlocus {

namespace detail {

template <Scalar K>
K power(K base, unsigned long e) {
  K r = base.field().one();
  while (e) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return r;
}

}  // namespace detail

// Order of c as a root of unity, or nothing.  Over Q only +-1 qualify; in
// Q(zeta_n) the roots of unity have order dividing lcm(2, n).
template <Scalar K>
std::optional<unsigned long> root_of_unity_order(const K& c) {
  if (c.is_zero()) return std::nullopt;
  unsigned long bound;
  if constexpr (is_rational_v<K>) {
    bound = 2;
  } else if constexpr (is_cyclotomic_v<K>) {
    bound = std::lcm(2UL, static_cast<unsigned long>(c.field().conductor()));
  } else {
    bound = c.modulus() - 1;
  }
  if (!detail::power(c, bound).is_one()) return std::nullopt;
  unsigned long best = bound;
  for (auto q : prime_factors(bound)) {
    while (best % q == 0 && detail::power(c, best / q).is_one()) best /= q;
  }
  return best;
}

template <Scalar K>
bool root_of_unity_test(const K& c) {
  return root_of_unity_order(c).has_value();
}

}  // namespace nlocus
