#pragma once

#include <cstdint>
#include <random>

#include "nlocus/core/hpoly.hpp"

namespace nlocus {

// Seeded source of small-integer test data.  Sampling uses plain modular
// reduction of 64-bit outputs so results are identical across standard
// library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return gen_(); }
  long below(long n) { return static_cast<long>(gen_() % static_cast<std::uint64_t>(n)); }

  // Integer in [-9, 9].
  long coefficient() { return below(19) - 9; }
  long nonzero_coefficient() {
    long c = 0;
    while (c == 0) c = coefficient();
    return c;
  }

  // Each monomial present with probability density_percent / 100.
  template <Scalar K>
  HPoly<K> poly(const FieldOf<K>& f, int degree, int density_percent = 100) {
    HPoly<K> p(f, degree);
    for (const auto& m : monomials(degree)) {
      if (below(100) >= density_percent) continue;
      p.add_term(m, f.from_int(coefficient()));
    }
    return p;
  }

  template <Scalar K>
  HPoly<K> nonzero_poly(const FieldOf<K>& f, int degree, int density_percent = 100) {
    for (;;) {
      auto p = poly<K>(f, degree, density_percent);
      if (!p.is_zero()) return p;
    }
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
};

}  // namespace nlocus
