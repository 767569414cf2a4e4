#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "nlocus/core/upoly.hpp"
#include "nlocus/errors.hpp"
#include "nlocus/scalar/scalar.hpp"

namespace nlocus {

template <Scalar K>
struct Factorization {
  K unit;                                      // leading coefficient
  std::vector<std::pair<UPoly<K>, int>> factors;  // monic irreducible, multiplicity
};

namespace detail {

using ZPoly = std::vector<mpz_class>;  // lowest degree first, trimmed

inline void ztrim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline mpz_class zcontent(const ZPoly& f) {
  mpz_class g = 0;
  for (const auto& c : f) g = gcd(g, c);
  return g;
}

inline ZPoly zprimitive(ZPoly f) {
  mpz_class g = zcontent(f);
  if (g == 0) return f;
  if (f.back() < 0) g = -g;
  for (auto& c : f) c /= g;
  return f;
}

inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Exact quotient f / g over Z, if it exists.
inline bool zdivide(const ZPoly& f, const ZPoly& g, ZPoly& quot) {
  ZPoly r = f;
  if (g.empty()) return false;
  if (r.size() < g.size()) return r.empty();
  quot.assign(r.size() - g.size() + 1, 0);
  for (std::size_t k = r.size(); k-- >= g.size();) {
    if (r[k] == 0) continue;
    if (!mpz_divisible_p(r[k].get_mpz_t(), g.back().get_mpz_t())) return false;
    mpz_class t = r[k] / g.back();
    quot[k - g.size() + 1] = t;
    for (std::size_t j = 0; j < g.size(); ++j) r[k - g.size() + 1 + j] -= t * g[j];
    if (k == g.size() - 1) break;
  }
  for (const auto& c : r)
    if (c != 0) return false;
  ztrim(quot);
  return true;
}

// Polynomials over Z/P for a (possibly large) prime P.
class ModPoly {
 public:
  explicit ModPoly(mpz_class prime) : p_(std::move(prime)) {}

  const mpz_class& prime() const { return p_; }

  ZPoly reduce(ZPoly f) const {
    for (auto& c : f) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), p_.get_mpz_t());
    ztrim(f);
    return f;
  }
  mpz_class inv(const mpz_class& a) const {
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p_.get_mpz_t())) throw DivisionByZero();
    return r;
  }
  ZPoly mul(const ZPoly& a, const ZPoly& b) const { return reduce(zmul(a, b)); }
  ZPoly sub(ZPoly a, const ZPoly& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
    return reduce(std::move(a));
  }
  ZPoly monic(ZPoly a) const {
    if (a.empty()) return a;
    mpz_class i = inv(a.back());
    for (auto& c : a) c *= i;
    return reduce(std::move(a));
  }
  std::pair<ZPoly, ZPoly> divmod(ZPoly a, const ZPoly& b) const {
    if (b.empty()) throw DivisionByZero();
    if (a.size() < b.size()) return {{}, a};
    ZPoly q(a.size() - b.size() + 1, 0);
    mpz_class i = inv(b.back());
    for (std::size_t k = a.size(); k-- >= b.size();) {
      mpz_class t = a[k] * i;
      mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), p_.get_mpz_t());
      if (t != 0) {
        q[k - b.size() + 1] = t;
        for (std::size_t j = 0; j < b.size(); ++j) {
          a[k - b.size() + 1 + j] -= t * b[j];
          mpz_fdiv_r(a[k - b.size() + 1 + j].get_mpz_t(), a[k - b.size() + 1 + j].get_mpz_t(), p_.get_mpz_t());
        }
      }
      if (k == b.size() - 1) break;
    }
    ztrim(a);
    ztrim(q);
    return {q, a};
  }
  ZPoly rem(ZPoly a, const ZPoly& b) const { return divmod(std::move(a), b).second; }
  ZPoly gcd(ZPoly a, ZPoly b) const {
    while (!b.empty()) {
      ZPoly r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(std::move(a));
  }
  ZPoly powmod(ZPoly base, mpz_class e, const ZPoly& m) const {
    ZPoly r = {mpz_class(1)};
    base = rem(std::move(base), m);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = rem(mul(r, base), m);
      e >>= 1;
      if (e > 0) base = rem(mul(base, base), m);
    }
    return r;
  }
  ZPoly derivative(const ZPoly& f) const {
    ZPoly d;
    for (std::size_t k = 1; k < f.size(); ++k) d.push_back(f[k] * static_cast<unsigned long>(k));
    return reduce(std::move(d));
  }

  // Monic irreducible factors of a monic squarefree polynomial (P odd).
  std::vector<ZPoly> factor_squarefree(ZPoly f) const {
    std::vector<ZPoly> out;
    ZPoly x = {mpz_class(0), mpz_class(1)};
    ZPoly h = x;
    for (int i = 1; static_cast<int>(f.size()) - 1 >= 2 * i; ++i) {
      h = powmod(h, p_, f);
      ZPoly g = gcd(f, sub(h, x));
      if (g.size() > 1) {
        split_equal_degree(g, i, out);
        f = divmod(f, g).first;
        h = rem(h, f);
      }
    }
    if (f.size() > 1) out.push_back(monic(f));
    return out;
  }

 private:
  void split_equal_degree(const ZPoly& g, int i, std::vector<ZPoly>& out) const {
    int n = static_cast<int>(g.size()) - 1;
    if (n == i) {
      out.push_back(g);
      return;
    }
    mpz_class e;
    mpz_pow_ui(e.get_mpz_t(), p_.get_mpz_t(), static_cast<unsigned long>(i));
    e = (e - 1) / 2;
    std::mt19937_64 gen(0x5eed + static_cast<unsigned long>(n) * 131 + static_cast<unsigned long>(i));
    gmp_randclass rnd(gmp_randinit_default);
    rnd.seed(gen());
    for (int attempt = 0; attempt < 400; ++attempt) {
      ZPoly a(static_cast<std::size_t>(n), 0);
      for (auto& c : a) c = rnd.get_z_range(p_);
      ztrim(a);
      if (a.size() <= 1) continue;
      ZPoly b = sub(powmod(a, e, g), ZPoly{mpz_class(1)});
      ZPoly d = gcd(g, b);
      if (d.size() > 1 && d.size() < g.size()) {
        split_equal_degree(d, i, out);
        split_equal_degree(divmod(g, d).first, i, out);
        return;
      }
    }
    throw InternalError("equal-degree splitting did not converge");
  }

  mpz_class p_;
};

// Irreducible factors over Z of a squarefree primitive polynomial of
// positive degree (big-prime Zassenhaus).
inline std::vector<ZPoly> zfactor_squarefree(ZPoly f) {
  f = zprimitive(f);
  int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return {f};
  mpz_class norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  mpz_class norm;
  mpz_sqrt(norm.get_mpz_t(), norm2.get_mpz_t());
  norm += 1;
  mpz_class bound = norm * abs(f.back());
  bound <<= static_cast<unsigned long>(n + 1);
  mpz_class prime = bound + 1;
  ModPoly mp(prime);
  for (;;) {
    mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
    mp = ModPoly(prime);
    if (mpz_divisible_p(f.back().get_mpz_t(), prime.get_mpz_t())) continue;
    ZPoly fm = mp.reduce(f);
    if (mp.gcd(fm, mp.derivative(fm)).size() == 1) break;
  }
  std::vector<ZPoly> locals = mp.factor_squarefree(mp.monic(mp.reduce(f)));
  std::vector<ZPoly> found;
  mpz_class half = prime / 2;
  std::size_t k = 1;
  while (2 * k <= locals.size()) {
    bool hit = false;
    std::vector<std::size_t> idx(k);
    for (std::size_t j = 0; j < k; ++j) idx[j] = j;
    for (;;) {
      ZPoly cand = {f.back()};
      for (auto j : idx) cand = mp.mul(cand, locals[j]);
      for (auto& c : cand)
        if (c > half) c -= prime;
      cand = zprimitive(cand);
      ZPoly quot;
      if (zdivide(f, cand, quot)) {
        found.push_back(cand);
        f = zprimitive(quot);
        for (std::size_t j = k; j-- > 0;) locals.erase(locals.begin() + static_cast<long>(idx[j]));
        hit = true;
        break;
      }
      // next combination
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == locals.size() - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!hit) ++k;
  }
  if (f.size() > 1) found.push_back(f);
  return found;
}

inline UPoly<Rational> from_zpoly(const ZPoly& f) {
  std::vector<Rational> c;
  for (const auto& a : f) c.emplace_back(mpq_class(a));
  return UPoly<Rational>(RationalField{}, std::move(c)).monic();
}

inline ZPoly to_zpoly(const UPoly<Rational>& f) {
  mpz_class l = 1;
  for (const auto& c : f.coeffs()) l = lcm(l, c.value().get_den());
  ZPoly z;
  for (const auto& c : f.coeffs()) z.push_back(c.value().get_num() * (l / c.value().get_den()));
  return zprimitive(z);
}

inline std::vector<UPoly<Rational>> irreducible_factors(const UPoly<Rational>& squarefree) {
  std::vector<UPoly<Rational>> out;
  for (const auto& z : zfactor_squarefree(to_zpoly(squarefree))) out.push_back(from_zpoly(z));
  return out;
}

inline UPoly<Rational> rational_norm(const UPoly<Cyclotomic>& g) {
  const auto& fld = g.field();
  unsigned n = fld.conductor();
  UPoly<Cyclotomic> prod = UPoly<Cyclotomic>::constant(fld, fld.one());
  for (unsigned k = 1; k <= n; ++k) {
    if (std::gcd(k, n) != 1) continue;
    std::vector<Cyclotomic> c;
    for (const auto& a : g.coeffs()) c.push_back(a.galois(static_cast<long>(k)));
    prod = prod * UPoly<Cyclotomic>(fld, std::move(c));
  }
  std::vector<Rational> out;
  for (const auto& a : prod.coeffs()) {
    if (!a.is_rational()) throw InternalError("norm has irrational coefficients");
    out.emplace_back(a.coeffs()[0]);
  }
  return UPoly<Rational>(RationalField{}, std::move(out));
}

// Trager's algorithm for a monic squarefree polynomial over Q(zeta_n).
inline std::vector<UPoly<Cyclotomic>> irreducible_factors(const UPoly<Cyclotomic>& g) {
  if (g.degree() <= 1) return {g.monic()};
  const auto& fld = g.field();
  Cyclotomic z = fld.zeta(1);
  for (long step = 0; step < 64; ++step) {
    long s = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
    Cyclotomic shift = fld.from_int(s) * z;
    UPoly<Cyclotomic> gs = g.shift(-shift);
    UPoly<Rational> nrm = rational_norm(gs);
    if (gcd(nrm, nrm.derivative()).degree() != 0) continue;
    auto qf = irreducible_factors(nrm);
    if (qf.size() == 1) return {g.monic()};
    std::vector<UPoly<Cyclotomic>> out;
    for (const auto& h : qf) {
      std::vector<Cyclotomic> c;
      for (const auto& a : h.coeffs()) c.push_back(fld.from_rational(a.value()));
      UPoly<Cyclotomic> part = gcd(UPoly<Cyclotomic>(fld, std::move(c)), gs);
      if (part.degree() > 0) out.push_back(part.shift(shift).monic());
    }
    return out;
  }
  throw InternalError("no squarefree norm found");
}

inline std::vector<UPoly<ModP>> irreducible_factors(const UPoly<ModP>& g) {
  std::uint64_t p = g.field().p;
  if (p == 2) throw PreconditionError("factorization over F_2 is not supported");
  ModPoly mp{mpz_class(static_cast<unsigned long>(p))};
  ZPoly z;
  for (const auto& a : g.coeffs()) z.push_back(mpz_class(static_cast<unsigned long>(a.value())));
  std::vector<UPoly<ModP>> out;
  for (const auto& f : mp.factor_squarefree(mp.monic(z))) {
    std::vector<ModP> c;
    for (const auto& a : f) c.emplace_back(a.get_ui(), p);
    out.emplace_back(g.field(), std::move(c));
  }
  return out;
}

}  // namespace detail

// Factorization into monic irreducibles over the coefficient field.  Over
// F_p the degree must stay below p.
template <Scalar K>
Factorization<K> factor(const UPoly<K>& f) {
  if (f.is_zero()) throw PreconditionError("cannot factor the zero polynomial");
  Factorization<K> out{f.leading(), {}};
  if constexpr (is_modp_v<K>) {
    if (static_cast<std::uint64_t>(f.degree()) >= f.field().p)
      throw PreconditionError("degree too large for squarefree decomposition over F_p");
  }
  auto parts = squarefree_parts(f.monic());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].degree() <= 0) continue;
    for (auto& g : detail::irreducible_factors(parts[i])) out.factors.emplace_back(std::move(g), static_cast<int>(i + 1));
  }
  return out;
}

}  // namespace nlocus
