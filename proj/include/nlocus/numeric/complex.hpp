#pragma once

#include <mpfr.h>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "nlocus/errors.hpp"
#include "nlocus/scalar/scalar.hpp"

namespace nlocus::numeric {

// Owning wrapper around mpfr_t.  Results take the precision of the left
// operand; all rounding is to nearest.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec), mpfr_set_zero(v_, 1); }
  Real(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec), mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(const mpq_class& q, mpfr_prec_t prec) { mpfr_init2(v_, prec), mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)), mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(Real o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, const Real& b) { return apply(mpfr_add, a, b); }
  friend Real operator-(const Real& a, const Real& b) { return apply(mpfr_sub, a, b); }
  friend Real operator*(const Real& a, const Real& b) { return apply(mpfr_mul, a, b); }
  friend Real operator/(const Real& a, const Real& b) { return apply(mpfr_div, a, b); }
  Real operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

  Real sqrt() const {
    Real r(precision());
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    return r;
  }
  Real abs() const {
    Real r(precision());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
  }

  std::string to_string(int digits = 20) const {
    std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return buf.data();
  }

 private:
  template <class Op>
  static Real apply(Op op, const Real& a, const Real& b) {
    Real r(a.precision());
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  mpfr_t v_;
};

struct Complex {
  Real re, im;

  explicit Complex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t precision() const { return re.precision(); }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real n = b.re * b.re + b.im * b.im;
    if (n.is_zero()) throw NumericFailure("complex division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Complex operator-() const { return {-re, -im}; }

  Real abs() const { return (re * re + im * im).sqrt(); }
  double magnitude() const { return abs().to_double(); }

  std::string to_string(int digits = 20) const {
    std::string s = re.to_string(digits);
    if (im.is_zero()) return s;
    std::string i = im.to_string(digits);
    return s + (i.front() == '-' ? "" : "+") + i + "i";
  }
};

inline Complex from_double(double x, mpfr_prec_t prec) { return {Real(x, prec), Real(prec)}; }

// Image of a scalar under the embedding zeta_n -> exp(2 pi i / n).
template <Scalar K>
Complex embed(const K& a, mpfr_prec_t prec) {
  if constexpr (is_rational_v<K>) {
    return {Real(a.value(), prec), Real(prec)};
  } else if constexpr (is_cyclotomic_v<K>) {
    unsigned n = a.field().conductor();
    Complex acc(prec);
    const auto& c = a.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] == 0) continue;
      Real angle = Real::pi(prec) * Real(mpq_class(2 * static_cast<long>(k), n), prec);
      Complex z(prec);
      mpfr_sin_cos(z.im.get(), z.re.get(), angle.get(), MPFR_RNDN);
      acc = acc + Complex{Real(c[k], prec), Real(prec)} * z;
    }
    return acc;
  } else {
    (void)a;
    (void)prec;
    throw PreconditionError("numeric evaluation needs a characteristic zero field");
  }
}

// Coefficients lowest degree first.
inline Complex horner(const std::vector<Complex>& c, const Complex& x) {
  Complex acc(x.precision());
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

inline std::vector<Complex> derivative(const std::vector<Complex>& c) {
  std::vector<Complex> out;
  for (std::size_t k = 1; k < c.size(); ++k)
    out.push_back(c[k] * from_double(static_cast<double>(k), c[k].precision()));
  return out;
}

struct RootEnclosure {
  Complex root;
  double radius = 0;  // disk guaranteed to hold exactly one root
};

// Simultaneous Aberth iteration, followed by inclusion disks
// d |p(z)| / |lead * prod (z - z_j)| which are checked to be disjoint.
inline std::vector<RootEnclosure> polynomial_roots(const std::vector<Complex>& coeffs, int max_iterations = 0) {
  if (coeffs.size() < 2) return {};
  const std::size_t n = coeffs.size() - 1;
  const mpfr_prec_t prec = coeffs.back().precision();
  if (coeffs.back().abs().is_zero()) throw PreconditionError("leading coefficient vanishes");
  if (max_iterations <= 0) max_iterations = 100 + 4 * static_cast<int>(prec);
  auto dp = derivative(coeffs);

  // Fujiwara-type radius for the starting circle
  double lead = coeffs.back().magnitude(), bound = 0;
  for (std::size_t k = 1; k <= n; ++k)
    bound = std::max(bound, std::pow(coeffs[n - k].magnitude() / lead, 1.0 / static_cast<double>(k)));
  double radius = std::max(bound, 1e-3);

  std::vector<Complex> z;
  for (std::size_t k = 0; k < n; ++k) {
    double angle = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z.push_back({Real(radius * std::cos(angle), prec), Real(radius * std::sin(angle), prec)});
  }
  const double tiny = std::ldexp(1.0, -static_cast<int>(prec) + 8);
  bool converged = false;
  for (int it = 0; it < max_iterations && !converged; ++it) {
    converged = true;
    for (std::size_t i = 0; i < n; ++i) {
      Complex pv = horner(coeffs, z[i]);
      if (pv.abs().is_zero()) continue;
      Complex ratio = pv / horner(dp, z[i]);
      Complex sum(prec);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) sum = sum + from_double(1.0, prec) / (z[i] - z[j]);
      Complex step = ratio / (from_double(1.0, prec) - ratio * sum);
      z[i] = z[i] - step;
      if (step.magnitude() > tiny * std::max(1.0, z[i].magnitude())) converged = false;
    }
  }
  if (!converged) throw NumericFailure("root finder did not converge at the requested precision");

  std::vector<RootEnclosure> out;
  for (std::size_t i = 0; i < n; ++i) {
    Real denom = coeffs.back().abs();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) denom = denom * (z[i] - z[j]).abs();
    double r = static_cast<double>(n) * (horner(coeffs, z[i]).abs() / denom).to_double();
    // floor for rounding in the residual itself
    r = std::max(r, tiny * std::max(1.0, z[i].magnitude()));
    out.push_back({z[i], r});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (out[i].radius + out[j].radius >= (out[i].root - out[j].root).magnitude())
        throw NumericFailure("inclusion disks overlap; increase precision");
  return out;
}

// Coefficients of prod (y - v_k), lowest degree first.
inline std::vector<Complex> from_roots(const std::vector<Complex>& roots, mpfr_prec_t prec) {
  std::vector<Complex> c{from_double(1.0, prec)};
  for (const auto& v : roots) {
    std::vector<Complex> next(c.size() + 1, Complex(prec));
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] = next[k + 1] + c[k];
      next[k] = next[k] - c[k] * v;
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace nlocus::numeric
