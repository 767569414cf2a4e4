#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nlocus/core/binary_form.hpp"
#include "nlocus/core/roots_of_unity.hpp"
#include "nlocus/families.hpp"
#include "nlocus/jacobian.hpp"
#include "nlocus/numeric/complex.hpp"

// Residues of phi(G) at the points of a coordinate line Z_ij = {z_i = z_j = 0},
// i, j in {1, 2, 3}.  The value at a point P of Z_ij is -G(P) / (dF/dz0)(P),
// so G = dF/dz0 gives the constant -1.

namespace nlocus {

template <Scalar K>
struct ResidueLine {
  int i = 1, j = 2;
  BinaryForm<K> f;  // F on the line, variables (z0, z_k)
  BinaryForm<K> D;  // dF/dz0 on the line
};

namespace detail {

inline void check_pair(int i, int j) {
  if (i == j || i < 1 || j < 1 || i > 3 || j > 3) throw PreconditionError("residue pair needs two distinct indices in 1..3");
}

template <Scalar K>
bool binary_squarefree(const BinaryForm<K>& f) {
  // a double root at [1:0] drops two degrees of f(x, 1)
  if (f.coeffs.size() >= 2 && f.coeffs[0].is_zero() && f.coeffs[1].is_zero()) return false;
  auto u = f.dehomogenize();
  if (u.degree() <= 0) return true;
  return gcd(u, u.derivative()).degree() == 0;
}

template <Scalar K>
BinaryForm<K> restrict_to(const HPoly<K>& G, int i, int j, int degree) {
  if (G.degree() != degree) throw DegreeMismatch("form has degree " + std::to_string(G.degree()) + ", expected " + std::to_string(degree));
  return restrict_line(G, i, j);
}

}  // namespace detail

template <Scalar K>
ResidueLine<K> residue_line(const HPoly<K>& F, int i, int j) {
  detail::check_pair(i, j);
  ResidueLine<K> out{i, j, restrict_line(F, i, j), restrict_line(F.partial(0), i, j)};
  if (!detail::binary_squarefree(out.f))
    throw Degenerate("surface restricted to the line z" + std::to_string(i) + " = z" + std::to_string(j) + " = 0 is not squarefree");
  return out;
}

// c with G = -c dF/dz0 on the line, when the residue of phi(G) is constant.
template <Scalar K>
std::optional<K> delta_constant_certificate(const HPoly<K>& F, const HPoly<K>& G, int i, int j) {
  auto line = residue_line(F, i, j);
  auto g = detail::restrict_to(G, i, j, F.degree() - 1);
  auto r = binary_proportional(g, line.D);
  if (!r) return std::nullopt;
  return -*r;
}

// Monic V(y) whose roots are the residue values at the d points of the
// line, with multiplicity: V is Res(f, y D + G) divided by Res(f, D).
template <Scalar K>
UPoly<K> delta_value_polynomial(const HPoly<K>& F, const HPoly<K>& G, int i, int j) {
  auto line = residue_line(F, i, j);
  auto g = detail::restrict_to(G, i, j, F.degree() - 1);
  const auto& field = F.field();
  K lead = resultant(line.f, line.D);
  if (lead.is_zero()) throw Degenerate("dF/dz0 vanishes at a point of the line; the residue value is not finite there");
  int d = F.degree();
  // Lagrange interpolation through y = 0..d
  std::vector<K> xs, ys;
  for (int y = 0; y <= d; ++y) {
    K yk = field.from_int(y);
    xs.push_back(yk);
    ys.push_back(resultant(line.f, yk * line.D + g));
  }
  UPoly<K> V(field, {});
  for (std::size_t a = 0; a < xs.size(); ++a) {
    UPoly<K> basis = UPoly<K>::constant(field, ys[a]);
    for (std::size_t b = 0; b < xs.size(); ++b) {
      if (a == b) continue;
      basis = basis * (UPoly<K>::x(field) - UPoly<K>::constant(field, xs[b])) *
              UPoly<K>::constant(field, (xs[a] - xs[b]).inverse());
    }
    V = V + basis;
  }
  if (V.degree() != d || !(V.leading() == lead))
    throw InternalError("value polynomial has unexpected leading term");
  return V.monic();
}

template <Scalar K>
struct ResidueReport {
  int i = 1, j = 2;
  BinaryForm<K> line;
  std::optional<K> constant;
  UPoly<K> values;                      // monic, roots are the residue values
  std::optional<std::vector<K>> roots;  // when V splits over the field
};

template <Scalar K>
std::optional<std::vector<K>> split_roots(const UPoly<K>& V) {
  std::vector<K> out;
  auto fac = factor(V);
  for (const auto& [g, mult] : fac.factors) {
    if (g.degree() != 1) return std::nullopt;
    for (int m = 0; m < mult; ++m) out.push_back(-g.coefficient(0));
  }
  return out;
}

template <Scalar K>
ResidueReport<K> residue_report(const HPoly<K>& F, const HPoly<K>& G, int i, int j) {
  ResidueReport<K> r;
  r.i = i;
  r.j = j;
  r.line = residue_line(F, i, j).f;
  r.constant = delta_constant_certificate(F, G, i, j);
  r.values = delta_value_polynomial(F, G, i, j);
  if constexpr (is_modp_v<K>) {
    if (static_cast<std::uint64_t>(F.degree()) < F.field().p) r.roots = split_roots(r.values);
  } else {
    r.roots = split_roots(r.values);
  }
  return r;
}

struct NumericResidue {
  numeric::Complex point;  // z_k / z0 at the point, or the chart parameter when z0 = 0
  numeric::Complex value;
  double radius = 0;       // error bound on value
};

namespace detail {

// h(x, k x + 1) as a univariate polynomial.
template <Scalar K>
UPoly<K> along_chart(const BinaryForm<K>& h, long k) {
  const auto& field = h.field;
  UPoly<K> acc(field, {});
  auto x = UPoly<K>::x(field);
  auto b = UPoly<K>::constant(field, field.from_int(k)) * x + UPoly<K>::constant(field, field.one());
  for (std::size_t m = 0; m < h.coeffs.size(); ++m) {
    if (h.coeffs[m].is_zero()) continue;
    acc = acc + UPoly<K>::constant(field, h.coeffs[m]) * x.pow(h.degree - static_cast<int>(m)) * b.pow(static_cast<int>(m));
  }
  return acc;
}

template <Scalar K>
std::vector<numeric::Complex> embed_poly(const UPoly<K>& u, mpfr_prec_t prec) {
  std::vector<numeric::Complex> out;
  for (const auto& c : u.coeffs()) out.push_back(numeric::embed(c, prec));
  return out;
}

}  // namespace detail

// Residue values from numerically located points of the line.  Points are
// parametrized as [z0 : z_k] = [x : k x + 1] with k chosen so that no point
// sits at x = infinity; radii come from disjoint inclusion disks.
template <Scalar K>
std::vector<NumericResidue> numeric_delta(const HPoly<K>& F, const HPoly<K>& G, int i, int j,
                                          mpfr_prec_t precision = 128) {
  auto line = residue_line(F, i, j);
  auto g = detail::restrict_to(G, i, j, F.degree() - 1);
  const auto& field = F.field();
  long k = 0;
  while (line.f.eval(field.one(), field.from_int(k)).is_zero()) ++k;
  auto fu = detail::embed_poly(detail::along_chart(line.f, k), precision);
  auto gu = detail::embed_poly(detail::along_chart(g, k), precision);
  auto du = detail::embed_poly(detail::along_chart(line.D, k), precision);
  auto dgu = numeric::derivative(gu), ddu = numeric::derivative(du);
  const double floor = std::ldexp(1.0, -static_cast<int>(precision) + 8);

  std::vector<NumericResidue> out;
  for (const auto& enc : numeric::polynomial_roots(fu)) {
    const auto& x = enc.root;
    numeric::Complex dv = numeric::horner(du, x);
    if (dv.magnitude() <= enc.radius) throw Degenerate("dF/dz0 vanishes at a point of the line; the residue value is not finite there");
    numeric::Complex gv = numeric::horner(gu, x);
    numeric::Complex value = -(gv / dv);
    // first-order propagation of the root radius, doubled
    numeric::Complex slope = (numeric::horner(dgu, x) * dv - gv * numeric::horner(ddu, x)) / (dv * dv);
    double radius = 2.0 * slope.magnitude() * enc.radius + floor * std::max(1.0, value.magnitude());
    numeric::Complex point = x;
    // z_k / z0 = (k x + 1) / x away from z0 = 0
    if (x.magnitude() > enc.radius)
      point = (numeric::from_double(static_cast<double>(k), precision) * x + numeric::from_double(1.0, precision)) / x;
    out.push_back({point, value, radius});
  }
  return out;
}

// Largest coefficient gap between prod (y - v) over the numeric values and
// the exact value polynomial.
template <Scalar K>
double numeric_polynomial_gap(const std::vector<NumericResidue>& values, const UPoly<K>& V, mpfr_prec_t precision = 128) {
  std::vector<numeric::Complex> vs;
  for (const auto& v : values) vs.push_back(v.value);
  auto c = numeric::from_roots(vs, precision);
  auto exact = detail::embed_poly(V, precision);
  if (exact.size() != c.size()) return INFINITY;
  double gap = 0;
  for (std::size_t k = 0; k < c.size(); ++k) gap = std::max(gap, (c[k] - exact[k]).magnitude());
  return gap;
}

template <Scalar K>
std::optional<K> delta_constant_certificate(const JacobianRing<K>& ring, const HPoly<K>& G, int i, int j) {
  return delta_constant_certificate(ring.surface(), G, i, j);
}
template <Scalar K>
UPoly<K> delta_value_polynomial(const JacobianRing<K>& ring, const HPoly<K>& G, int i, int j) {
  return delta_value_polynomial(ring.surface(), G, i, j);
}
template <Scalar K>
ResidueReport<K> residue_report(const JacobianRing<K>& ring, const HPoly<K>& G, int i, int j) {
  return residue_report(ring.surface(), G, i, j);
}
template <Scalar K>
std::vector<NumericResidue> numeric_delta(const JacobianRing<K>& ring, const HPoly<K>& G, int i, int j,
                                          mpfr_prec_t precision = 128) {
  return numeric_delta(ring.surface(), G, i, j, precision);
}

// All ratios c_nu / c_1 are roots of unity.
template <Scalar K>
bool root_of_unity_family_condition(const PQFamilySpec<K>& spec) {
  if (spec.cs.empty()) throw PreconditionError("family roots are not available over this field");
  if (spec.cs.front().is_zero()) throw PreconditionError("family roots must be nonzero");
  for (const auto& c : spec.cs)
    if (!root_of_unity_test(c / spec.cs.front())) return false;
  return true;
}

}  // namespace nlocus
