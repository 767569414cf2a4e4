#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlocus/core/binary_form.hpp"
#include "nlocus/core/parse.hpp"
#include "nlocus/core/roots_of_unity.hpp"
#include "nlocus/families.hpp"
#include "nlocus/linalg/echelon.hpp"

// Symbols on the three coordinate sections Z_i = Z cap {z_i = 0}, i = 1..3,
// of a surface Z = {F = 0}, with linear numerators and denominators.  A
// component num/den on Z_i has divisor (Z_i cap {num = 0}) - (Z_i cap {den = 0});
// each part is a zero-cycle carried by a line of P^3 and is stored as a
// binary form in a fixed parametrization of that line.

namespace nlocus {

template <Scalar K>
struct SymbolRatio {
  HPoly<K> num, den;
};

template <Scalar K>
struct SymbolTriple {
  std::string name;
  std::array<std::optional<SymbolRatio<K>>, 3> parts;  // on Z_1, Z_2, Z_3; empty = 1
};

// A line of P^3 as the kernel of two linear forms.  `key` is the reduced
// echelon form of the forms; points are s * basis[0] + t * basis[1].
template <Scalar K>
struct CycleLine {
  std::string key;
  std::array<std::array<K, kVariables>, 2> forms;
  std::array<std::array<K, kVariables>, 2> basis;
};

template <Scalar K>
struct ZeroCycleForm {
  int curve = 1;
  CycleLine<K> positive_line, negative_line;
  BinaryForm<K> positive, negative;  // F on each line, degree d
};

namespace detail {

template <Scalar K>
std::array<K, kVariables> linear_coefficients(const HPoly<K>& l) {
  if (l.degree() != 1) throw PreconditionError("symbol components must be ratios of linear forms");
  std::array<K, kVariables> out;
  for (int v = 0; v < kVariables; ++v) out[static_cast<std::size_t>(v)] = l.coefficient(Mono::variable(v));
  return out;
}

template <Scalar K>
std::array<K, kVariables> unit_vector(const FieldOf<K>& f, int v) {
  std::array<K, kVariables> e;
  e.fill(f.zero());
  e[static_cast<std::size_t>(v)] = f.one();
  return e;
}

template <Scalar K>
linalg::Echelon<K> small_echelon(const FieldOf<K>& f, const std::vector<std::array<K, kVariables>>& rows) {
  std::vector<linalg::SparseRow<K>> sr;
  for (const auto& r : rows) {
    linalg::SparseRow<K> s;
    for (std::uint32_t c = 0; c < kVariables; ++c)
      if (!r[c].is_zero()) s.emplace_back(c, r[c]);
    sr.push_back(std::move(s));
  }
  return linalg::generic_echelon<K>(f, kVariables, sr);
}

template <Scalar K>
std::vector<std::array<K, kVariables>> kernel_basis(const FieldOf<K>& f, const linalg::Echelon<K>& e) {
  std::vector<bool> pivot(kVariables, false);
  for (auto p : e.pivots) pivot[p] = true;
  std::vector<std::array<K, kVariables>> out;
  for (int free = 0; free < kVariables; ++free) {
    if (pivot[static_cast<std::size_t>(free)]) continue;
    auto v = unit_vector<K>(f, free);
    for (std::size_t r = 0; r < e.rows.size(); ++r)
      for (const auto& [c, x] : e.rows[r])
        if (static_cast<int>(c) == free) v[e.pivots[r]] = -x;
    out.push_back(v);
  }
  return out;
}

template <Scalar K>
std::string point_key(std::array<K, kVariables> p) {
  std::size_t lead = 0;
  while (lead < p.size() && p[lead].is_zero()) ++lead;
  if (lead == p.size()) throw InternalError("zero vector is not a point");
  K inv = p[lead].inverse();
  std::string key = "[";
  for (std::size_t v = 0; v < p.size(); ++v) {
    p[v] = p[v] * inv;
    key += (v ? ":" : "") + p[v].to_string();
  }
  return key + "]";
}

template <Scalar K>
CycleLine<K> make_line(const FieldOf<K>& f, const std::array<K, kVariables>& a, const std::array<K, kVariables>& b) {
  auto e = small_echelon<K>(f, {a, b});
  if (e.rank() != 2) throw PreconditionError("linear forms do not cut out a line");
  CycleLine<K> line;
  for (std::size_t r = 0; r < 2; ++r) {
    line.forms[r].fill(f.zero());
    for (const auto& [c, x] : e.rows[r]) line.forms[r][c] = x;
  }
  auto ker = kernel_basis<K>(f, e);
  line.basis = {ker[0], ker[1]};
  line.key = "{" + point_key<K>(line.forms[0]) + "," + point_key<K>(line.forms[1]) + "}";
  return line;
}

// F restricted to the line, as a form in (s, t).
template <Scalar K>
BinaryForm<K> restrict_to_line(const HPoly<K>& F, const CycleLine<K>& line) {
  const auto& f = F.field();
  std::array<HPoly<K>, kVariables> images;
  for (int v = 0; v < kVariables; ++v) {
    HPoly<K> im(f, 1);
    im.add_term(Mono::variable(0), line.basis[0][static_cast<std::size_t>(v)]);
    im.add_term(Mono::variable(1), line.basis[1][static_cast<std::size_t>(v)]);
    images[static_cast<std::size_t>(v)] = im;
  }
  auto form = restrict_line(F.substitute(images), 2, 3);
  form.vars = {-1, -1};
  return form;
}

// Intersection point of two distinct lines.
template <Scalar K>
std::optional<std::array<K, kVariables>> meet(const FieldOf<K>& f, const CycleLine<K>& a, const CycleLine<K>& b) {
  auto e = small_echelon<K>(f, {a.forms[0], a.forms[1], b.forms[0], b.forms[1]});
  if (e.rank() != 3) return std::nullopt;
  return kernel_basis<K>(f, e).front();
}

// Parameters (s, t) of a point known to lie on the line.
template <Scalar K>
std::pair<K, K> line_parameters(const FieldOf<K>& f, const CycleLine<K>& line, const std::array<K, kVariables>& p) {
  // basis vectors carry a unit in their free coordinate
  std::array<int, 2> free{-1, -1};
  for (int k = 0; k < 2; ++k)
    for (int v = 0; v < kVariables && free[static_cast<std::size_t>(k)] < 0; ++v) {
      auto u = line.basis[static_cast<std::size_t>(k)];
      auto other = line.basis[static_cast<std::size_t>(1 - k)];
      if (u[static_cast<std::size_t>(v)].is_one() && other[static_cast<std::size_t>(v)].is_zero())
        free[static_cast<std::size_t>(k)] = v;
    }
  (void)f;
  return {p[static_cast<std::size_t>(free[0])], p[static_cast<std::size_t>(free[1])]};
}

// Multiplicity of the point [s0 : t0] in the form, and the cofactor.
template <Scalar K>
std::pair<int, BinaryForm<K>> strip_point(BinaryForm<K> form, const K& s0, const K& t0) {
  // divide by t0 * s - s0 * t
  const K alpha = t0, beta = -s0;
  int mult = 0;
  while (form.degree > 0 && !form.is_zero()) {
    BinaryForm<K> q(form.field, form.vars, form.degree - 1);
    const std::size_t n = static_cast<std::size_t>(form.degree);
    if (!alpha.is_zero()) {
      K ainv = alpha.inverse();
      q.coeffs[0] = form.coeffs[0] * ainv;
      for (std::size_t k = 1; k < n; ++k) q.coeffs[k] = (form.coeffs[k] - beta * q.coeffs[k - 1]) * ainv;
      if (!(form.coeffs[n] - beta * q.coeffs[n - 1]).is_zero()) break;
    } else {
      if (!form.coeffs[0].is_zero()) break;
      K binv = beta.inverse();
      for (std::size_t k = 0; k < n; ++k) q.coeffs[k] = form.coeffs[k + 1] * binv;
    }
    form = std::move(q);
    ++mult;
  }
  return {mult, form};
}

}  // namespace detail

// Divisor of num/den on Z_i.
template <Scalar K>
ZeroCycleForm<K> divisor_forms(const HPoly<K>& F, int curve, const HPoly<K>& num, const HPoly<K>& den) {
  if (curve < 1 || curve > 3) throw PreconditionError("curve index must be 1, 2 or 3");
  if (num.degree() != den.degree()) throw DegreeMismatch("numerator and denominator of different degrees");
  const auto& f = F.field();
  auto plane = detail::unit_vector<K>(f, curve);
  ZeroCycleForm<K> out;
  out.curve = curve;
  auto build = [&](const HPoly<K>& l, CycleLine<K>& line, BinaryForm<K>& form, const char* what) {
    auto c = detail::linear_coefficients(l);
    bool on_plane = true;
    for (int v = 0; v < kVariables; ++v)
      if (v != curve && !c[static_cast<std::size_t>(v)].is_zero()) on_plane = false;
    if (on_plane) throw Degenerate(std::string(what) + " vanishes identically on the plane z" + std::to_string(curve) + " = 0");
    line = detail::make_line<K>(f, plane, c);
    form = detail::restrict_to_line(F, line);
    if (form.is_zero())
      throw Degenerate("a component of Z_" + std::to_string(curve) + " lies in the zero locus of the " + what);
  };
  build(num, out.positive_line, out.positive, "numerator");
  build(den, out.negative_line, out.negative, "denominator");
  return out;
}

namespace detail {

// One signed zero-cycle piece on a curve.
template <Scalar K>
struct CyclePiece {
  int curve;
  int sign;
  CycleLine<K> line;
  BinaryForm<K> form;
};

template <Scalar K>
std::vector<CyclePiece<K>> symbol_pieces(const SymbolTriple<K>& s, const HPoly<K>& F) {
  std::vector<CyclePiece<K>> out;
  for (int c = 1; c <= 3; ++c) {
    const auto& part = s.parts[static_cast<std::size_t>(c - 1)];
    if (!part) continue;
    auto z = divisor_forms(F, c, part->num, part->den);
    out.push_back({c, +1, z.positive_line, z.positive});
    out.push_back({c, -1, z.negative_line, z.negative});
  }
  return out;
}

template <Scalar K>
struct SharedPoint {
  std::string key;
  std::array<K, kVariables> coords;
};

// Points where two of the lines meet, keyed by normalized coordinates.
template <Scalar K>
std::vector<SharedPoint<K>> shared_points(const FieldOf<K>& f, const std::vector<CycleLine<K>>& lines) {
  std::map<std::string, std::array<K, kVariables>> found;
  for (std::size_t a = 0; a < lines.size(); ++a)
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      if (lines[a].key == lines[b].key) continue;
      if (auto p = meet<K>(f, lines[a], lines[b])) found.emplace(point_key<K>(*p), *p);
    }
  std::vector<SharedPoint<K>> out;
  for (auto& [k, p] : found) out.push_back({k, p});
  return out;
}

template <Scalar K>
bool on_line(const CycleLine<K>& line, const std::array<K, kVariables>& p) {
  for (const auto& form : line.forms) {
    K acc = p[0] * form[0];
    for (std::size_t v = 1; v < kVariables; ++v) acc += p[v] * form[v];
    if (!acc.is_zero()) return false;
  }
  return true;
}

// Splits a piece into multiplicities at shared points and a residual form.
template <Scalar K>
std::pair<std::vector<std::pair<std::string, int>>, BinaryForm<K>> split_piece(const FieldOf<K>& f, const CyclePiece<K>& piece,
                                                                             const std::vector<SharedPoint<K>>& shared) {
  std::vector<std::pair<std::string, int>> at;
  BinaryForm<K> rest = piece.form;
  for (const auto& sp : shared) {
    if (!on_line(piece.line, sp.coords)) continue;
    auto [s0, t0] = line_parameters<K>(f, piece.line, sp.coords);
    auto [mult, cof] = strip_point(rest, s0, t0);
    if (mult) at.emplace_back(sp.key, mult);
    rest = std::move(cof);
  }
  return {at, rest};
}

template <Scalar K>
std::vector<CycleLine<K>> all_lines(const std::vector<CyclePiece<K>>& pieces) {
  std::vector<CycleLine<K>> out;
  for (const auto& p : pieces) out.push_back(p.line);
  return out;
}

}  // namespace detail

struct BoundaryReport {
  bool vanishes = true;
  std::vector<std::string> offending;  // loci where the cycle fails to cancel
};

template <Scalar K>
BoundaryReport boundary_report(const SymbolTriple<K>& s, const HPoly<K>& F) {
  const auto& f = F.field();
  auto pieces = detail::symbol_pieces(s, F);
  auto shared = detail::shared_points<K>(f, detail::all_lines(pieces));
  std::map<std::string, long> point_total;
  std::map<std::string, std::pair<std::optional<BinaryForm<K>>, std::optional<BinaryForm<K>>>> line_total;
  for (const auto& piece : pieces) {
    auto [at, rest] = detail::split_piece<K>(f, piece, shared);
    for (const auto& [key, m] : at) point_total[key] += piece.sign * m;
    auto& slot = line_total[piece.line.key];
    auto& acc = piece.sign > 0 ? slot.first : slot.second;
    acc = acc ? *acc * rest : rest;
  }
  BoundaryReport out;
  for (const auto& [key, total] : point_total)
    if (total != 0) out.offending.push_back("point " + key);
  for (const auto& [key, forms] : line_total) {
    const auto& [pos, neg] = forms;
    auto one = [&](const std::optional<BinaryForm<K>>& x) {
      if (x) return *x;
      BinaryForm<K> c(f, {-1, -1}, 0);
      c.coeffs[0] = f.one();
      return c;
    };
    auto a = one(pos), b = one(neg);
    bool ok = a.degree == b.degree && binary_proportional(a, b).has_value();
    if (!ok) out.offending.push_back("line " + key);
  }
  out.vanishes = out.offending.empty();
  return out;
}

template <Scalar K>
bool boundary_vanishes(const SymbolTriple<K>& s, const HPoly<K>& F) {
  return boundary_report(s, F).vanishes;
}

// Orders of vanishing of each symbol at each prime divisor of each curve.
struct OrderMatrix {
  std::vector<std::string> columns;  // "Z<i> <locus>"
  std::vector<std::vector<long>> rows;
  std::vector<int> column_degree;    // number of geometric points per column
};

template <Scalar K>
OrderMatrix order_matrix(const std::vector<SymbolTriple<K>>& symbols, const HPoly<K>& F) {
  const auto& f = F.field();
  std::vector<std::vector<detail::CyclePiece<K>>> per_symbol;
  std::vector<CycleLine<K>> lines;
  for (const auto& s : symbols) {
    per_symbol.push_back(detail::symbol_pieces(s, F));
    for (const auto& p : per_symbol.back()) lines.push_back(p.line);
  }
  auto shared = detail::shared_points<K>(f, lines);
  OrderMatrix m;
  std::map<std::string, std::size_t> index;
  auto column = [&](const std::string& name, int degree) {
    auto [it, inserted] = index.emplace(name, m.columns.size());
    if (inserted) {
      m.columns.push_back(name);
      m.column_degree.push_back(degree);
      for (auto& r : m.rows) r.push_back(0);
    }
    return it->second;
  };
  for (const auto& pieces : per_symbol) {
    m.rows.emplace_back(m.columns.size(), 0);
    for (const auto& piece : pieces) {
      std::string curve = "Z" + std::to_string(piece.curve) + " ";
      auto [at, rest] = detail::split_piece<K>(f, piece, shared);
      for (const auto& [key, mult] : at) m.rows.back()[column(curve + key, 1)] += piece.sign * mult;
      if (rest.degree == 0) continue;
      for (const auto& [g, mult] : binary_factor(rest).factors)
        m.rows.back()[column(curve + piece.line.key + " " + g.to_string(), g.degree)] += piece.sign * mult;
    }
  }
  return m;
}

struct IndependenceReport {
  bool independent = false;
  std::size_t rank = 0;
  std::size_t deficiency = 0;
  std::vector<long> relation;          // integer kernel vector when deficiency is 1
  std::vector<std::string> constants;  // value of the relation on each curve
};

namespace detail {

// Integer kernel vector of a matrix with one-dimensional left kernel.
inline std::vector<long> left_kernel_vector(const std::vector<std::vector<long>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RationalField QQ;
  // columns of the transpose; kernel of rows^T
  std::vector<linalg::SparseRow<Rational>> tr(cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::uint32_t r = 0; r < n; ++r)
      if (rows[r][c]) tr[c].emplace_back(r, Rational(rows[r][c]));
  auto e = linalg::generic_echelon<Rational>(QQ, n, tr);
  std::vector<bool> pivot(n, false);
  for (auto p : e.pivots) pivot[p] = true;
  std::size_t free = 0;
  while (pivot[free]) ++free;
  std::vector<mpq_class> v(n, 0);
  v[free] = 1;
  for (std::size_t r = 0; r < e.rows.size(); ++r)
    for (const auto& [c, x] : e.rows[r])
      if (c == free) v[e.pivots[r]] = -x.value();
  mpz_class lcm = 1;
  for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<long> out;
  for (const auto& x : v) out.push_back(mpz_class(x * lcm).get_si());
  return out;
}

// The value of prod s_k^{n_k} on Z_curve, known to have trivial divisor,
// read off modulo F on an auxiliary line of the plane z_curve = 0.
template <Scalar K>
K relation_constant(const std::vector<SymbolTriple<K>>& symbols, const std::vector<long>& n, const HPoly<K>& F, int curve) {
  const auto& f = F.field();
  for (long shift = 1; shift < 50; ++shift) {
    // line through two points of the plane with small integer coordinates
    std::array<K, kVariables> a, b;
    a.fill(f.zero());
    b.fill(f.zero());
    int slot = 0;
    for (int v = 0; v < kVariables; ++v) {
      if (v == curve) continue;
      a[static_cast<std::size_t>(v)] = f.from_int(slot == 0 ? 1 : shift * slot + 1);
      b[static_cast<std::size_t>(v)] = f.from_int(slot == 1 ? 1 : (shift + slot) * (slot + 2));
      ++slot;
    }
    auto along = [&](const HPoly<K>& g) {
      std::array<HPoly<K>, kVariables> images;
      for (int v = 0; v < kVariables; ++v) {
        HPoly<K> im(f, 1);
        im.add_term(Mono::variable(0), a[static_cast<std::size_t>(v)]);
        im.add_term(Mono::variable(1), b[static_cast<std::size_t>(v)]);
        images[static_cast<std::size_t>(v)] = im;
      }
      auto form = restrict_line(g.substitute(images), 2, 3);
      return form.dehomogenize();
    };
    auto fu = along(F);
    if (fu.degree() != F.degree() || gcd(fu, fu.derivative()).degree() > 0) continue;
    UPoly<K> top = UPoly<K>::constant(f, f.one()), bottom = top;
    bool clash = false;
    for (std::size_t k = 0; k < symbols.size() && !clash; ++k) {
      const auto& part = symbols[k].parts[static_cast<std::size_t>(curve - 1)];
      if (!part || n[k] == 0) continue;
      auto nu = along(part->num), de = along(part->den);
      if (gcd(nu, fu).degree() > 0 || gcd(de, fu).degree() > 0) clash = true;
      long e = n[k] > 0 ? n[k] : -n[k];
      if (n[k] > 0) {
        top = (top * nu.pow(static_cast<int>(e))) % fu;
        bottom = (bottom * de.pow(static_cast<int>(e))) % fu;
      } else {
        top = (top * de.pow(static_cast<int>(e))) % fu;
        bottom = (bottom * nu.pow(static_cast<int>(e))) % fu;
      }
    }
    if (clash) continue;
    if (top.degree() > 0 || bottom.degree() > 0) {
      // top = c * bottom modulo fu
      K c = top.leading() / bottom.leading();
      if (!(top - UPoly<K>::constant(f, c) * bottom).is_zero())
        throw InternalError("relation with trivial divisor is not constant on Z_" + std::to_string(curve));
      return c;
    }
    return top.coefficient(0) / bottom.coefficient(0);
  }
  throw InternalError("no auxiliary line found for the constant check");
}

}  // namespace detail

// Full row rank of the order matrix certifies independence.  With a single
// relation, the relation is evaluated: a non-torsion constant on some curve
// means it does not hold.  Larger deficiencies are reported as dependent.
template <Scalar K>
IndependenceReport independence_report(const std::vector<SymbolTriple<K>>& symbols, const HPoly<K>& F) {
  auto m = order_matrix(symbols, F);
  std::vector<linalg::SparseRow<Rational>> rows;
  for (const auto& r : m.rows) {
    linalg::SparseRow<Rational> s;
    for (std::uint32_t c = 0; c < r.size(); ++c)
      if (r[c]) s.emplace_back(c, Rational(r[c]));
    rows.push_back(std::move(s));
  }
  IndependenceReport out;
  out.rank = linalg::generic_echelon<Rational>(RationalField{}, m.columns.size(), rows).rank();
  out.deficiency = symbols.size() - out.rank;
  if (out.deficiency == 0) {
    out.independent = true;
  } else if (out.deficiency == 1) {
    out.relation = detail::left_kernel_vector(m.rows);
    bool torsion = true;
    for (int c = 1; c <= 3; ++c) {
      K v = detail::relation_constant(symbols, out.relation, F, c);
      out.constants.push_back(v.to_string());
      torsion = torsion && root_of_unity_test(v);
    }
    out.independent = !torsion;
  }
  return out;
}

template <Scalar K>
bool independence_test(const std::vector<SymbolTriple<K>>& symbols, const HPoly<K>& F) {
  return independence_report(symbols, F).independent;
}

// Named symbols.

template <Scalar K>
SymbolTriple<K> delta_symbol(const FieldOf<K>& f) {
  auto z = [&](int i) { return HPoly<K>::variable(f, i); };
  return {"delta", {SymbolRatio<K>{z(3), z(2)}, SymbolRatio<K>{z(1), z(3)}, SymbolRatio<K>{z(2), z(1)}}};
}

// c_ij(X) for a member of the family attached to the pair {i, j}: z_j / w on
// Z_i, w / z_i on Z_j, trivial on the third curve.
template <Scalar K>
SymbolTriple<K> c_symbol(int i, int j, const HPoly<K>& w) {
  if (i == j || i < 1 || j < 1 || i > 3 || j > 3) throw PreconditionError("symbol pair needs two distinct indices in 1..3");
  const auto& f = w.field();
  SymbolTriple<K> s;
  s.name = "c" + std::to_string(i) + std::to_string(j);
  s.parts[static_cast<std::size_t>(i - 1)] = SymbolRatio<K>{HPoly<K>::variable(f, j), w};
  s.parts[static_cast<std::size_t>(j - 1)] = SymbolRatio<K>{w, HPoly<K>::variable(f, i)};
  return s;
}

namespace detail {

inline std::string trim_text(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace detail

// "num/den;num/den;num/den" with "1" for a trivial component.  Rational
// coefficients inside a component need parentheses around num and den.
template <Scalar K>
SymbolTriple<K> parse_symbol(const std::string& text, const FieldOf<K>& f, const std::string& name = "") {
  auto parts = split_top_level(text, ';');
  if (parts.size() != 3) throw ParseError("a symbol has three components separated by ';'", 0);
  SymbolTriple<K> s;
  s.name = name;
  for (std::size_t c = 0; c < 3; ++c) {
    auto piece = detail::trim_text(parts[c]);
    if (piece == "1") continue;
    auto ratio = split_top_level(piece, '/');
    if (ratio.size() != 2) throw ParseError("symbol component '" + piece + "' is not of the form num/den", 0);
    s.parts[c] = SymbolRatio<K>{parse_poly<K>(ratio[0], f), parse_poly<K>(ratio[1], f)};
  }
  return s;
}

template <Scalar K>
std::string symbol_text(const SymbolTriple<K>& s) {
  std::string out;
  for (std::size_t c = 0; c < 3; ++c) {
    if (c) out += ";";
    const auto& p = s.parts[c];
    out += p ? "(" + p->num.to_string() + ")/(" + p->den.to_string() + ")" : "1";
  }
  return out;
}

}  // namespace nlocus
