#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlocus/core/binary_form.hpp"
#include "nlocus/core/parse.hpp"
#include "nlocus/jacobian.hpp"
#include "nlocus/random.hpp"

namespace nlocus {

// F = w A + prod_nu (c z_s1^(p+q) - c_nu z_s2^p z_s3^q), sigma = (s1, s2, s3).
template <Scalar K>
struct PQFamilySpec {
  using field_type = FieldOf<K>;

  field_type field{};
  std::array<int, 3> sigma{1, 2, 3};
  int p = 1;
  int q = 1;
  int r = 1;
  K c{};
  std::vector<K> cs;
  HPoly<K> w;
  HPoly<K> A;

  int degree() const { return r * (p + q); }

  void validate() const {
    if (p < 0 || q < 0 || p + q == 0) throw PreconditionError("p and q must be non-negative and not both zero");
    if (std::gcd(p, q) != 1) throw PreconditionError("p and q must be coprime");
    if (r < 1) throw PreconditionError("r must be positive");
    std::array<int, 3> s = sigma;
    std::sort(s.begin(), s.end());
    if (s != std::array<int, 3>{1, 2, 3}) throw PreconditionError("sigma must permute 1, 2, 3");
    if (static_cast<int>(cs.size()) != r) throw PreconditionError("cs must have r entries");
    if (c.is_zero()) throw PreconditionError("scale c must be nonzero");
    if (w.degree() != 1 || w.is_zero()) throw DegreeMismatch("w must be a nonzero linear form");
    if (w.coefficient(Mono::variable(0)).is_zero()) throw PreconditionError("w must involve z0");
    if (A.degree() != degree() - 1) throw DegreeMismatch("A must have degree d-1 where d = r(p+q)");
  }
};

// F = w A + z_i z_j B + c_i z_i^d + c_j z_j^d.
template <Scalar K>
struct TijFamilySpec {
  using field_type = FieldOf<K>;

  field_type field{};
  std::array<int, 2> pair{1, 2};
  HPoly<K> w;
  HPoly<K> A;
  HPoly<K> B;
  K ci{};
  K cj{};

  int degree() const { return A.degree() + 1; }

  void validate() const {
    if (pair != std::array<int, 2>{1, 2} && pair != std::array<int, 2>{2, 3} && pair != std::array<int, 2>{3, 1})
      throw PreconditionError("pair must be one of 12, 23, 31");
    if (w.degree() != 1 || w.is_zero()) throw DegreeMismatch("w must be a nonzero linear form");
    if (B.degree() != degree() - 2) throw DegreeMismatch("B must have degree d-2");
    if (degree() < 2) throw DegreeMismatch("degree must be at least 2");
    if (ci.is_zero() || cj.is_zero()) throw PreconditionError("c_i and c_j must be nonzero");
  }
};

template <Scalar K>
HPoly<K> pq_polynomial(const PQFamilySpec<K>& spec) {
  spec.validate();
  const auto& f = spec.field;
  Mono lead, tail;
  lead.e[static_cast<std::size_t>(spec.sigma[0])] = spec.p + spec.q;
  tail.e[static_cast<std::size_t>(spec.sigma[1])] = spec.p;
  tail.e[static_cast<std::size_t>(spec.sigma[2])] = spec.q;
  HPoly<K> prod = HPoly<K>::constant(f, f.one());
  for (const auto& cn : spec.cs) {
    HPoly<K> factor(f, spec.p + spec.q);
    factor.add_term(lead, spec.c);
    factor.add_term(tail, -cn);
    prod *= factor;
  }
  return spec.w * spec.A + prod;
}

template <Scalar K>
HPoly<K> tij_polynomial(const TijFamilySpec<K>& spec) {
  spec.validate();
  const auto& f = spec.field;
  int d = spec.degree();
  auto zi = HPoly<K>::variable(f, spec.pair[0]), zj = HPoly<K>::variable(f, spec.pair[1]);
  return spec.w * spec.A + zi * zj * spec.B + spec.ci * zi.pow(d) + spec.cj * zj.pow(d);
}

// Throws NotTransversal when the member is singular or tangent to the
// coordinate configuration.
template <Scalar K>
JacobianRing<K> build_pq(const PQFamilySpec<K>& spec) {
  return JacobianRing<K>::build(pq_polynomial(spec));
}

template <Scalar K>
JacobianRing<K> build_tij(const TijFamilySpec<K>& spec) {
  return JacobianRing<K>::build(tij_polynomial(spec));
}

// Adds seeded small perturbations to A until the member is transversal.
template <Scalar K>
std::pair<PQFamilySpec<K>, JacobianRing<K>> transversal_pq_member(PQFamilySpec<K> spec, Sampler& rng,
                                                                   int attempts = 50) {
  for (int t = 0; t < attempts; ++t) {
    try {
      auto ring = build_pq(spec);
      return {spec, ring};
    } catch (const NotTransversal&) {
      spec.A += rng.poly<K>(spec.field, spec.A.degree());
    }
  }
  throw InternalError("no transversal member found after perturbation");
}

template <Scalar K>
HPoly<K> xi(const PQFamilySpec<K>& spec) {
  spec.validate();
  const auto& f = spec.field;
  int s2 = spec.sigma[1], s3 = spec.sigma[2];
  auto z2 = HPoly<K>::variable(f, s2), z3 = HPoly<K>::variable(f, s3);
  K qk = f.from_int(spec.q), pk = f.from_int(spec.p);
  K w0 = spec.w.coefficient(Mono::variable(0));
  auto euler_a = qk * (z2 * spec.A.partial(s2)) - pk * (z3 * spec.A.partial(s3));
  auto euler_w = qk * (z2 * spec.w.partial(s2)) - pk * (z3 * spec.w.partial(s3));
  return w0 * euler_a - spec.A.partial(0) * euler_w;
}

// A + z1 dA/dz1 + z2 dA/dz2 + L dA/dz0
template <Scalar K>
HPoly<K> eta(const HPoly<K>& A, const HPoly<K>& L) {
  const auto& f = A.field();
  if (L.degree() != 1) throw DegreeMismatch("L must be linear");
  return A + HPoly<K>::variable(f, 1) * A.partial(1) + HPoly<K>::variable(f, 2) * A.partial(2) + L * A.partial(0);
}

template <Scalar K>
HPoly<K> kappa(const JacobianRing<K>& ring) {
  return ring.surface().partial(1);
}

// w P^(l-1) inside P^l.
template <Scalar K>
Subspace<K> multiples(const HPoly<K>& w, int l) {
  std::vector<HPoly<K>> gens;
  if (l >= w.degree())
    for (const auto& m : monomials(l - w.degree())) gens.push_back(w * HPoly<K>::monomial(w.field(), m));
  return Subspace<K>::span(w.field(), l, gens);
}

// w P^(d-1) + J_F^d
template <Scalar K>
Subspace<K> tangent_ideal(const JacobianRing<K>& ring, const HPoly<K>& w) {
  return multiples(w, ring.degree()).sum(ring.piece(ring.degree()));
}

template <Scalar K>
Subspace<K> tangent_ideal_pq(const JacobianRing<K>& ring, const PQFamilySpec<K>& spec) {
  return tangent_ideal(ring, spec.w);
}

template <Scalar K>
std::size_t family_codim(const JacobianRing<K>& ring, const PQFamilySpec<K>& spec) {
  return tangent_ideal_pq(ring, spec).quotient_dim();
}

struct TijCodim {
  std::size_t codim = 0;          // w varies with the member
  std::size_t fixed_w_codim = 0;  // w held fixed
  long parameter_count = 0;       // 2d - 1
  bool matches_parameter_count = false;
};

// Codimension of the image of the parametrization differential
// (A', w', B', c_i', c_j') -> w A' + w' A + z_i z_j B' + c_i' z_i^d + c_j' z_j^d.
template <Scalar K>
TijCodim family_codim(const TijFamilySpec<K>& spec) {
  spec.validate();
  const auto& f = spec.field;
  int d = spec.degree();
  auto zi = HPoly<K>::variable(f, spec.pair[0]), zj = HPoly<K>::variable(f, spec.pair[1]);
  std::vector<HPoly<K>> gens;
  for (const auto& m : monomials(d - 1)) gens.push_back(spec.w * HPoly<K>::monomial(f, m));
  for (const auto& m : monomials(d - 2)) gens.push_back(zi * zj * HPoly<K>::monomial(f, m));
  gens.push_back(zi.pow(d));
  gens.push_back(zj.pow(d));
  TijCodim out;
  out.fixed_w_codim = Subspace<K>::span(f, d, gens).quotient_dim();
  for (int k = 0; k < kVariables; ++k) gens.push_back(HPoly<K>::variable(f, k) * spec.A);
  out.codim = Subspace<K>::span(f, d, gens).quotient_dim();
  out.parameter_count = 2L * d - 1;
  out.matches_parameter_count = static_cast<long>(out.fixed_w_codim) == out.parameter_count;
  return out;
}

// {y in P^(d-1) : y x = 0 in R^(2d-1) for every x in S}, S inside P^d.
template <Scalar K>
Subspace<K> tangent_annihilator(const JacobianRing<K>& ring, const Subspace<K>& S) {
  int d = ring.degree();
  int top = 2 * d - 1;
  const auto& J = ring.piece(top);
  auto free = J.free_columns();
  std::vector<long> slot(monomial_count(top), -1);
  for (std::size_t i = 0; i < free.size(); ++i) slot[free[i]] = static_cast<long>(i);
  auto ys = monomials(d - 1);
  auto xs = S.basis_polys();
  std::vector<SparseRow<K>> rows(xs.size() * free.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    auto y = HPoly<K>::monomial(ring.field(), ys[j]);
    for (std::size_t b = 0; b < xs.size(); ++b) {
      auto nf = J.reduce_dense((xs[b] * y).dense());
      for (std::size_t c = 0; c < nf.size(); ++c)
        if (!nf[c].is_zero())
          rows[b * free.size() + static_cast<std::size_t>(slot[c])].emplace_back(static_cast<std::uint32_t>(j), nf[c]);
    }
  }
  return Subspace<K>::kernel(ring.field(), ys.size(), rows, d - 1);
}

template <Scalar K>
struct SigmaSpaceResult {
  Subspace<K> kernel;
  Subspace<K> expected;
  bool equal = false;
};

// Compares {y : y w in J_F^d} with span{omega_F, xi_F}.
template <Scalar K>
SigmaSpaceResult<K> sigma_space_check(const JacobianRing<K>& ring, const PQFamilySpec<K>& spec) {
  SigmaSpaceResult<K> out;
  out.kernel = mult_kernel(ring, spec.w);
  out.expected = Subspace<K>::span(ring.field(), ring.degree() - 1, {omega(ring), xi(spec)});
  out.equal = out.kernel == out.expected;
  return out;
}

// Element (gamma, L) of E_w = K^3 + P^1 / w.  L is the canonical lift
// supported away from the first variable of w.
template <Scalar K>
struct GammaDatum {
  std::array<K, 3> gamma;
  HPoly<K> L;
};

template <Scalar K>
struct GammaSpace {
  std::size_t dim_phi = 0;
  std::vector<GammaDatum<K>> basis;
};

namespace detail {

template <Scalar K>
int first_variable(const HPoly<K>& w) {
  for (int i = 0; i < kVariables; ++i)
    if (!w.coefficient(Mono::variable(i)).is_zero()) return i;
  throw PreconditionError("w is zero");
}

// Kernel of the linear map sending column j to images[j] modulo `sub`,
// as vectors in K^(images.size()).
template <Scalar K>
Subspace<K> kernel_modulo(const Subspace<K>& sub, const std::vector<HPoly<K>>& images) {
  const auto& f = sub.field();
  auto free = sub.free_columns();
  std::vector<long> slot(sub.ambient(), -1);
  for (std::size_t i = 0; i < free.size(); ++i) slot[free[i]] = static_cast<long>(i);
  std::vector<SparseRow<K>> rows(free.size());
  for (std::size_t j = 0; j < images.size(); ++j) {
    auto nf = sub.reduce_dense(images[j].dense());
    for (std::size_t c = 0; c < nf.size(); ++c)
      if (!nf[c].is_zero()) rows[static_cast<std::size_t>(slot[c])].emplace_back(static_cast<std::uint32_t>(j), nf[c]);
  }
  return Subspace<K>::kernel(f, images.size(), rows);
}

}  // namespace detail

template <Scalar K>
std::vector<int> lift_variables(const HPoly<K>& w) {
  int lead = detail::first_variable(w);
  std::vector<int> out;
  for (int i = 0; i < kVariables; ++i)
    if (i != lead) out.push_back(i);
  return out;
}

// Gamma = {(gamma, L) : sum gamma_i z_i dF/dz_i + L dF/dz0 in w P^(d-1)} and
// the dimension of the image of J_F^d in P^d / w P^(d-1).
template <Scalar K>
GammaSpace<K> gamma_space(const JacobianRing<K>& ring, const HPoly<K>& w) {
  if (w.degree() != 1 || w.is_zero()) throw DegreeMismatch("w must be a nonzero linear form");
  const auto& f = ring.field();
  const auto& F = ring.surface();
  int d = ring.degree();
  auto lift = lift_variables(w);
  std::vector<HPoly<K>> images;
  for (int i = 1; i <= 3; ++i) images.push_back(HPoly<K>::variable(f, i) * F.partial(i));
  for (int v : lift) images.push_back(HPoly<K>::variable(f, v) * F.partial(0));
  auto ker = detail::kernel_modulo(multiples(w, d), images);
  GammaSpace<K> out;
  out.dim_phi = images.size() - ker.dim();
  for (const auto& row : ker.rows()) {
    auto v = linalg::dense_from_sparse(row, images.size(), f);
    GammaDatum<K> g{{v[0], v[1], v[2]}, HPoly<K>(f, 1)};
    for (std::size_t k = 0; k < lift.size(); ++k) g.L.add_term(Mono::variable(lift[k]), v[3 + k]);
    out.basis.push_back(std::move(g));
  }
  return out;
}

// G -> sum gamma_i z_i dG/dz_i + L dG/dz0
template <Scalar K>
HPoly<K> euler_operator(const GammaDatum<K>& g, const HPoly<K>& G) {
  const auto& f = G.field();
  HPoly<K> out(f, G.degree());
  if (G.degree() == 0) return out;
  for (int i = 1; i <= 3; ++i)
    out += g.gamma[static_cast<std::size_t>(i - 1)] * (HPoly<K>::variable(f, i) * G.partial(i));
  out += g.L * G.partial(0);
  return out;
}

// {G in P^d : euler_operator(g, G) in w P^(d-1)}
template <Scalar K>
Subspace<K> euler_constraint_space(const HPoly<K>& w, const GammaDatum<K>& g, int d) {
  const auto& f = w.field();
  std::vector<HPoly<K>> images;
  auto mons = monomials(d);
  for (const auto& m : mons) images.push_back(euler_operator(g, HPoly<K>::monomial(f, m)));
  auto ker = detail::kernel_modulo(multiples(w, d), images);
  return Subspace<K>::span(f, mons.size(), ker.rows(), d);
}

template <Scalar K>
bool in_gamma(const JacobianRing<K>& ring, const HPoly<K>& w, const GammaDatum<K>& g) {
  return multiples(w, ring.degree()).contains(euler_operator(g, ring.surface()));
}

// Support of C on a line through a vertex of the exponent simplex:
// C = scale * prod_nu (z_s1^(p+q) - root_nu z_s2^p z_s3^q).
template <Scalar K>
struct SupportLine {
  std::array<int, 3> sigma{1, 2, 3};
  int p = 0;
  int q = 0;
  int r = 0;
  K scale{};
  BinaryForm<K> induced;  // sum_j b_j X^(r-j) Y^j
  BinaryFactorization<K> factors;
  std::optional<std::vector<K>> roots;  // present when the form splits
};

namespace detail {

template <Scalar K>
std::optional<SupportLine<K>> detect_support_line(const HPoly<K>& C) {
  int d = C.degree();
  for (int k = 1; k <= 3; ++k) {
    std::array<int, 2> rest{};
    int n = 0;
    for (int v = 1; v <= 3; ++v)
      if (v != k) rest[static_cast<std::size_t>(n++)] = v;
    int a = rest[0], b = rest[1];
    std::optional<Mono> far;
    bool has_vertex = false;
    for (const auto& [m, c] : C.terms()) {
      if (m[k] == 0) {
        if (far) goto next_vertex;
        far = m;
      }
      if (m[k] == d) has_vertex = true;
    }
    if (!far || !has_vertex) continue;
    {
      int x = (*far)[a], y = (*far)[b];
      int g = std::gcd(x, y);
      int p = x / g, q = y / g, r = g;
      std::array<int, 3> sigma{k, a, b};
      if (p == 0) {
        // binary form in z_k, z_b: canonical (1, 0) order
        std::swap(p, q);
        sigma = {k, b, a};
      }
      if (q == 0 && sigma[0] > sigma[1]) continue;
      for (const auto& [m, c] : C.terms()) {
        int drop = d - m[k];
        if (drop % (p + q)) goto next_vertex;
        int j = drop / (p + q);
        if (m[sigma[1]] != p * j || m[sigma[2]] != q * j) goto next_vertex;
      }
      SupportLine<K> out;
      out.sigma = sigma;
      out.p = p;
      out.q = q;
      out.r = r;
      out.induced = BinaryForm<K>(C.field(), {-1, -1}, r);
      for (int j = 0; j <= r; ++j) {
        Mono m;
        m.e[static_cast<std::size_t>(sigma[0])] = d - (p + q) * j;
        m.e[static_cast<std::size_t>(sigma[1])] = p * j;
        m.e[static_cast<std::size_t>(sigma[2])] = q * j;
        out.induced.coeffs[static_cast<std::size_t>(j)] = C.coefficient(m);
      }
      out.scale = out.induced.coeffs[0];
      out.factors = binary_factor(out.induced);
      std::vector<K> roots;
      bool split = true;
      for (const auto& [g1, mult] : out.factors.factors) {
        if (g1.degree != 1 || !g1.coeffs[0].is_one()) {
          split = false;
          break;
        }
        for (int t = 0; t < mult; ++t) roots.push_back(-g1.coeffs[1]);
      }
      if (split) out.roots = std::move(roots);
      return out;
    }
  next_vertex:;
  }
  return std::nullopt;
}

template <Scalar K>
bool divisible_by_variable(const HPoly<K>& C, int v) {
  if (C.is_zero()) return true;
  for (const auto& [m, c] : C.terms())
    if (m[v] == 0) return false;
  return true;
}

}  // namespace detail

template <Scalar K>
std::optional<SupportLine<K>> support_line_recover(const HPoly<K>& C, const std::array<K, 3>& gamma) {
  const auto& f = C.field();
  if (C.is_zero() || C.degree() < 1) throw PreconditionError("C must be a nonzero form of positive degree");
  for (const auto& [m, c] : C.terms())
    if (m[0] != 0) throw PreconditionError("C must not involve z0");
  for (int v = 1; v <= 3; ++v)
    if (detail::divisible_by_variable(C, v)) throw PreconditionError("C is divisible by z" + std::to_string(v));
  GammaDatum<K> g{gamma, HPoly<K>(f, 1)};
  if (!euler_operator(g, C).is_zero()) throw PreconditionError("gamma does not annihilate C");
  return detail::detect_support_line(C);
}

template <Scalar K>
struct Classification {
  SupportLine<K> line;
  K scale{};                            // F = scale * pq_polynomial(spec)
  HPoly<K> A;                           // F = w A + C, before rescaling
  std::optional<PQFamilySpec<K>> spec;  // present when the roots lie in the field
};

// Splits F = w A + C with C = F restricted to w = 0 in the chart
// z0 = -(a1 z1 + a2 z2 + a3 z3) / a0, then tests the support of C.
template <Scalar K>
std::optional<Classification<K>> classify_with_witness(const HPoly<K>& F, const HPoly<K>& w) {
  if (w.degree() != 1 || w.is_zero()) throw DegreeMismatch("w must be a nonzero linear form");
  const auto& f = F.field();
  K a0 = w.coefficient(Mono::variable(0));
  if (a0.is_zero()) return std::nullopt;
  std::array<HPoly<K>, kVariables> images;
  images[0] = HPoly<K>(f, 1);
  for (int i = 1; i < kVariables; ++i) {
    images[0].add_term(Mono::variable(i), -(w.coefficient(Mono::variable(i)) / a0));
    images[static_cast<std::size_t>(i)] = HPoly<K>::variable(f, i);
  }
  auto C = F.substitute(images);
  auto A = exact_divide(F - C, w);
  if (!A) throw InternalError("restriction to w = 0 did not split off a multiple of w");
  if (C.is_zero()) return std::nullopt;
  for (int v = 1; v <= 3; ++v)
    if (detail::divisible_by_variable(C, v)) return std::nullopt;
  auto line = detail::detect_support_line(C);
  if (!line) return std::nullopt;
  Classification<K> out;
  out.line = *line;
  out.scale = line->scale;
  out.A = *A;
  if (line->roots) {
    PQFamilySpec<K> spec;
    spec.field = f;
    spec.sigma = line->sigma;
    spec.p = line->p;
    spec.q = line->q;
    spec.r = line->r;
    spec.c = f.one();
    spec.cs = *line->roots;
    spec.w = w;
    spec.A = line->scale.inverse() * *A;
    if (!(line->scale * pq_polynomial(spec) == F)) throw InternalError("classification does not reassemble F");
    out.spec = std::move(spec);
  }
  return out;
}

// Kernel of G -> a G + ell dG/dz0 on span{z0^i u^(m-i)}; ell must lie in
// span{z0, u} and u must not involve z0.
template <Scalar K>
Subspace<K> euler_ode_kernel(const K& a, const HPoly<K>& ell, const HPoly<K>& u, int m) {
  const auto& f = u.field();
  if (u.degree() != 1 || ell.degree() != 1) throw DegreeMismatch("ell and u must be linear");
  if (!u.coefficient(Mono::variable(0)).is_zero() || u.is_zero()) throw PreconditionError("u must be nonzero and free of z0");
  // ell = e0 z0 + e1 u
  K e0 = ell.coefficient(Mono::variable(0));
  auto rest = ell - e0 * HPoly<K>::variable(f, 0);
  int lead = detail::first_variable(u);
  K e1 = rest.coefficient(Mono::variable(lead)) / u.coefficient(Mono::variable(lead));
  if (!(rest == e1 * u)) throw PreconditionError("ell must lie in span{z0, u}");
  // basis element i is z0^i u^(m-i); the operator sends it to
  // (a + i e0) z0^i u^(m-i) + i e1 z0^(i-1) u^(m-i+1)
  std::size_t n = static_cast<std::size_t>(m) + 1;
  std::vector<SparseRow<K>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    K diag = a + f.from_int(static_cast<long>(i)) * e0;
    if (!diag.is_zero()) rows[i].emplace_back(static_cast<std::uint32_t>(i), diag);
    if (i + 1 < n) {
      K sub = f.from_int(static_cast<long>(i + 1)) * e1;
      if (!sub.is_zero()) rows[i].emplace_back(static_cast<std::uint32_t>(i + 1), sub);
    }
  }
  auto ker = Subspace<K>::kernel(f, n, rows);
  auto z0 = HPoly<K>::variable(f, 0);
  std::vector<HPoly<K>> gens;
  for (const auto& row : ker.rows()) {
    HPoly<K> g(f, m);
    for (const auto& [i, c] : row) g += c * (z0.pow(static_cast<int>(i)) * u.pow(m - static_cast<int>(i)));
    gens.push_back(g);
  }
  return Subspace<K>::span(f, m, gens);
}

// Solves d B_nu - z0 dB_nu/dz0 + dB_(nu-1)/dz0 = 0 level by level with
// B_nu in span{z0^i u^(d-nu-i)}, normalized by B_0 = z0^d.
template <Scalar K>
std::vector<HPoly<K>> case_one_chain(const FieldOf<K>& f, int d, const HPoly<K>& u) {
  auto z0 = HPoly<K>::variable(f, 0);
  K dk = f.from_int(d);
  auto base = euler_ode_kernel(dk, -z0, u, d);
  if (base.dim() != 1) throw InternalError("level 0 of the chain is not one-dimensional");
  auto b0 = base.basis_polys().front();
  Mono top;
  top.e[0] = d;
  std::vector<HPoly<K>> out{b0.coefficient(top).inverse() * b0};
  for (int nu = 1; nu <= d; ++nu) {
    int m = d - nu;
    // right-hand side -dB_(nu-1)/dz0, expressed in the basis z0^i u^(m-i)
    auto rhs = -out.back().partial(0);
    HPoly<K> sol(f, m);
    HPoly<K> rem = rhs;
    // the operator is diagonal: z0^i u^(m-i) -> (d - i) z0^i u^(m-i)
    for (int i = m; i >= 0; --i) {
      auto basis = z0.pow(i) * u.pow(m - i);
      Mono lead;
      lead.e[0] = i;
      int uv = detail::first_variable(u);
      lead.e[static_cast<std::size_t>(uv)] += m - i;
      K coeff = rem.coefficient(lead) / basis.coefficient(lead);
      if (coeff.is_zero()) continue;
      sol += (coeff / f.from_int(d - i)) * basis;
      rem -= coeff * basis;
    }
    if (!rem.is_zero()) throw InternalError("chain right-hand side left the span");
    out.push_back(sol);
  }
  return out;
}

// Dimension of the image of S under z2 = z3 = 0.
template <Scalar K>
std::size_t binary_projection_dim(const Subspace<K>& S) {
  if (!S.degree()) throw PreconditionError("subspace has no polynomial degree");
  std::vector<SparseRow<K>> rows;
  for (const auto& g : S.basis_polys()) {
    auto b = restrict_line(g, 2, 3);
    SparseRow<K> r;
    for (std::size_t k = 0; k < b.coeffs.size(); ++k)
      if (!b.coeffs[k].is_zero()) r.emplace_back(static_cast<std::uint32_t>(k), b.coeffs[k]);
    rows.push_back(std::move(r));
  }
  return linalg::rank<K>(S.field(), static_cast<std::size_t>(*S.degree()) + 1, rows);
}

struct ThresholdResult {
  long floor = 0;
  bool t1 = false;
  bool t2 = false;
  bool t3 = false;
};

inline ThresholdResult threshold_check(int d) {
  ThresholdResult r;
  r.floor = binomial(d + 2, 2) - 5;
  long unit = 2L * d - 1;
  r.t1 = r.floor > unit;
  r.t2 = r.floor > 2 * unit;
  r.t3 = r.floor > 3 * unit;
  return r;
}

// Key-value text blocks, one "key = value" per line; '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value on line " + std::to_string(lineno), 0);
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

// Splits on commas outside parentheses.
inline std::vector<std::string> split_top_level(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

namespace detail {

inline const std::string& require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw PreconditionError("family block is missing key '" + key + "'");
  return it->second;
}

inline int parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PreconditionError("key '" + key + "' needs an integer, got '" + s + "'");
  }
}

}  // namespace detail

template <Scalar K>
PQFamilySpec<K> pq_from_block(const std::map<std::string, std::string>& kv, const FieldOf<K>& f) {
  PQFamilySpec<K> s;
  s.field = f;
  auto sig = split_top_level(detail::require_key(kv, "sigma"));
  if (sig.size() != 3) throw PreconditionError("sigma needs three entries");
  for (int i = 0; i < 3; ++i) s.sigma[static_cast<std::size_t>(i)] = detail::parse_int(sig[static_cast<std::size_t>(i)], "sigma");
  s.p = detail::parse_int(detail::require_key(kv, "p"), "p");
  s.q = detail::parse_int(detail::require_key(kv, "q"), "q");
  s.r = detail::parse_int(detail::require_key(kv, "r"), "r");
  s.c = parse_scalar<K>(detail::require_key(kv, "c"), f);
  for (const auto& t : split_top_level(detail::require_key(kv, "cs"))) s.cs.push_back(parse_scalar<K>(t, f));
  s.w = parse_poly<K>(detail::require_key(kv, "w"), f, 1);
  s.A = parse_poly<K>(detail::require_key(kv, "A"), f, s.degree() - 1);
  s.validate();
  return s;
}

template <Scalar K>
TijFamilySpec<K> tij_from_block(const std::map<std::string, std::string>& kv, const FieldOf<K>& f) {
  TijFamilySpec<K> s;
  s.field = f;
  const auto& pr = detail::require_key(kv, "pair");
  if (pr == "12") s.pair = {1, 2};
  else if (pr == "23") s.pair = {2, 3};
  else if (pr == "31") s.pair = {3, 1};
  else throw PreconditionError("pair must be 12, 23 or 31");
  s.w = parse_poly<K>(detail::require_key(kv, "w"), f, 1);
  s.A = parse_poly<K>(detail::require_key(kv, "A"), f);
  s.B = parse_poly<K>(detail::require_key(kv, "B"), f, s.A.degree() - 1);
  s.ci = parse_scalar<K>(detail::require_key(kv, "ci"), f);
  s.cj = parse_scalar<K>(detail::require_key(kv, "cj"), f);
  s.validate();
  return s;
}

// Scalar in the polynomial grammar, parenthesized when it has several terms.
template <Scalar K>
std::string scalar_text(const K& a) {
  return a.is_atomic() ? a.to_string() : "(" + a.to_string() + ")";
}

template <Scalar K>
std::string to_block(const PQFamilySpec<K>& s) {
  std::ostringstream out;
  out << "family = pq\nfield = " << s.field.name() << "\nsigma = " << s.sigma[0] << "," << s.sigma[1] << ","
      << s.sigma[2] << "\np = " << s.p << "\nq = " << s.q << "\nr = " << s.r << "\nc = " << scalar_text(s.c)
      << "\ncs = ";
  for (std::size_t i = 0; i < s.cs.size(); ++i) out << (i ? "," : "") << scalar_text(s.cs[i]);
  out << "\nw = " << s.w.to_string() << "\nA = " << s.A.to_string() << "\n";
  return out.str();
}

template <Scalar K>
std::string to_block(const TijFamilySpec<K>& s) {
  std::ostringstream out;
  out << "family = tij\nfield = " << s.field.name() << "\npair = " << s.pair[0] << s.pair[1]
      << "\nw = " << s.w.to_string() << "\nA = " << s.A.to_string() << "\nB = " << s.B.to_string()
      << "\nci = " << scalar_text(s.ci) << "\ncj = " << scalar_text(s.cj) << "\n";
  return out.str();
}

}  // namespace nlocus
