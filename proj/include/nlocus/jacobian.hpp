#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "nlocus/graded.hpp"

namespace nlocus {

// Quotient ring P / J_F for the twisted Jacobian ideal
// J_F = (dF/dz0, z1 dF/dz1, z2 dF/dz2, z3 dF/dz3) of a transversal surface.
// Graded pieces of J_F are computed on demand and cached.
template <Scalar K>
class JacobianRing {
 public:
  using field_type = FieldOf<K>;

  // Throws NotTransversal when (P/J_F) does not vanish in degree 4d-4.
  static JacobianRing build(const HPoly<K>& surface) {
    int d = surface.degree();
    if (d < 2) throw PreconditionError("surface degree must be at least 2");
    if (surface.is_zero()) throw PreconditionError("surface polynomial is zero");
    JacobianRing r;
    r.state_ = std::make_shared<State>();
    auto& s = *r.state_;
    s.surface = surface;
    s.ideal.field = surface.field();
    s.ideal.generators.push_back(surface.partial(0));
    for (int i = 1; i < kVariables; ++i) s.ideal.generators.push_back(HPoly<K>::variable(surface.field(), i) * surface.partial(i));
    int top = 4 * d - 4;
    if (nlocus::hilbert(s.ideal, top) != 0) throw NotTransversal(top);
    return r;
  }

  const HPoly<K>& surface() const { return state_->surface; }
  const field_type& field() const { return state_->surface.field(); }
  int degree() const { return state_->surface.degree(); }
  int socle_degree() const { return 4 * degree() - 5; }
  const IdealSpec<K>& ideal() const { return state_->ideal; }
  std::array<int, 4> generator_degrees() const { return {degree() - 1, degree(), degree(), degree()}; }

  // J_F in degree l.
  const Subspace<K>& piece(int l) const {
    std::lock_guard<std::mutex> lock(state_->mutex);
    auto it = state_->pieces.find(l);
    if (it == state_->pieces.end()) it = state_->pieces.emplace(l, ideal_piece(state_->ideal, l)).first;
    return it->second;
  }

  std::size_t hilbert(int l) const {
    if (l < 0 || l > socle_degree()) return 0;
    {
      std::lock_guard<std::mutex> lock(state_->mutex);
      auto it = state_->pieces.find(l);
      if (it != state_->pieces.end()) return it->second.quotient_dim();
      auto h = state_->hilbert.find(l);
      if (h != state_->hilbert.end()) return h->second;
    }
    std::size_t v = nlocus::hilbert(state_->ideal, l);
    std::lock_guard<std::mutex> lock(state_->mutex);
    state_->hilbert[l] = v;
    return v;
  }

  std::vector<std::size_t> hilbert_table() const {
    std::vector<std::size_t> out;
    for (int l = 0; l <= socle_degree(); ++l) out.push_back(hilbert(l));
    return out;
  }

  // Canonical representative of the class of x, supported on standard
  // monomials.
  HPoly<K> normal_form(const HPoly<K>& x) const {
    if (x.degree() > socle_degree()) return HPoly<K>(field(), x.degree());
    return piece(x.degree()).reduce(x);
  }

  // The trace functional on the socle degree: it vanishes on J_F and is 1
  // on the first standard monomial.
  const std::vector<K>& tau_vector() const {
    std::call_once(state_->tau_once, [this] {
      int n = socle_degree();
      const auto& J = piece(n);
      if (J.quotient_dim() != 1) throw InternalError("socle degree piece is not one-dimensional");
      auto free = J.free_columns();
      std::uint32_t s = free.front();
      std::vector<K> tau(monomial_count(n), field().zero());
      tau[s] = field().one();
      for (std::size_t i = 0; i < J.rows().size(); ++i) {
        for (const auto& [c, x] : J.rows()[i])
          if (c == s) tau[J.pivots()[i]] = -x;
      }
      state_->socle_monomial = monomials(n)[s];
      state_->tau = std::move(tau);
    });
    return state_->tau;
  }

  Mono socle_monomial() const {
    tau_vector();
    return state_->socle_monomial;
  }

  K tau(const HPoly<K>& x) const {
    if (x.degree() != socle_degree()) throw DegreeMismatch("tau is defined on the socle degree");
    const auto& t = tau_vector();
    K acc = field().zero();
    for (const auto& [m, c] : x.terms()) acc += c * t[monomial_index(m)];
    return acc;
  }

 private:
  struct State {
    HPoly<K> surface;
    IdealSpec<K> ideal;
    std::mutex mutex;
    std::map<int, Subspace<K>> pieces;
    std::map<int, std::size_t> hilbert;
    std::once_flag tau_once;
    std::vector<K> tau;
    Mono socle_monomial;
  };

  std::shared_ptr<State> state_;
};

template <Scalar K>
HPoly<K> omega(const JacobianRing<K>& ring) {
  return ring.surface().partial(0);
}

// Class of g * lambda in degree 2d-1, as its normal form.
template <Scalar K>
HPoly<K> tangent_pair(const JacobianRing<K>& ring, const HPoly<K>& g, const HPoly<K>& lambda) {
  return ring.normal_form(g * lambda);
}

// Rank of the trace pairing between standard monomials of degrees l and
// socle - l.
template <Scalar K>
std::size_t pairing_rank(const JacobianRing<K>& ring, int l) {
  int n = ring.socle_degree();
  if (l < 0 || l > n) return 0;
  const auto& tau = ring.tau_vector();
  auto left_mons = monomials(l), right_mons = monomials(n - l);
  auto left = ring.piece(l).free_columns();
  auto right = ring.piece(n - l).free_columns();
  std::vector<SparseRow<K>> rows;
  for (auto a : left) {
    SparseRow<K> r;
    for (std::size_t j = 0; j < right.size(); ++j) {
      const K& v = tau[monomial_index(left_mons[a] * right_mons[right[j]])];
      if (!v.is_zero()) r.emplace_back(static_cast<std::uint32_t>(j), v);
    }
    rows.push_back(std::move(r));
  }
  return linalg::rank<K>(ring.field(), right.size(), rows);
}

template <Scalar K>
bool pairing_perfect(const JacobianRing<K>& ring, int l) {
  int n = ring.socle_degree();
  std::size_t h = ring.hilbert(l);
  return h == ring.hilbert(n - l) && pairing_rank(ring, l) == h;
}

// lambda* on P^(socle - deg lambda): m -> tau(lambda m).
template <Scalar K>
std::vector<K> dual_functional(const JacobianRing<K>& ring, const HPoly<K>& lambda) {
  int top = ring.socle_degree() - lambda.degree();
  if (top < 0) throw DegreeMismatch("lambda degree exceeds the socle degree");
  const auto& tau = ring.tau_vector();
  auto mons = monomials(top);
  std::vector<K> out(mons.size(), ring.field().zero());
  bool any = false;
  for (std::size_t k = 0; k < mons.size(); ++k) {
    for (const auto& [t, c] : lambda.terms()) out[k] += c * tau[monomial_index(t * mons[k])];
    any = any || !out[k].is_zero();
  }
  if (!any) throw Degenerate("lambda lies in the Jacobian ideal");
  return out;
}

// Degree-l piece of the annihilator ideal of lambda*: all of P^l above
// socle - deg lambda.
template <Scalar K>
Subspace<K> annihilator_piece(const JacobianRing<K>& ring, const HPoly<K>& lambda, int l) {
  if (l < 0) throw DegreeMismatch("negative degree");
  auto star = dual_functional(ring, lambda);
  int top = ring.socle_degree() - lambda.degree();
  if (l > top) return Subspace<K>::full_degree(ring.field(), l);
  auto xs = monomials(l), ys = monomials(top - l);
  std::vector<SparseRow<K>> rows;
  rows.reserve(ys.size());
  for (const auto& y : ys) {
    SparseRow<K> r;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const K& v = star[monomial_index(xs[j] * y)];
      if (!v.is_zero()) r.emplace_back(static_cast<std::uint32_t>(j), v);
    }
    rows.push_back(std::move(r));
  }
  return Subspace<K>::kernel(ring.field(), xs.size(), rows, l);
}

// {y in P^(target - deg w) : w y in J_F}
template <Scalar K>
Subspace<K> mult_kernel(const JacobianRing<K>& ring, const HPoly<K>& w, std::optional<int> target = std::nullopt) {
  int t = target.value_or(ring.degree());
  int l = t - w.degree();
  if (l < 0) throw DegreeMismatch("multiplier degree exceeds target degree");
  const auto& J = ring.piece(t);
  auto free = J.free_columns();
  std::vector<long> row_of(monomial_count(t), -1);
  for (std::size_t i = 0; i < free.size(); ++i) row_of[free[i]] = static_cast<long>(i);
  auto ys = monomials(l);
  std::vector<SparseRow<K>> rows(free.size());
  for (std::size_t j = 0; j < ys.size(); ++j) {
    auto nf = J.reduce_dense((w * HPoly<K>::monomial(ring.field(), ys[j])).dense());
    for (std::size_t c = 0; c < nf.size(); ++c)
      if (!nf[c].is_zero()) rows[static_cast<std::size_t>(row_of[c])].emplace_back(static_cast<std::uint32_t>(j), nf[c]);
  }
  return Subspace<K>::kernel(ring.field(), ys.size(), rows, l);
}

struct Th31Result {
  std::size_t quotient_dim = 0;
  long expected = 0;
  bool equality = false;
  bool ci_certified = false;
};

template <Scalar K>
Th31Result th31_check(const JacobianRing<K>& ring, const HPoly<K>& lambda) {
  int d = ring.degree();
  Th31Result r;
  r.quotient_dim = annihilator_piece(ring, lambda, d).quotient_dim();
  r.expected = binomial(d + 2, 2) - 5;
  r.equality = static_cast<long>(r.quotient_dim) == r.expected;
  if (r.equality) {
    std::array<int, 4> e{1, d - 1, d, d};
    r.ci_certified = is_complete_intersection(e, [&](int l) { return annihilator_piece(ring, lambda, l).quotient_dim(); });
  }
  return r;
}

struct OtwinowskaResult {
  std::size_t lhs = 0;
  long rhs = 0;
  bool holds = false;
};

template <Scalar K>
OtwinowskaResult otwinowska_check(const JacobianRing<K>& ring, const HPoly<K>& lambda, int l) {
  int d = ring.degree();
  OtwinowskaResult r;
  r.lhs = annihilator_piece(ring, lambda, l).quotient_dim();
  r.rhs = monomial_quotient_count({1, d - 1, d, d}, l);
  r.holds = static_cast<long>(r.lhs) >= r.rhs;
  return r;
}

}  // namespace nlocus
