#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "nlocus/core/parse.hpp"
#include "nlocus/cycles.hpp"
#include "nlocus/families.hpp"
#include "nlocus/jacobian.hpp"
#include "nlocus/residues.hpp"

// The verification suite behind `paper-check` and the acceptance binary.
// Each criterion produces named checks; exceptions are caught per criterion.

namespace nlocus::checks {

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct Criterion {
  int id = 0;
  std::string title;
  double budget_seconds = 0;
  bool enforce_budget = true;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::optional<std::string> error;
  double seconds = 0;

  bool within_budget() const { return !enforce_budget || seconds < budget_seconds; }
  bool checks_pass() const {
    return !error && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  bool pass() const { return checks_pass() && within_budget(); }
};

struct SuiteConfig {
  std::uint64_t seed = 42;
  int d = 4;
  mpfr_prec_t precision = 128;
};

// Every rank or dimension computed by criteria 1-5, keyed by role.
using Profile = std::map<std::string, long>;

namespace detail {

class Recorder {
 public:
  explicit Recorder(Criterion& c) : c_(c) {}

  void equal(const std::string& name, long expected, long actual) {
    c_.checks.push_back({name, std::to_string(expected), std::to_string(actual), expected == actual});
  }
  void equal(const std::string& name, const std::string& expected, const std::string& actual) {
    c_.checks.push_back({name, expected, actual, expected == actual});
  }
  void truth(const std::string& name, bool expected, bool actual) {
    c_.checks.push_back({name, expected ? "true" : "false", actual ? "true" : "false", expected == actual});
  }
  void at_least(const std::string& name, long floor, long actual) {
    c_.checks.push_back({name, ">= " + std::to_string(floor), std::to_string(actual), actual >= floor});
  }
  void raw(Check c) { c_.checks.push_back(std::move(c)); }
  void note(std::string s) { c_.notes.push_back(std::move(s)); }

 private:
  Criterion& c_;
};

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <class T>
std::string join(const std::vector<T>& xs, const std::string& sep = ",") {
  std::ostringstream out;
  for (std::size_t k = 0; k < xs.size(); ++k) out << (k ? sep : "") << xs[k];
  return out.str();
}

template <Scalar K>
HPoly<K> fermat(const FieldOf<K>& f, int d) {
  HPoly<K> out(f, d);
  for (int v = 0; v < kVariables; ++v) out += HPoly<K>::variable(f, v).pow(d);
  return out;
}

// Candidate k of a stream: a fixed polynomial for a fixed seed, whatever the field.
template <Scalar K>
HPoly<K> candidate(const FieldOf<K>& f, std::uint64_t seed, std::uint64_t stream, int k, int degree, int density = 100) {
  Sampler rng(mix(mix(seed, stream), static_cast<std::uint64_t>(k)));
  return rng.nonzero_poly<K>(f, degree, density);
}

// Indices of the first `count` transversal candidates over Q.
inline std::vector<int> transversal_indices(std::uint64_t seed, std::uint64_t stream, int d, int count) {
  static std::map<std::tuple<std::uint64_t, std::uint64_t, int, int>, std::vector<int>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::tuple{seed, stream, d, count};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  RationalField QQ;
  std::vector<int> out;
  for (int k = 0; static_cast<int>(out.size()) < count; ++k) {
    if (k > 50 * count) throw InternalError("too few transversal candidates");
    try {
      JacobianRing<Rational>::build(candidate<Rational>(QQ, seed, stream, k, d));
      out.push_back(k);
    } catch (const NotTransversal&) {
    }
  }
  cache.emplace(key, out);
  return out;
}

constexpr std::uint64_t kSurfaceStream = 1;
constexpr std::uint64_t kCertificateStream = 2;
constexpr std::uint64_t kLambdaStream = 3;
constexpr std::uint64_t kMemberStream = 4;
constexpr std::uint64_t kResidueStream = 5;
constexpr std::uint64_t kClassifyStream = 6;
constexpr std::uint64_t kCycleStream = 7;
constexpr std::uint64_t kPrimeStream = 8;

// The surface whose lambdas feed criteria 3 and 5: the first transversal candidate.
template <Scalar K>
JacobianRing<K> lambda_surface(const FieldOf<K>& f, const SuiteConfig& cfg) {
  int k = transversal_indices(cfg.seed, kSurfaceStream, cfg.d, 1).front();
  return JacobianRing<K>::build(candidate<K>(f, cfg.seed, kSurfaceStream, k, cfg.d));
}

// Indices of 25 degree d-1 forms outside J_F^(d-1) on the lambda surface, decided over Q.
inline std::vector<int> lambda_indices(const SuiteConfig& cfg) {
  static std::map<std::pair<std::uint64_t, int>, std::vector<int>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::pair{cfg.seed, cfg.d};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  RationalField QQ;
  auto R = lambda_surface<Rational>(QQ, cfg);
  std::vector<int> out;
  for (int k = 0; out.size() < 25; ++k) {
    // sparse forms mix monomial-like and generic lambdas
    auto lam = candidate<Rational>(QQ, cfg.seed, kLambdaStream, k, cfg.d - 1, k % 3 == 0 ? 30 : 100);
    if (!R.piece(cfg.d - 1).contains(lam)) out.push_back(k);
  }
  cache.emplace(key, out);
  return out;
}

template <Scalar K>
HPoly<K> lambda_form(const FieldOf<K>& f, const SuiteConfig& cfg, int k) {
  return candidate<K>(f, cfg.seed, kLambdaStream, k, cfg.d - 1, k % 3 == 0 ? 30 : 100);
}

template <Scalar K>
std::vector<K> from_ints(const FieldOf<K>& f, const std::vector<long>& xs) {
  std::vector<K> out;
  for (long x : xs) out.push_back(f.from_int(x));
  return out;
}

// The equality-case member: (1,1) with roots (1,-1) for even d; (1,0) with
// roots 1,-1,2,-2,... otherwise.
template <Scalar K>
PQFamilySpec<K> equality_member_spec(const FieldOf<K>& f, int d) {
  PQFamilySpec<K> s;
  s.field = f;
  s.sigma = {1, 2, 3};
  s.c = f.one();
  if (d % 2 == 0) {
    s.p = 1, s.q = 1, s.r = d / 2;
  } else {
    s.p = 1, s.q = 0, s.r = d;
  }
  std::vector<long> roots;
  for (int k = 1; static_cast<int>(roots.size()) < s.r; ++k) {
    roots.push_back(k);
    if (static_cast<int>(roots.size()) < s.r) roots.push_back(-k);
  }
  s.cs = from_ints<K>(f, roots);
  s.w = HPoly<K>::variable(f, 0);
  s.A = fermat<K>(f, d - 1);
  return s;
}

template <Scalar K>
std::pair<PQFamilySpec<K>, JacobianRing<K>> equality_member(const FieldOf<K>& f, const SuiteConfig& cfg) {
  Sampler rng(mix(cfg.seed, kMemberStream));
  return transversal_pq_member(equality_member_spec<K>(f, cfg.d), rng);
}

// Divisors of the complementary monomial socle / lambda of degree d: the
// quotient of the annihilator of a monomial functional on Fermat.
inline long monomial_annihilator_oracle(int d, const Mono& lambda) {
  std::array<int, 4> top{d - 2, d - 1, d - 1, d - 1};
  std::array<int, 4> mu{};
  for (int v = 0; v < 4; ++v) mu[v] = top[v] - lambda[v];
  long count = 0;
  for (int a = 0; a <= mu[0]; ++a)
    for (int b = 0; b <= mu[1]; ++b)
      for (int c = 0; c <= mu[2]; ++c) {
        int e = d - a - b - c;
        if (e >= 0 && e <= mu[3]) ++count;
      }
  return count;
}

template <Scalar K>
std::string field_tag(const FieldOf<K>& f) {
  if constexpr (is_modp_v<K>) return " [modular evidence " + f.name() + "]";
  else return "";
}

}  // namespace detail

// 1. Perfect pairing and the complete-intersection Hilbert table.
template <Scalar K>
void duality_suite(const FieldOf<K>& f, const SuiteConfig& cfg, Criterion& out, Profile& profile) {
  detail::Recorder rec(out);
  int d = cfg.d, socle = 4 * d - 5;
  std::array<int, 4> degs{d - 1, d, d, d};
  std::vector<long> expected;
  for (int l = 0; l <= socle; ++l) expected.push_back(ci_series_coeff(degs, l));
  std::vector<std::pair<std::string, HPoly<K>>> surfaces{{"fermat", detail::fermat<K>(f, d)}};
  auto idx = detail::transversal_indices(cfg.seed, detail::kSurfaceStream, d, 3);
  for (std::size_t k = 0; k < idx.size(); ++k)
    surfaces.emplace_back("random" + std::to_string(k + 1), detail::candidate<K>(f, cfg.seed, detail::kSurfaceStream, idx[k], d));
  for (const auto& [name, F] : surfaces) {
    auto R = JacobianRing<K>::build(F);
    std::vector<long> table;
    std::vector<int> imperfect;
    for (int l = 0; l <= socle; ++l) {
      table.push_back(static_cast<long>(R.hilbert(l)));
      long rank = static_cast<long>(pairing_rank(R, l));
      profile["c1." + name + ".hilbert." + std::to_string(l)] = table.back();
      profile["c1." + name + ".pairing_rank." + std::to_string(l)] = rank;
      if (!pairing_perfect(R, l)) imperfect.push_back(l);
    }
    rec.equal(name + ": hilbert table" + detail::field_tag<K>(f), "(" + detail::join(expected) + ")", "(" + detail::join(table) + ")");
    rec.equal(name + ": degrees with imperfect pairing", "none", imperfect.empty() ? "none" : detail::join(imperfect));
  }
}

// 2. Transversality certificate in degree 4d-4.
template <Scalar K>
void transversality_suite(const FieldOf<K>& f, const SuiteConfig& cfg, Criterion& out, Profile& profile) {
  detail::Recorder rec(out);
  int d = cfg.d, top = 4 * d - 4;
  auto certificate = [&](const HPoly<K>& F) {
    IdealSpec<K> J;
    J.field = f;
    J.generators.push_back(F.partial(0));
    for (int v = 1; v < kVariables; ++v) J.generators.push_back(HPoly<K>::variable(f, v) * F.partial(v));
    return static_cast<long>(hilbert(J, top));
  };
  bool fermat_ok = true;
  try {
    JacobianRing<K>::build(detail::fermat<K>(f, d));
  } catch (const NotTransversal&) {
    fermat_ok = false;
  }
  rec.truth("fermat is transversal" + detail::field_tag<K>(f), true, fermat_ok);
  bool power_rejected = false;
  try {
    JacobianRing<K>::build(HPoly<K>::variable(f, 0).pow(d));
  } catch (const NotTransversal&) {
    power_rejected = true;
  }
  rec.truth("z0^d is rejected", true, power_rejected);
  long zero = 0, positive = 0, crashes = 0;
  for (int k = 0; k < 100; ++k) {
    // a quarter sparse, so both verdicts occur
    int density = k % 4 == 0 ? 25 : 100;
    try {
      long h = certificate(detail::candidate<K>(f, cfg.seed, detail::kCertificateStream, k, d, density));
      profile["c2.sample" + std::to_string(k) + ".hilbert_top"] = h;
      (h == 0 ? zero : positive) += 1;
    } catch (const std::exception& e) {
      ++crashes;
      rec.note("sample " + std::to_string(k) + ": " + e.what());
    }
  }
  rec.equal("random surfaces classified", 100, zero + positive);
  rec.equal("crashes", 0, crashes);
  rec.note("transversal " + std::to_string(zero) + ", not transversal " + std::to_string(positive));
}

// 3. Annihilator floor in degree d.
template <Scalar K>
void annihilator_suite(const FieldOf<K>& f, const SuiteConfig& cfg, Criterion& out, Profile& profile) {
  detail::Recorder rec(out);
  int d = cfg.d;
  long floor = binomial(d + 2, 2) - 5;
  auto fermat_ring = JacobianRing<K>::build(detail::fermat<K>(f, d));
  Mono mono;
  mono.e = {1, 1, 1, d - 4};
  auto lam = HPoly<K>::monomial(f, mono);
  long monomial_dim = static_cast<long>(annihilator_piece(fermat_ring, lam, d).quotient_dim());
  profile["c3.fermat_monomial"] = monomial_dim;
  if (d == 4) rec.equal("fermat, lambda = z0 z1 z2" + detail::field_tag<K>(f), 16, monomial_dim);
  else rec.equal("fermat, lambda = z0 z1 z2 z3^(d-4)" + detail::field_tag<K>(f), detail::monomial_annihilator_oracle(d, mono), monomial_dim);
  auto R = detail::lambda_surface<K>(f, cfg);
  std::vector<long> dims;
  long worst = -1;
  for (int k : detail::lambda_indices(cfg)) {
    long q = static_cast<long>(annihilator_piece(R, detail::lambda_form<K>(f, cfg, k), d).quotient_dim());
    profile["c3.lambda" + std::to_string(k)] = q;
    dims.push_back(q);
    worst = worst < 0 ? q : std::min(worst, q);
  }
  rec.equal("lambdas outside span(omega)", 25, static_cast<long>(dims.size()));
  rec.at_least("smallest quotient over 25 lambdas", floor, worst);
  rec.note("quotient dimensions: " + detail::join(dims));
}

// 4. The equality case on a family member.
template <Scalar K>
void equality_suite(const FieldOf<K>& f, const SuiteConfig& cfg, Criterion& out, Profile& profile) {
  detail::Recorder rec(out);
  int d = cfg.d;
  auto [spec, R] = detail::equality_member<K>(f, cfg);
  if (!(spec.A == detail::fermat<K>(f, d - 1))) rec.note("A perturbed to " + spec.A.to_string());
  auto kernel = mult_kernel(R, spec.w);
  auto sigma = sigma_space_check(R, spec);
  long codim = static_cast<long>(family_codim(R, spec));
  auto th = th31_check(R, xi(spec));
  profile["c4.mult_kernel"] = static_cast<long>(kernel.dim());
  profile["c4.codim"] = codim;
  profile["c4.th31"] = static_cast<long>(th.quotient_dim);
  rec.equal("mult_kernel dimension" + detail::field_tag<K>(f), 2, static_cast<long>(kernel.dim()));
  rec.truth("kernel equals span(omega, xi)", true, sigma.equal);
  rec.equal("dim P^d / (w P^(d-1) + J^d)", binomial(d + 2, 2) - 5, codim);
  rec.truth("annihilator of xi attains the floor", true, th.equality);
  rec.truth("annihilator of xi is a complete intersection (1,d-1,d,d)", true, th.ci_certified);
}

// 5. Monomial lower bound for every degree 1..2d.
template <Scalar K>
void otwinowska_suite(const FieldOf<K>& f, const SuiteConfig& cfg, Criterion& out, Profile& profile) {
  detail::Recorder rec(out);
  int d = cfg.d;
  auto R = detail::lambda_surface<K>(f, cfg);
  long failures = 0;
  std::vector<std::string> bad;
  for (int k : detail::lambda_indices(cfg)) {
    auto lam = detail::lambda_form<K>(f, cfg, k);
    for (int l = 1; l <= 2 * d; ++l) {
      auto r = otwinowska_check(R, lam, l);
      profile["c5.lambda" + std::to_string(k) + ".degree" + std::to_string(l)] = static_cast<long>(r.lhs);
      if (!r.holds) {
        ++failures;
        bad.push_back("lambda " + std::to_string(k) + " l=" + std::to_string(l));
      }
    }
  }
  rec.equal("violations over 25 lambdas and l = 1.." + std::to_string(2 * d) + detail::field_tag<K>(f), "none",
            bad.empty() ? "none" : detail::join(bad, "; "));
}

// 6. Residue constants and the value polynomial against the numeric oracle.
inline void residue_suite(const SuiteConfig& cfg, Criterion& out) {
  detail::Recorder rec(out);
  RationalField QQ;
  const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {2, 3}, {3, 1}}};
  auto idx = detail::transversal_indices(cfg.seed, detail::kResidueStream, 4, 5);
  std::vector<std::string> off;
  for (int k : idx) {
    auto F = detail::candidate<Rational>(QQ, cfg.seed, detail::kResidueStream, k, 4);
    for (auto [i, j] : pairs) {
      auto c = delta_constant_certificate(F, F.partial(0), i, j);
      if (!c || !(*c == Rational(-1)))
        off.push_back("surface " + std::to_string(k) + " pair " + std::to_string(i) + std::to_string(j));
    }
  }
  rec.equal("omega constant -1 on all pairs of 5 surfaces", "all", off.empty() ? "all" : "fails at " + detail::join(off, "; "));

  auto linear = detail::equality_member_spec<Rational>(QQ, 5);
  linear.r = 4;
  linear.cs = {Rational(1), Rational(2), Rational(-1), Rational(3)};
  linear.A = detail::fermat<Rational>(QQ, 3);
  Sampler rng(detail::mix(cfg.seed, detail::kResidueStream + 100));
  auto [lspec, lring] = transversal_pq_member(linear, rng);
  for (auto [i, j] : {std::pair{2, 3}, std::pair{3, 1}}) {
    auto c = delta_constant_certificate(lring.surface(), xi(lspec), i, j);
    rec.equal("(1,0) member, xi on pair " + std::to_string(i) + std::to_string(j), "0", c ? c->to_string() : "not constant");
  }

  SuiteConfig four = cfg;
  four.d = 4;
  auto [spec, R] = detail::equality_member<Rational>(QQ, four);
  auto x = xi(spec);
  auto rep = residue_report(R, x, 1, 2);
  auto num = numeric_delta(R, x, 1, 2, cfg.precision);
  double gap = numeric_polynomial_gap(num, rep.values, cfg.precision);
  double worst = 0;
  bool matched = true;
  if (rep.roots) {
    auto exact = *rep.roots;
    for (const auto& v : num) {
      auto best = exact.end();
      double g = INFINITY;
      for (auto it = exact.begin(); it != exact.end(); ++it) {
        double e = (v.value - numeric::embed(*it, cfg.precision)).magnitude();
        if (e < g) g = e, best = it;
      }
      if (best == exact.end()) {
        matched = false;
        break;
      }
      worst = std::max(worst, g);
      exact.erase(best);
    }
    std::vector<std::string> shown;
    long shifted = 0;
    Rational generic(-spec.p);
    for (const auto& r : *rep.roots) {
      shown.push_back(r.to_string());
      if (!(r == generic)) ++shifted;
    }
    std::sort(shown.begin(), shown.end());
    rec.note("(1,2) residue values {" + detail::join(shown) + "}; " + std::to_string(shifted) +
             " value(s) differ from the constant -p = " + generic.to_string() +
             " at the point where w meets the line (shift by (p+q) ord(w))");
  } else {
    worst = gap;
    rec.note("(1,2) value polynomial does not split over Q; compared by coefficients");
  }
  std::ostringstream act;
  act.precision(3);
  act << worst;
  rec.raw({"(1,1) member, (1,2) root multiset vs numeric oracle at " + std::to_string(cfg.precision) + " bits", "<= 1e-25",
           matched ? act.str() : "unmatched", matched && worst <= 1e-25});
  std::ostringstream g;
  g.precision(3);
  g << gap;
  rec.raw({"(1,2) value polynomial coefficients vs numeric product", "<= 1e-25", g.str(), gap <= 1e-25});
}

namespace detail {

inline PQFamilySpec<Rational> random_pq_spec(Sampler& rng, int p, int q, int d) {
  RationalField QQ;
  PQFamilySpec<Rational> s;
  s.field = QQ;
  s.p = p;
  s.q = q;
  s.r = d / (p + q);
  // canonical sigma choices: the first slot carries the single-power term
  std::vector<std::array<int, 3>> perms;
  if (q == 0) perms = {{1, 2, 3}, {1, 3, 2}, {2, 3, 1}};
  else perms = {{1, 2, 3}, {2, 1, 3}, {3, 1, 2}};
  s.sigma = perms[static_cast<std::size_t>(rng.below(3))];
  s.c = Rational(1);
  std::vector<long> used;
  while (static_cast<int>(s.cs.size()) < s.r) {
    long v = rng.nonzero_coefficient();
    if (std::find(used.begin(), used.end(), v) != used.end()) continue;
    used.push_back(v);
    s.cs.push_back(Rational(v));
  }
  auto z0 = HPoly<Rational>::variable(QQ, 0);
  do s.w = z0 + rng.poly<Rational>(QQ, 1, 50);
  while (s.w.coefficient(Mono::variable(0)).is_zero());
  s.A = rng.poly<Rational>(QQ, d - 1);
  return s;
}

// Both multisets agree after scaling one of them.
inline bool same_up_to_scale(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.size() != b.size() || a.empty()) return a.size() == b.size();
  auto key = [](std::vector<Rational> v) {
    std::vector<std::string> s;
    for (auto& x : v) s.push_back(x.to_string());
    std::sort(s.begin(), s.end());
    return s;
  };
  for (const auto& x : b) {
    std::vector<Rational> scaled;
    for (const auto& y : b) scaled.push_back(y * (a.front() / x));
    if (key(scaled) == key(a)) return true;
  }
  return false;
}

}  // namespace detail

// 7. Classification round trip.
inline void classification_suite(const SuiteConfig& cfg, Criterion& out) {
  detail::Recorder rec(out);
  RationalField QQ;
  Sampler rng(detail::mix(cfg.seed, detail::kClassifyStream));
  const std::vector<std::array<int, 3>> shapes{{1, 0, 4}, {1, 0, 6}, {1, 1, 4}, {1, 1, 6}, {2, 1, 6}};
  int member = 0;
  for (const auto& [p, q, d] : shapes) {
    for (int t = 0; t < 2; ++t, ++member) {
      auto spec = detail::random_pq_spec(rng, p, q, d);
      auto F = pq_polynomial(spec);
      auto got = classify_with_witness(F, spec.w);
      std::ostringstream expected, actual;
      expected << "sigma=" << spec.sigma[0] << spec.sigma[1] << spec.sigma[2] << " p=" << p << " q=" << q << " r=" << spec.r;
      bool ok = false;
      if (!got) actual << "none";
      else if (!got->spec) actual << "roots outside the field";
      else {
        const auto& s = *got->spec;
        actual << "sigma=" << s.sigma[0] << s.sigma[1] << s.sigma[2] << " p=" << s.p << " q=" << s.q << " r=" << s.r;
        bool roots = detail::same_up_to_scale(s.cs, spec.cs);
        bool rebuilt = got->scale * pq_polynomial(s) == F;
        if (!roots) actual << " roots differ";
        if (!rebuilt) actual << " rebuild differs";
        ok = actual.str() == expected.str();
      }
      rec.raw({"member " + std::to_string(member + 1) + " (p,q,d)=(" + std::to_string(p) + "," + std::to_string(q) + "," +
                   std::to_string(d) + ")",
               expected.str(), actual.str(), ok});
    }
  }
  auto fermat = detail::fermat<Rational>(QQ, 4);
  bool none = !classify_with_witness(fermat, HPoly<Rational>::variable(QQ, 0));
  rec.truth("fermat with w = z0 is not classified", true, none);
}

// 8. Kernels of a G + ell dG/dz0 and the chained system.
inline void operator_suite(const SuiteConfig&, Criterion& out) {
  detail::Recorder rec(out);
  RationalField QQ;
  auto z0 = HPoly<Rational>::variable(QQ, 0);
  auto L = parse_poly<Rational>("z1+2*z2", QQ);
  auto ell = L - z0;
  std::vector<std::string> top_failures, other_nonzero, other_unexpected;
  for (int m = 0; m <= 6; ++m) {
    auto k = euler_ode_kernel(Rational(m), ell, L, m);
    if (k.dim() != 1 || !k.contains(ell.pow(m))) top_failures.push_back("m=" + std::to_string(m));
    // below m the kernel holds (L - z0)^a L^(m-a)
    for (int a = 0; a < m; ++a) {
      auto ka = euler_ode_kernel(Rational(a), ell, L, m);
      if (ka.dim() != 0) other_nonzero.push_back("m=" + std::to_string(m) + ",a=" + std::to_string(a));
      if (ka.dim() != 1 || !ka.contains(ell.pow(a) * L.pow(m - a))) other_unexpected.push_back("m=" + std::to_string(m) + ",a=" + std::to_string(a));
    }
    for (auto a : {Rational(m + 1), Rational(-1), Rational(mpq_class(1, 2))}) {
      auto ka = euler_ode_kernel(a, ell, L, m);
      if (ka.dim() != 0) other_nonzero.push_back("m=" + std::to_string(m) + ",a=" + a.to_string());
    }
  }
  rec.equal("a = m: dimension 1 spanned by (L - z0)^m, m = 0..6", "all", top_failures.empty() ? "all" : "fails at " + detail::join(top_failures, " "));
  rec.equal("a != m: dimension 0", "none nonzero", other_nonzero.empty() ? "none nonzero" : "dimension 1 at " + detail::join(other_nonzero, " "));
  if (other_unexpected.empty())
    rec.note("for integer 0 <= a < m the kernel is spanned by (L - z0)^a L^(m-a); it vanishes only for a outside 0..m");
  else
    rec.note("unexpected kernels at " + detail::join(other_unexpected, " "));
  auto u = HPoly<Rational>::variable(QQ, 1);
  auto Lc = parse_poly<Rational>("z2-3*z3", QQ);
  std::vector<int> bad;
  for (int d = 4; d <= 6; ++d) {
    auto chain = case_one_chain<Rational>(QQ, d, u);
    HPoly<Rational> total(QQ, d);
    for (int nu = 0; nu <= d && nu < static_cast<int>(chain.size()); ++nu) total += Lc.pow(nu) * chain[static_cast<std::size_t>(nu)];
    if (static_cast<int>(chain.size()) != d + 1 || !(total == (z0 - Lc).pow(d))) bad.push_back(d);
  }
  rec.equal("chained system reproduces (z0 - L)^d, d = 4..6", "all", bad.empty() ? "all" : "fails at d=" + detail::join(bad));
}

// 9. Threshold arithmetic.
inline void threshold_suite(const SuiteConfig&, Criterion& out) {
  detail::Recorder rec(out);
  auto first_true = [](auto pick) {
    for (int d = 1; d <= 64; ++d)
      if (pick(threshold_check(d))) return d;
    return -1;
  };
  auto t1 = first_true([](const ThresholdResult& r) { return r.t1; });
  auto t2 = first_true([](const ThresholdResult& r) { return r.t2; });
  auto t3 = first_true([](const ThresholdResult& r) { return r.t3; });
  rec.equal("first d with t1", 4, t1);
  rec.equal("first d with t2", 6, t2);
  rec.equal("first d with t3", 10, t3);
  rec.truth("t1 at d = 3", false, threshold_check(3).t1);
  rec.truth("t2 at d = 5", false, threshold_check(5).t2);
  rec.truth("t3 at d = 9", false, threshold_check(9).t3);
  // the thresholds stay true once reached
  bool monotone = true;
  for (int d = 4; d <= 40; ++d) {
    auto r = threshold_check(d);
    monotone = monotone && r.t1 && (d < 6 || r.t2) && (d < 10 || r.t3);
  }
  rec.truth("thresholds stay true up to d = 40", true, monotone);
}

namespace detail {

// A transversal T_12 member: fixed data, perturbed by seeded forms until smooth.
inline TijFamilySpec<Rational> t12_member(std::uint64_t seed) {
  RationalField QQ;
  TijFamilySpec<Rational> s;
  s.field = QQ;
  s.pair = {1, 2};
  s.w = parse_poly<Rational>("z0+z3", QQ);
  s.A = parse_poly<Rational>("z0^3+2*z1^3-z2^3+z3^3+z0*z1*z2", QQ);
  s.B = parse_poly<Rational>("z0^2-z3^2+z1*z2", QQ);
  s.ci = Rational(2);
  s.cj = Rational(-3);
  Sampler rng(mix(seed, kCycleStream + 100));
  for (int t = 0; t < 50; ++t) {
    try {
      JacobianRing<Rational>::build(tij_polynomial(s));
      return s;
    } catch (const NotTransversal&) {
      s.A += rng.poly<Rational>(QQ, 3);
      s.B += rng.poly<Rational>(QQ, 2);
    }
  }
  throw InternalError("no transversal T_12 member found after perturbation");
}

}  // namespace detail

// 10. Boundary vanishing and independence of symbols.
inline void cycles_suite(const SuiteConfig& cfg, Criterion& out) {
  detail::Recorder rec(out);
  RationalField QQ;
  auto delta = delta_symbol<Rational>(QQ);
  std::vector<std::string> failing;
  for (int k : detail::transversal_indices(cfg.seed, detail::kCycleStream, 4, 5)) {
    auto F = detail::candidate<Rational>(QQ, cfg.seed, detail::kCycleStream, k, 4);
    if (!boundary_vanishes(delta, F)) failing.push_back(std::to_string(k));
  }
  rec.equal("delta is a cycle on 5 transversal quartics", "all", failing.empty() ? "all" : "fails at " + detail::join(failing));
  auto spec = detail::t12_member(cfg.seed);
  auto F = tij_polynomial(spec);
  auto c12 = c_symbol(1, 2, spec.w);
  rec.truth("c_12 is a cycle on a T_12 member", true, boundary_vanishes(c12, F));
  rec.truth("T_12 member is transversal", true, [&] {
    try {
      JacobianRing<Rational>::build(F);
      return true;
    } catch (const NotTransversal&) {
      return false;
    }
  }());
  std::string pair_field = "q";
  bool pair_independent = false;
  try {
    pair_independent = independence_test(std::vector{delta, c12}, F);
  } catch (const PreconditionError&) {
    // factorization unavailable over Q: retry with zeta(8) coefficients
    pair_field = "zeta:8";
    CyclotomicField Z8(8);
    auto Fz = parse_poly<Cyclotomic>(F.to_string(), Z8);
    auto wz = parse_poly<Cyclotomic>(spec.w.to_string(), Z8);
    pair_independent = independence_test(std::vector{delta_symbol<Cyclotomic>(Z8), c_symbol(1, 2, wz)}, Fz);
  }
  rec.truth("{delta, c_12} independent over " + pair_field, true, pair_independent);

  CyclotomicField Z8(8);
  auto P = [&](const std::string& s) { return parse_poly<Cyclotomic>(s, Z8); };
  auto fermat = P("z0^4+z1^4+z2^4+z3^4");
  std::vector<SymbolTriple<Cyclotomic>> four{delta_symbol<Cyclotomic>(Z8), c_symbol(1, 2, P("z0-zeta(8)*z3")),
                                             c_symbol(2, 3, P("z0-zeta(8)*z1")), c_symbol(3, 1, P("z0-zeta(8)*z2"))};
  auto rep = independence_report(four, fermat);
  rec.truth("{delta, c_12, c_23, c_31} independent on fermat over zeta:8", true, rep.independent);
  rec.equal("order matrix rank", 4, static_cast<long>(rep.rank));
  rec.truth("{delta, delta} independent", false, independence_test(std::vector{delta, delta}, F));
}

namespace detail {

template <Scalar K>
Profile rank_profile(const FieldOf<K>& f, const SuiteConfig& cfg, std::vector<std::string>& errors) {
  Profile profile;
  using Runner = void (*)(const FieldOf<K>&, const SuiteConfig&, Criterion&, Profile&);
  for (Runner run : {Runner(&duality_suite<K>), Runner(&transversality_suite<K>), Runner(&annihilator_suite<K>),
                     Runner(&equality_suite<K>), Runner(&otwinowska_suite<K>)}) {
    Criterion scratch;
    try {
      run(f, cfg, scratch, profile);
    } catch (const std::exception& e) {
      errors.push_back(f.name() + ": " + e.what());
    }
  }
  return profile;
}

inline std::uint64_t second_prime(std::uint64_t seed) {
  Sampler rng(mix(seed, kPrimeStream));
  for (;;) {
    std::uint64_t c = (1ULL << 24) + static_cast<std::uint64_t>(rng.below(1L << 29));
    if (c != 65537 && is_prime_u64(c)) return c;
  }
}

}  // namespace detail

// 11. Criteria 1-5 again over two primes.
inline void cross_oracle_suite(const SuiteConfig& cfg, Criterion& out, const Profile* rational = nullptr) {
  detail::Recorder rec(out);
  std::vector<std::string> errors;
  Profile q_profile = rational ? *rational : detail::rank_profile<Rational>(RationalField{}, cfg, errors);
  for (std::uint64_t p : {std::uint64_t{65537}, detail::second_prime(cfg.seed)}) {
    PrimeField Fp{p};
    auto mod = detail::rank_profile<ModP>(Fp, cfg, errors);
    std::vector<std::string> diffs;
    for (const auto& [key, value] : q_profile) {
      auto it = mod.find(key);
      if (it == mod.end()) diffs.push_back(key + " missing");
      else if (it->second != value) diffs.push_back(key + ": " + std::to_string(value) + " vs " + std::to_string(it->second));
    }
    for (const auto& [key, value] : mod)
      if (!q_profile.count(key)) diffs.push_back(key + " extra");
    rec.equal("fp:" + std::to_string(p) + " agrees on " + std::to_string(q_profile.size()) + " ranks", "agree",
              diffs.empty() ? "agree" : std::to_string(diffs.size()) + " differ: " + detail::join(diffs, "; "));
  }
  for (const auto& e : errors) rec.note(e);
  rec.equal("errors while recomputing", 0, static_cast<long>(errors.size()));
}

struct CriterionInfo {
  int id;
  const char* title;
  double budget;
};

inline const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> all{
      {1, "duality", 10},         {2, "transversality", 30}, {3, "annihilator floor", 60}, {4, "equality case", 30},
      {5, "monomial bound", 120}, {6, "residues", 30},       {7, "classification", 60},    {8, "operator kernels", 10},
      {9, "thresholds", 1},       {10, "cycles", 120},       {11, "cross-oracle", 60}};
  return all;
}

// Runs the selected criteria in id order.  Budgets are enforced at d = 4.
inline std::vector<Criterion> run_suite(const SuiteConfig& cfg, const std::vector<int>& only = {}) {
  if (cfg.d < 4 || cfg.d > 6) throw PreconditionError("the suite supports d in 4..6");
  RationalField QQ;
  Profile rational;
  bool profile_complete = true;
  std::vector<Criterion> out;
  for (const auto& info : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), info.id) == only.end()) {
      if (info.id <= 5) profile_complete = false;
      continue;
    }
    Criterion c;
    c.id = info.id;
    c.title = info.title;
    c.budget_seconds = info.budget;
    c.enforce_budget = cfg.d == 4;
    auto start = std::chrono::steady_clock::now();
    try {
      switch (info.id) {
        case 1: duality_suite<Rational>(QQ, cfg, c, rational); break;
        case 2: transversality_suite<Rational>(QQ, cfg, c, rational); break;
        case 3: annihilator_suite<Rational>(QQ, cfg, c, rational); break;
        case 4: equality_suite<Rational>(QQ, cfg, c, rational); break;
        case 5: otwinowska_suite<Rational>(QQ, cfg, c, rational); break;
        case 6: residue_suite(cfg, c); break;
        case 7: classification_suite(cfg, c); break;
        case 8: operator_suite(cfg, c); break;
        case 9: threshold_suite(cfg, c); break;
        case 10: cycles_suite(cfg, c); break;
        case 11: cross_oracle_suite(cfg, c, profile_complete ? &rational : nullptr); break;
      }
    } catch (const std::exception& e) {
      c.error = e.what();
      profile_complete = profile_complete && info.id > 5;
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(c));
  }
  return out;
}

// Criteria 1-5 over F_p only.
inline std::vector<Criterion> run_modular_suite(const SuiteConfig& cfg, const PrimeField& f) {
  if (cfg.d < 4 || cfg.d > 6) throw PreconditionError("the suite supports d in 4..6");
  std::vector<Criterion> out;
  Profile scratch;
  using Runner = void (*)(const PrimeField&, const SuiteConfig&, Criterion&, Profile&);
  const std::vector<Runner> runners{&duality_suite<ModP>, &transversality_suite<ModP>, &annihilator_suite<ModP>,
                                    &equality_suite<ModP>, &otwinowska_suite<ModP>};
  for (std::size_t k = 0; k < runners.size(); ++k) {
    const auto& info = criteria()[k];
    Criterion c;
    c.id = info.id;
    c.title = std::string(info.title) + " (modular evidence)";
    c.budget_seconds = info.budget;
    c.enforce_budget = false;
    auto start = std::chrono::steady_clock::now();
    try {
      runners[k](f, cfg, c, scratch);
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace nlocus::checks
