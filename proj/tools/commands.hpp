#pragma once

#include <algorithm>

#include "nlocus/checks.hpp"
#include "nlocus/core/parse.hpp"
#include "nlocus/cycles.hpp"
#include "nlocus/families.hpp"
#include "nlocus/graded.hpp"
#include "nlocus/jacobian.hpp"
#include "nlocus/residues.hpp"
#include "report.hpp"

namespace nlocus::cli {

namespace detail {

template <Scalar K>
HPoly<K> option_poly(const std::string& value, const std::string& option, const FieldOf<K>& f, std::optional<int> degree = std::nullopt) {
  if (value.empty()) throw PreconditionError(option + " is required");
  try {
    return parse_poly<K>(read_input(value, option), f, degree);
  } catch (const ParseError& e) {
    throw PreconditionError(option + ": " + e.what());
  } catch (const DegreeMismatch& e) {
    throw DegreeMismatch(option + ": " + e.what());
  }
}

struct Block {
  std::string kind;
  std::map<std::string, std::string> kv;
};

inline Block read_block(const RunConfig& cfg, const std::string& field_name) {
  if (cfg.spec.empty()) throw PreconditionError("--spec is required");
  Block b;
  b.kv = parse_key_values(read_input(cfg.spec, "--spec"));
  auto it = b.kv.find("family");
  if (it == b.kv.end()) throw PreconditionError("--spec: family block is missing key 'family'");
  b.kind = it->second;
  if (b.kind != "pq" && b.kind != "tij") throw PreconditionError("--spec: family must be pq or tij");
  if (auto fit = b.kv.find("field"); fit != b.kv.end() && fit->second != field_name)
    throw FieldMismatch("--spec declares field " + fit->second + " but --field is " + field_name);
  return b;
}

template <Scalar K>
HPoly<K> surface_input(const RunConfig& cfg, const FieldOf<K>& f) {
  if (!cfg.f.empty()) return option_poly<K>(cfg.f, "--f", f);
  if (cfg.spec.empty()) throw PreconditionError("--f or --spec is required");
  auto b = read_block(cfg, f.name());
  if (b.kind == "pq") return pq_polynomial(pq_from_block<K>(b.kv, f));
  return tij_polynomial(tij_from_block<K>(b.kv, f));
}

template <class T>
Json to_json_list(const std::vector<T>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(x);
  return out;
}

template <Scalar K>
void modular_note(Report& r, const FieldOf<K>&) {
  if constexpr (is_modp_v<K>) r.note("computed over a prime field: modular evidence only");
}

inline std::pair<int, int> parse_range(const std::string& text, int lo, int hi) {
  if (text.empty()) return {lo, hi};
  auto dots = text.find("..");
  if (dots == std::string::npos) throw PreconditionError("--range must look like a..b");
  int a = static_cast<int>(parse_long(text.substr(0, dots), "--range"));
  int b = static_cast<int>(parse_long(text.substr(dots + 2), "--range"));
  if (a < 0 || b < a) throw PreconditionError("--range needs 0 <= a <= b");
  return {a, b};
}

inline std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  if (text == "all") return {{1, 2}, {2, 3}, {3, 1}};
  if (text.size() == 2 && std::isdigit(static_cast<unsigned char>(text[0])) && std::isdigit(static_cast<unsigned char>(text[1])))
    return {{text[0] - '0', text[1] - '0'}};
  throw PreconditionError("--pair must be 12, 23, 31 or all");
}

}  // namespace detail

template <Scalar K>
void cmd_hilbert(const RunConfig& cfg, const FieldOf<K>& f, Report& r) {
  auto F = detail::surface_input<K>(cfg, f);
  int d = F.degree(), top = 4 * d - 4;
  auto [lo, hi] = detail::parse_range(cfg.range, 0, top);
  if (hi > top) {
    r.note("range capped at 4d-4 = " + std::to_string(top));
    hi = top;
  }
  lo = std::min(lo, hi);
  IdealSpec<K> J;
  J.field = f;
  J.generators.push_back(F.partial(0));
  for (int v = 1; v < kVariables; ++v) J.generators.push_back(HPoly<K>::variable(f, v) * F.partial(v));
  std::array<int, 4> degs{d - 1, d, d, d};
  Json table = Json::array();
  for (int l = lo; l <= hi; ++l) {
    long h = static_cast<long>(hilbert(J, l));
    table.push_back({{"degree", l}, {"value", h}});
    r.check("hilbert(" + std::to_string(l) + ") matches the complete-intersection series", ci_series_coeff(degs, l), h);
  }
  r.results["surface"] = F.to_string();
  r.results["degree"] = d;
  r.results["table"] = table;
  long certificate = static_cast<long>(hilbert(J, top));
  bool ci = certificate == 0 && is_complete_intersection(J);
  r.results["certificate_degree"] = top;
  r.results["certificate_value"] = certificate;
  r.results["ci"] = ci;
  detail::modular_note<K>(r, f);
  if (certificate != 0) throw NotTransversal(top);
}

template <Scalar K>
void cmd_duality(const RunConfig& cfg, const FieldOf<K>& f, Report& r) {
  auto R = JacobianRing<K>::build(detail::surface_input<K>(cfg, f));
  int socle = R.socle_degree();
  Json rows = Json::array();
  for (int l = 0; l <= socle; ++l) {
    long h = static_cast<long>(R.hilbert(l));
    long rank = static_cast<long>(pairing_rank(R, l));
    rows.push_back({{"degree", l}, {"hilbert", h}, {"pairing_rank", rank}});
    r.check_true("pairing perfect in degree " + std::to_string(l), pairing_perfect(R, l));
  }
  r.results["surface"] = R.surface().to_string();
  r.results["socle_degree"] = socle;
  r.results["pairing"] = rows;
  detail::modular_note<K>(r, f);
}

template <Scalar K>
void cmd_annihilator(const RunConfig& cfg, const FieldOf<K>& f, Report& r) {
  auto R = JacobianRing<K>::build(detail::surface_input<K>(cfg, f));
  int d = R.degree();
  auto lam = detail::option_poly<K>(cfg.g, "--g", f, d - 1);
  Json dims = Json::array();
  for (int l = 0; l <= 3 * d - 4; ++l) dims.push_back(static_cast<long>(annihilator_piece(R, lam, l).quotient_dim()));
  auto th = th31_check(R, lam);
  r.results["surface"] = R.surface().to_string();
  r.results["lambda"] = lam.to_string();
  r.results["quotient_dims"] = dims;
  r.results["floor"] = {{"quotient_dim", th.quotient_dim}, {"expected", th.expected}, {"equality", th.equality}, {"ci_certified", th.ci_certified}};
  r.check("quotient in degree d at least the floor", ">= " + std::to_string(th.expected), std::to_string(th.quotient_dim),
          static_cast<long>(th.quotient_dim) >= th.expected);
  for (int l = 1; l <= 2 * d; ++l) {
    auto o = otwinowska_check(R, lam, l);
    r.check("monomial bound in degree " + std::to_string(l), ">= " + std::to_string(o.rhs), std::to_string(o.lhs), o.holds);
  }
  detail::modular_note<K>(r, f);
}

template <Scalar K>
void cmd_classify(const RunConfig& cfg, const FieldOf<K>& f, Report& r) {
  auto F = detail::surface_input<K>(cfg, f);
  auto w = detail::option_poly<K>(cfg.w, "--w", f, 1);
  auto got = classify_with_witness(F, w);
  r.results["surface"] = F.to_string();
  r.results["w"] = w.to_string();
  r.results["classified"] = got.has_value();
  if (!got) return;
  const auto& line = got->line;
  r.results["sigma"] = {line.sigma[0], line.sigma[1], line.sigma[2]};
  r.results["p"] = line.p;
  r.results["q"] = line.q;
  r.results["r"] = line.r;
  r.results["scale"] = got->scale.to_string();
  r.results["induced_form"] = line.induced.to_string();
  if (got->spec) {
    r.results["spec"] = to_block(*got->spec);
    r.check_true("scale * member equals the input", got->scale * pq_polynomial(*got->spec) == F);
  } else {
    r.note("roots of the induced form lie outside the field; enlarge it to recover the spec");
  }
}

template <Scalar K>
void cmd_family(const RunConfig& cfg, const FieldOf<K>& f, Report& r) {
  auto b = detail::read_block(cfg, f.name());
  r.results["family"] = b.kind;
  if (b.kind == "pq") {
    auto spec = pq_from_block<K>(b.kv, f);
    auto F = pq_polynomial(spec);
    r.results["surface"] = F.to_string();
    r.results["degree"] = spec.degree();
    auto R = build_pq(spec);
    int d = spec.degree();
    long codim = static_cast<long>(family_codim(R, spec));
    auto sig = sigma_space_check(R, spec);
    r.results["xi"] = xi(spec).to_string();
    r.results["codim"] = codim;
    r.results["mult_kernel_dim"] = static_cast<long>(sig.kernel.dim());
    r.check("codimension of the family tangent space", binomial(d + 2, 2) - 5, codim);
    r.check_true("multiplication kernel equals span(omega, xi)", sig.equal);
    auto th = th31_check(R, xi(spec));
    r.check_true("annihilator of xi attains the floor", th.equality);
    r.check_true("annihilator of xi is a complete intersection", th.ci_certified);
  } else {
    auto spec = tij_from_block<K>(b.kv, f);
    auto F = tij_polynomial(spec);
    r.results["surface"] = F.to_string();
    r.results["degree"] = spec.degree();
    JacobianRing<K>::build(F);
    auto c = family_codim(spec);
    r.results["codim"] = static_cast<long>(c.codim);
    r.results["fixed_w_codim"] = static_cast<long>(c.fixed_w_codim);
    r.results["parameter_count"] = c.parameter_count;
    r.check("codimension with w fixed equals the parameter count", c.parameter_count, static_cast<long>(c.fixed_w_codim));
  }
  detail::modular_note<K>(r, f);
}

template <Scalar K>
void cmd_residues(const RunConfig& cfg, const FieldOf<K>& f, Report& r) {
  HPoly<K> F;
  HPoly<K> G;
  std::optional<PQFamilySpec<K>> spec;
  if (!cfg.spec.empty()) {
    auto b = detail::read_block(cfg, f.name());
    if (b.kind == "pq") spec = pq_from_block<K>(b.kv, f);
  }
  F = cfg.f.empty() ? detail::surface_input<K>(cfg, f) : detail::option_poly<K>(cfg.f, "--f", f);
  std::string selector = cfg.g.empty() ? "omega" : cfg.g;
  if (selector == "omega") {
    G = F.partial(0);
  } else if (selector == "xi") {
    if (!spec) throw PreconditionError("--g xi needs a pq --spec");
    G = xi(*spec);
  } else {
    G = detail::option_poly<K>(selector, "--g", f, F.degree() - 1);
  }
  r.results["surface"] = F.to_string();
  r.results["G"] = G.to_string();
  Json lines = Json::array();
  for (auto [i, j] : detail::parse_pairs(cfg.pair)) {
    auto rep = residue_report(F, G, i, j);
    Json line;
    line["pair"] = std::to_string(i) + std::to_string(j);
    line["restriction"] = rep.line.to_string();
    line["constant"] = rep.constant ? Json(rep.constant->to_string()) : Json(nullptr);
    line["value_polynomial"] = rep.values.to_string("y");
    if (rep.roots) {
      std::vector<std::string> roots;
      for (const auto& x : *rep.roots) roots.push_back(x.to_string());
      std::sort(roots.begin(), roots.end());
      line["roots"] = detail::to_json_list(roots);
    } else {
      line["roots"] = nullptr;
    }
    if constexpr (!is_modp_v<K>) {
      auto prec = static_cast<mpfr_prec_t>(cfg.precision);
      auto num = numeric_delta(F, G, i, j, prec);
      double gap = numeric_polynomial_gap(num, rep.values, prec);
      Json values = Json::array();
      // imaginary parts inside the error radius are dropped
      for (const auto& v : num)
        values.push_back(std::fabs(v.value.im.to_double()) <= v.radius ? v.value.re.to_string(15) : v.value.to_string(15));
      std::sort(values.begin(), values.end());
      line["numeric"] = {{"precision_bits", cfg.precision}, {"values", values}};
      bool ok = gap <= 1e-25;
      r.check("numeric oracle agrees on pair " + line["pair"].get<std::string>(), "<= 1e-25", ok ? "within tolerance" : "outside tolerance", ok);
    }
    if (selector == "omega") r.check("omega constant on pair " + line["pair"].get<std::string>(), "-1", rep.constant ? rep.constant->to_string() : "none",
                                     rep.constant && *rep.constant == -f.one());
    lines.push_back(line);
  }
  r.results["lines"] = lines;
  detail::modular_note<K>(r, f);
}

template <Scalar K>
SymbolTriple<K> parse_symbol_option(const std::string& text, const FieldOf<K>& f) {
  if (text == "delta") return delta_symbol<K>(f);
  if (text.size() > 4 && text[0] == 'c' && text[3] == ':') {
    std::string pr = text.substr(1, 2);
    if (pr != "12" && pr != "23" && pr != "31") throw PreconditionError("--symbol: c-symbols need pair 12, 23 or 31");
    auto w = detail::option_poly<K>(text.substr(4), "--symbol", f, 1);
    return c_symbol(pr[0] - '0', pr[1] - '0', w);
  }
  return parse_symbol<K>(read_input(text, "--symbol"), f);
}

template <Scalar K>
void cmd_cycles(const RunConfig& cfg, const FieldOf<K>& f, Report& r) {
  auto F = detail::surface_input<K>(cfg, f);
  std::vector<std::string> texts = cfg.symbols;
  if (texts.empty()) texts = {"delta"};
  std::vector<SymbolTriple<K>> symbols;
  for (const auto& t : texts) symbols.push_back(parse_symbol_option<K>(t, f));
  r.results["surface"] = F.to_string();
  Json rows = Json::array();
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    auto b = boundary_report(symbols[k], F);
    rows.push_back({{"symbol", texts[k]}, {"components", symbol_text(symbols[k])}, {"boundary_vanishes", b.vanishes}, {"offending", detail::to_json_list(b.offending)}});
    r.check_true("boundary of " + texts[k] + " vanishes", b.vanishes);
  }
  r.results["symbols"] = rows;
  auto rep = independence_report(symbols, F);
  r.results["independence"] = {{"independent", rep.independent}, {"rank", rep.rank}, {"deficiency", rep.deficiency},
                               {"relation", detail::to_json_list(rep.relation)}, {"constants", detail::to_json_list(rep.constants)}};
  detail::modular_note<K>(r, f);
}

inline void cmd_thresholds(const RunConfig& cfg, Report& r) {
  auto t = threshold_check(cfg.d);
  r.results["d"] = cfg.d;
  r.results["floor"] = t.floor;
  r.results["t1"] = t.t1;
  r.results["t2"] = t.t2;
  r.results["t3"] = t.t3;
  Json first = Json::object();
  for (int k = 1; k <= 3; ++k) {
    for (int d = 1; d <= 64; ++d) {
      auto x = threshold_check(d);
      bool v = k == 1 ? x.t1 : k == 2 ? x.t2 : x.t3;
      if (v) {
        first["t" + std::to_string(k)] = d;
        break;
      }
    }
  }
  r.results["first_true"] = first;
}

inline std::vector<int> parse_criteria(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  for (const auto& part : split_top_level(text)) {
    long v = parse_long(part, "--criteria");
    if (v < 1 || v > 11) throw PreconditionError("--criteria entries must lie in 1..11");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

inline void cmd_paper_check(const RunConfig& cfg, const FieldChoice& field, Report& r) {
  checks::SuiteConfig sc;
  sc.seed = cfg.seed;
  sc.d = cfg.d;
  sc.precision = static_cast<mpfr_prec_t>(cfg.precision);
  std::vector<checks::Criterion> results;
  if (const auto* fp = std::get_if<PrimeField>(&field)) {
    r.note("prime field mode: duality and rank criteria only, as modular evidence");
    results = checks::run_modular_suite(sc, *fp);
  } else {
    if (std::holds_alternative<CyclotomicField>(field)) r.note("criteria choose their own fields; zeta:8 is used where roots of unity are needed");
    else r.note("cyclotomic sub-checks run over zeta:8");
    results = checks::run_suite(sc, parse_criteria(cfg.criteria));
  }
  Json list = Json::array();
  for (const auto& c : results) {
    Json entry;
    entry["id"] = c.id;
    entry["title"] = c.title;
    entry["checks_pass"] = c.checks_pass();
    if (c.error) entry["error"] = *c.error;
    if (!c.notes.empty()) entry["notes"] = detail::to_json_list(c.notes);
    list.push_back(entry);
    std::string prefix = "criterion " + std::to_string(c.id) + ": ";
    for (const auto& k : c.checks) r.check(prefix + k.name, k.expected, k.actual, k.pass);
    if (c.error) r.check(prefix + "completes", "no error", *c.error, false);
    r.timing["criterion_" + std::to_string(c.id)] = {{"seconds", c.seconds}, {"budget", c.budget_seconds},
                                                    {"within_budget", c.within_budget()}};
  }
  r.results["criteria"] = list;
}

}  // namespace nlocus::cli
