#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace nlocus;
using namespace nlocus::cli;

namespace {

Json config_json(const RunConfig& cfg, const std::string& command) {
  Json c;
  c["field"] = cfg.field;
  c["seed"] = cfg.seed;
  c["generator"] = "mt19937_64";
  c["d"] = cfg.d;
  c["precision"] = cfg.precision;
  if (!cfg.f.empty()) c["f"] = cfg.f;
  if (!cfg.w.empty()) c["w"] = cfg.w;
  if (!cfg.g.empty()) c["g"] = cfg.g;
  if (!cfg.spec.empty()) c["spec"] = cfg.spec;
  if (command == "residues") c["pair"] = cfg.pair;
  if (!cfg.range.empty()) c["range"] = cfg.range;
  if (!cfg.criteria.empty()) c["criteria"] = cfg.criteria;
  if (!cfg.symbols.empty()) c["symbols"] = cfg.symbols;
  return c;
}

template <class Fn>
void with_field(const FieldChoice& field, Fn&& fn) {
  std::visit([&](const auto& f) {
    using F = std::decay_t<decltype(f)>;
    fn.template operator()<typename ElementOf<F>::type>(f);
  }, field);
}

void dispatch(const std::string& command, const RunConfig& cfg, Report& r) {
  auto field = parse_field(cfg.field);
  if (command == "thresholds") return cmd_thresholds(cfg, r);
  if (command == "paper-check") return cmd_paper_check(cfg, field, r);
  with_field(field, [&]<class K>(const FieldOf<K>& f) {
    if (command == "hilbert") cmd_hilbert<K>(cfg, f, r);
    else if (command == "duality") cmd_duality<K>(cfg, f, r);
    else if (command == "annihilator") cmd_annihilator<K>(cfg, f, r);
    else if (command == "classify") cmd_classify<K>(cfg, f, r);
    else if (command == "family") cmd_family<K>(cfg, f, r);
    else if (command == "residues") cmd_residues<K>(cfg, f, r);
    else if (command == "cycles") cmd_cycles<K>(cfg, f, r);
  });
}

void print_summary(const Report& r, std::ostream& out) {
  out << r.command << "\n";
  for (const auto& [key, value] : r.results.items()) out << "  " << key << ": " << value.dump() << "\n";
  for (const auto& c : r.checks)
    out << (c["pass"].get<bool>() ? "  PASS " : "  FAIL ") << c["name"].get<std::string>() << " (expected "
        << c["expected"].get<std::string>() << ", got " << c["actual"].get<std::string>() << ")\n";
  for (const auto& n : r.notes) out << "  note: " << n.get<std::string>() << "\n";
  if (!r.error.is_null()) out << "  error: " << r.error["message"].get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks on Jacobian rings of surfaces in P^3 and the families around them"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--field", cfg.field, "coefficient field: q, zeta:n or fp:p")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed of the mt19937_64 generator")->capture_default_str();
  app.add_option("--d", cfg.d, "surface degree for generated instances")->capture_default_str();
  app.add_option("--precision", cfg.precision, "numeric oracle precision in bits")->capture_default_str();
  app.add_option("--out", cfg.out, "write the JSON report to this path");
  app.add_flag("--json", cfg.json, "print the JSON report instead of a summary");

  auto add = [&](const std::string& name, const std::string& help) { return app.add_subcommand(name, help); };
  auto surface_opts = [&](CLI::App* sub) {
    sub->add_option("--f", cfg.f, "surface polynomial or @file");
    sub->add_option("--spec", cfg.spec, "family block or @file");
  };
  auto* hil = add("hilbert", "Hilbert function of the twisted Jacobian ideal and the transversality verdict");
  surface_opts(hil);
  hil->add_option("--range", cfg.range, "degrees a..b, capped at 4d-4");
  surface_opts(add("duality", "trace pairing ranks in every degree"));
  auto* ann = add("annihilator", "annihilator ideal of a degree d-1 form");
  surface_opts(ann);
  ann->add_option("--g", cfg.g, "the form lambda, degree d-1");
  auto* cls = add("classify", "recover a family spec from a surface and a linear form");
  surface_opts(cls);
  cls->add_option("--w", cfg.w, "linear form w");
  auto* fam = add("family", "tangent-space checks for a family member");
  fam->add_option("--spec", cfg.spec, "family block or @file")->required();
  auto* res = add("residues", "residue values on coordinate lines");
  surface_opts(res);
  res->add_option("--g", cfg.g, "omega, xi (with a pq --spec) or a degree d-1 form");
  res->add_option("--pair", cfg.pair, "12, 23, 31 or all")->capture_default_str();
  auto* cyc = add("cycles", "boundary vanishing and independence of symbols");
  surface_opts(cyc);
  cyc->add_option("--symbol", cfg.symbols, "delta, cIJ:w or num/den;num/den;num/den (repeatable)");
  add("thresholds", "threshold arithmetic at degree --d");
  auto* pc = add("paper-check", "run the full verification suite");
  pc->add_option("--criteria", cfg.criteria, "comma-separated subset of 1..11");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  Report report;
  report.command = command;
  report.config = config_json(cfg, command);
  int code = 0;
  auto start = std::chrono::steady_clock::now();
  try {
    dispatch(command, cfg, report);
    code = report.all_pass() ? 0 : 1;
  } catch (const PreconditionError& e) {
    report.error = {{"kind", "precondition"}, {"message", e.what()}};
    if (const auto* nt = dynamic_cast<const NotTransversal*>(&e)) report.error["certificate_degree"] = nt->degree();
    code = 2;
  } catch (const std::exception& e) {
    report.error = {{"kind", "internal"}, {"message", e.what()}};
    code = 1;
  }
  report.timing["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.timing["exit_code"] = code;

  auto doc = report.document().dump(2) + "\n";
  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return 2;
    }
    out << doc;
  }
  if (cfg.json) std::cout << doc;
  else print_summary(report, std::cout);
  return code;
}
