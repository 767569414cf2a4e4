#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "nlocus/errors.hpp"
#include "nlocus/scalar/cyclotomic.hpp"
#include "nlocus/scalar/prime_field.hpp"
#include "nlocus/scalar/rational.hpp"
#include "nlocus/scalar/scalar.hpp"

namespace nlocus::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string field = "q";
  std::uint64_t seed = 42;
  int d = 4;
  long precision = 128;
  std::string out;
  bool json = false;
  std::string f, w, g, spec, pair = "all", range, criteria;
  std::vector<std::string> symbols;
};

// One JSON document per run.  Timing lives in its own section so the rest is
// byte-identical across runs with the same config.
struct Report {
  std::string command;
  Json config = Json::object();
  Json results = Json::object();
  Json checks = Json::array();
  Json notes = Json::array();
  Json timing = Json::object();
  Json error;

  void check(const std::string& name, const std::string& expected, const std::string& actual, bool pass) {
    checks.push_back({{"name", name}, {"expected", expected}, {"actual", actual}, {"pass", pass}});
  }
  void check(const std::string& name, long expected, long actual) {
    check(name, std::to_string(expected), std::to_string(actual), expected == actual);
  }
  void check_true(const std::string& name, bool actual) { check(name, "true", actual ? "true" : "false", actual); }
  void note(const std::string& s) { notes.push_back(s); }

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c["pass"].get<bool>()) return false;
    return true;
  }

  Json document() const {
    Json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["results"] = results;
    doc["checks"] = checks;
    if (!notes.empty()) doc["notes"] = notes;
    if (!error.is_null()) doc["error"] = error;
    doc["timing"] = timing;
    return doc;
  }
};

using FieldChoice = std::variant<RationalField, CyclotomicField, PrimeField>;

template <class F>
struct ElementOf;
template <>
struct ElementOf<RationalField> {
  using type = Rational;
};
template <>
struct ElementOf<CyclotomicField> {
  using type = Cyclotomic;
};
template <>
struct ElementOf<PrimeField> {
  using type = ModP;
};

inline long parse_long(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw PreconditionError(what + ": expected an integer, got '" + s + "'");
  return v;
}

inline FieldChoice parse_field(const std::string& text) {
  if (text == "q") return RationalField{};
  if (text.rfind("zeta:", 0) == 0) {
    long n = parse_long(text.substr(5), "--field zeta:n");
    if (n < 1 || n > 1000) throw PreconditionError("--field zeta:n needs 1 <= n <= 1000");
    return CyclotomicField(static_cast<unsigned>(n));
  }
  if (text.rfind("fp:", 0) == 0) {
    long p = parse_long(text.substr(3), "--field fp:p");
    if (p < 2 || static_cast<std::uint64_t>(p) >= kModularPrimeCeiling || !is_prime_u64(static_cast<std::uint64_t>(p)))
      throw PreconditionError("--field fp:p needs a prime below 2^31");
    return PrimeField{static_cast<std::uint64_t>(p)};
  }
  throw PreconditionError("--field must be q, zeta:n or fp:p, got '" + text + "'");
}

// "@path" reads the file; anything else is literal text.
inline std::string read_input(const std::string& value, const std::string& option) {
  if (value.empty() || value[0] != '@') return value;
  std::ifstream in(value.substr(1));
  if (!in) throw PreconditionError(option + ": cannot read " + value.substr(1));
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string s = buf.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

}  // namespace nlocus::cli
