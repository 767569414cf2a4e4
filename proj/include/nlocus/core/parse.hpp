#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "nlocus/core/hpoly.hpp"

namespace nlocus {

namespace detail {

// Polynomial of mixed degree used while parsing.
template <Scalar K>
struct LoosePoly {
  std::map<Mono, K, CanonicalOrder> terms;

  void add(const Mono& m, const K& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  LoosePoly operator*(const LoosePoly& o) const {
    LoosePoly r;
    for (const auto& [a, ca] : terms)
      for (const auto& [b, cb] : o.terms) r.add(a * b, ca * cb);
    return r;
  }
  std::optional<K> as_scalar() const {
    if (terms.empty()) return std::nullopt;
    if (terms.size() != 1 || terms.begin()->first.degree() != 0) return std::nullopt;
    return terms.begin()->second;
  }
};

template <Scalar K>
class Parser {
 public:
  Parser(std::string_view text, FieldOf<K> field) : s_(text), f_(std::move(field)) {}

  LoosePoly<K> parse_all() {
    LoosePoly<K> r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  bool at_atom_start() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'z' || c == '(';
  }

  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::string(s_.substr(start, pos_ - start));
  }

  LoosePoly<K> expr() {
    LoosePoly<K> r;
    bool neg = false;
    if (accept('-')) neg = true;
    else accept('+');
    add_scaled(r, term(), neg);
    for (;;) {
      if (accept('+')) add_scaled(r, term(), false);
      else if (accept('-')) add_scaled(r, term(), true);
      else break;
    }
    return r;
  }

  static void add_scaled(LoosePoly<K>& r, const LoosePoly<K>& t, bool neg) {
    for (const auto& [m, c] : t.terms) r.add(m, neg ? -c : c);
  }

  LoosePoly<K> term() {
    LoosePoly<K> r = factor();
    for (;;) {
      if (accept('*')) {
        r = r * factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        auto d = factor().as_scalar();
        if (!d) throw ParseError("division by a non-constant", at);
        if (d->is_zero()) throw ParseError("division by zero", at);
        K inv = d->inverse();
        LoosePoly<K> q;
        for (const auto& [m, c] : r.terms) q.add(m, c * inv);
        r = std::move(q);
      } else if (at_atom_start()) {
        r = r * factor();  // juxtaposition
      } else {
        break;
      }
    }
    return r;
  }

  LoosePoly<K> factor() {
    LoosePoly<K> base = atom();
    if (accept('^')) {
      long e = std::stol(digits());
      LoosePoly<K> r;
      r.add(Mono{}, f_.one());
      for (long k = 0; k < e; ++k) r = r * base;
      return r;
    }
    return base;
  }

  LoosePoly<K> atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    LoosePoly<K> r;
    if (c == '(') {
      ++pos_;
      r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class v(digits());
      r.add(Mono{}, f_.from_rational(mpq_class(v)));
      return r;
    }
    if (s_.substr(pos_, 4) == "zeta") {
      std::size_t at = pos_;
      pos_ += 4;
      if (!accept('(')) fail("expected '(' after zeta");
      long order = std::stol(digits());
      if (!accept(')')) fail("expected ')'");
      if constexpr (is_cyclotomic_v<K>) {
        if (order <= 0 || f_.conductor() % static_cast<unsigned>(order) != 0)
          throw FieldMismatch("zeta(" + std::to_string(order) + ") is not in " + f_.name() +
                              " (position " + std::to_string(at) + ")");
        r.add(Mono{}, f_.root_of_unity(static_cast<unsigned>(order), 1));
        return r;
      } else {
        throw FieldMismatch("zeta is not available over " + f_.name() + " (position " + std::to_string(at) + ")");
      }
    }
    if (c == 'z') {
      ++pos_;
      if (pos_ >= s_.size() || s_[pos_] < '0' || s_[pos_] > '3') fail("expected variable z0..z3");
      int v = s_[pos_] - '0';
      ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("unknown variable");
      r.add(Mono::variable(v), f_.one());
      return r;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  FieldOf<K> f_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses a homogeneous polynomial.  The zero polynomial takes
// `zero_degree` (default 0) unless a degree is forced with `expect_degree`.
template <Scalar K>
HPoly<K> parse_poly(std::string_view text, const FieldOf<K>& field, std::optional<int> expect_degree = std::nullopt) {
  detail::Parser<K> parser(text, field);
  auto loose = parser.parse_all();
  if (loose.terms.empty()) return HPoly<K>(field, expect_degree.value_or(0));
  int d = loose.terms.begin()->first.degree();
  for (const auto& [m, c] : loose.terms)
    if (m.degree() != d) throw DegreeMismatch("polynomial is not homogeneous: \"" + std::string(text) + "\"");
  if (expect_degree && *expect_degree != d)
    throw DegreeMismatch("expected degree " + std::to_string(*expect_degree) + ", got " + std::to_string(d));
  HPoly<K> r(field, d);
  for (const auto& [m, c] : loose.terms) r.add_term(m, c);
  return r;
}

template <Scalar K>
K parse_scalar(std::string_view text, const FieldOf<K>& field) {
  auto p = parse_poly<K>(text, field);
  if (p.is_zero()) return field.zero();
  if (p.degree() != 0) throw DegreeMismatch("expected a constant: \"" + std::string(text) + "\"");
  return p.coefficient(Mono{});
}

}  // namespace nlocus
