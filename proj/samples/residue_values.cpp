// Residue values of xi on the three coordinate lines, exact and numeric.
#include <cmath>
#include <iostream>

#include "nlocus/core/parse.hpp"
#include "nlocus/residues.hpp"

int main() {
  using namespace nlocus;
  RationalField QQ;
  PQFamilySpec<Rational> spec;
  spec.field = QQ;
  spec.p = 1;
  spec.q = 1;
  spec.r = 2;
  spec.c = Rational(1);
  spec.cs = {Rational(1), Rational(-1)};
  spec.w = parse_poly<Rational>("z0", QQ);
  spec.A = parse_poly<Rational>("z0^3+z1^3+z2^3+z3^3", QQ);
  auto F = pq_polynomial(spec);
  auto x = xi(spec);
  for (auto [i, j] : {std::pair{1, 2}, std::pair{2, 3}, std::pair{3, 1}}) {
    auto rep = residue_report(F, x, i, j);
    std::cout << "line z" << i << " = z" << j << " = 0: V(y) = " << rep.values.to_string("y") << "\n  numeric:";
    for (const auto& v : numeric_delta(F, x, i, j))
      std::cout << " " << (std::fabs(v.value.im.to_double()) <= v.radius ? v.value.re.to_string(12) : v.value.to_string(12));
    std::cout << "\n";
  }
}
