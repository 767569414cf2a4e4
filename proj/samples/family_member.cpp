// Build a family member, check its tangent space, then recover it from the
// polynomial alone.
#include <iostream>

#include "nlocus/core/parse.hpp"
#include "nlocus/families.hpp"

int main() {
  using namespace nlocus;
  RationalField QQ;
  PQFamilySpec<Rational> spec;
  spec.field = QQ;
  spec.p = 1;
  spec.q = 1;
  spec.r = 2;
  spec.c = Rational(1);
  spec.cs = {Rational(2), Rational(-3)};
  spec.w = parse_poly<Rational>("z0+z1", QQ);
  spec.A = parse_poly<Rational>("z0^3+z1^3+z2^3+z3^3-z0*z1*z2", QQ);

  Sampler rng(1);
  auto [member, R] = transversal_pq_member(spec, rng);
  std::cout << "F = " << R.surface() << "\n";
  std::cout << "codimension of the tangent space: " << family_codim(R, member) << "\n";
  std::cout << "kernel of multiplication by w equals span(omega, xi): " << std::boolalpha
            << sigma_space_check(R, member).equal << "\n";

  auto found = classify_with_witness(R.surface(), member.w);
  if (found && found->spec) std::cout << "recovered:\n" << to_block(*found->spec);
}
