// Hilbert function and trace pairing of the Fermat quartic.
#include <iostream>

#include "nlocus/core/parse.hpp"
#include "nlocus/jacobian.hpp"

int main() {
  using namespace nlocus;
  RationalField QQ;
  auto R = JacobianRing<Rational>::build(parse_poly<Rational>("z0^4+z1^4+z2^4+z3^4", QQ));
  std::cout << "degree  dim  pairing rank\n";
  for (int l = 0; l <= R.socle_degree(); ++l)
    std::cout << l << "\t" << R.hilbert(l) << "\t" << pairing_rank(R, l) << (pairing_perfect(R, l) ? "" : "  (not perfect)") << "\n";
}
