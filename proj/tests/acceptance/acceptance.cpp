#include <cstdio>
#include <cstdlib>
#include <string>

#include "nlocus/checks.hpp"

// One line per criterion; failing checks are listed underneath.
int main(int argc, char** argv) {
  nlocus::checks::SuiteConfig cfg;
  if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);
  auto results = nlocus::checks::run_suite(cfg);
  int failed = 0;
  for (const auto& c : results) {
    std::printf("%s criterion %2d %-20s %7.2fs (budget %gs)\n", c.pass() ? "PASS" : "FAIL", c.id, c.title.c_str(), c.seconds,
                c.budget_seconds);
    if (c.pass()) continue;
    ++failed;
    if (c.error) std::printf("     error: %s\n", c.error->c_str());
    if (!c.within_budget()) std::printf("     over the time budget\n");
    for (const auto& k : c.checks)
      if (!k.pass) std::printf("     %s: expected %s, got %s\n", k.name.c_str(), k.expected.c_str(), k.actual.c_str());
    for (const auto& n : c.notes) std::printf("     note: %s\n", n.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
