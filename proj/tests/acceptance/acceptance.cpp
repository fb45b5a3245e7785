#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "criteria.hpp"

using namespace psitrop::verify;

int main(int argc, char** argv) {
  Options opt;
  int only = 0;
  bool verbose = false;
  for (int a = 1; a < argc; ++a) {
    if (!std::strcmp(argv[a], "--criterion") && a + 1 < argc) only = std::atoi(argv[++a]);
    else if (!std::strcmp(argv[a], "--smoke")) opt.level = Level::smoke;
    else if (!std::strcmp(argv[a], "--verbose")) verbose = true;
    else if (!std::strcmp(argv[a], "--seed") && a + 1 < argc) opt.seed = std::strtoull(argv[++a], nullptr, 10);
    else {
      std::fprintf(stderr, "usage: acceptance [--criterion N] [--smoke] [--seed S] [--verbose]\n");
      return 2;
    }
  }
  bool all = true;
  for (int id = 1; id <= kCriteria; ++id) {
    if (only && id != only) continue;
    CriterionResult r = run_criterion(id, opt);
    std::printf("%s criterion %d: %s (%.2f s, limit %.0f s)\n", r.pass() ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds, r.budget);
    for (const auto& c : r.checks)
      if (verbose || !c.pass)
        std::printf("    %s %s: expected %s, got %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(), c.expected.c_str(),
                    c.actual.c_str());
    all = all && r.pass();
  }
  return all ? 0 : 1;
}
