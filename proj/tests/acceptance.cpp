// Acceptance gate: runs every built-in verification suite at its pinned
// tolerances and prints one pass/fail line per criterion. Exits nonzero when
// any criterion fails.

#include <cstdio>
#include <exception>

#include "evoelim/io.hpp"
#include "evoelim/verify.hpp"

int main() {
  try {
    const auto results = evoelim::run_verification({"all"}, 2);
    int failures = 0;
    for (const auto& r : results) {
      std::printf("[%s] %-28s measured=%-12.6g bound=%-12.6g (%.2fs)\n",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured, r.bound, r.seconds);
      if (!r.pass) {
        std::printf("       %s\n", r.detail.c_str());
        ++failures;
      }
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "acceptance suite aborted: %s\n", err.what());
    return 2;
  }
}
