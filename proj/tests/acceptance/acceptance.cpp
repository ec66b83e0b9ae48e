// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero if any criterion fails.

#include <mpq/selftest.hpp>

#include <cstdio>

int main() {
  bool all = true;
  for (const auto fn : mpq::selftest::all_criteria()) {
    const mpq::selftest::CriterionResult r = fn();
    std::printf("%s\n", mpq::selftest::summary_line(r).c_str());
    std::fflush(stdout);
    all = all && r.passed();
  }
  std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILED");
  return all ? 0 : 1;
}
