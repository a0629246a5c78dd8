// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <iostream>

#include "hardedge/acceptance.hpp"

int main() {
  using namespace hardedge::acceptance;
  int failed = 0;
  run_all([&](const Result& r) {
    std::cout << r.line() << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
