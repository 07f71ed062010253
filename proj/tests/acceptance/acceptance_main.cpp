// Runs the full-size acceptance suite: one line per criterion, nonzero exit on
// any failure. Optional argument: a name filter, as in `holonomy selftest`.
#include <iostream>
#include <string>

#include "validation/checks.hpp"

int main(int argc, char** argv) {
  using namespace holonomy::validation;
  const std::string filter = argc > 1 ? argv[1] : "";
  int failed = 0;
  int total = 0;
  for (const auto& info : check_catalog()) {
    if (!filter.empty() && std::string(info.name).find(filter) == std::string::npos) continue;
    const CheckResult r = run_check(info.id);
    std::cout << format_result(r) << std::endl;
    ++total;
    if (!r.passed()) ++failed;
  }
  std::cout << (total - failed) << "/" << total << " acceptance criteria passed" << std::endl;
  return failed == 0 && total > 0 ? 0 : 1;
}
