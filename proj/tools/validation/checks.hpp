#pragma once

#include <cstdint>
#include <string>
#include <vector>

// The acceptance suite: ten numbered checks, each a set of measured quantities
// compared against bounds fixed in checks.cpp.
namespace holonomy::validation {

enum class Fault {
  kNone,
  kKksSign,  // pullback check compares against a sign-flipped KKS formula
};

struct CheckOptions {
  bool reduced = false;  // smaller instance counts, for selftest
  std::uint64_t seed = 20240611;
  Fault fault = Fault::kNone;
};

struct Measurement {
  std::string label;
  double value = 0.0;
  double bound = 0.0;
  bool at_least = false;  // value must be >= bound instead of < bound
  bool passed() const { return at_least ? value >= bound : value < bound; }
};

struct CheckResult {
  int id = 0;
  std::string name;
  int instances = 0;
  std::vector<Measurement> measurements;
  std::vector<std::string> failures;  // instances that could not be evaluated
  double seconds = 0.0;
  double budget = 0.0;  // expected runtime in seconds (reported, not enforced)

  bool passed() const;
};

struct CheckInfo {
  int id;
  const char* name;
  const char* title;
};

const std::vector<CheckInfo>& check_catalog();

CheckResult run_check(int id, const CheckOptions& options = {});

// Checks whose name contains `filter` (all when empty), in catalog order.
std::vector<CheckResult> run_checks(const std::string& filter, const CheckOptions& options = {});

// A single line: verdict, id, name, then every measurement against its bound.
std::string format_result(const CheckResult& result);

}  // namespace holonomy::validation
