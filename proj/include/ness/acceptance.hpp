#pragma once

#include <cstdint>
#include <string>
#include <vector>

// End-to-end checks shared by the acceptance test binary and `nessctl validate`.

namespace ness::acceptance {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool binding = true;  // non-binding checks are reported but never gate
  std::string detail;
  double seconds = 0;
};

CheckResult single_site_analytic();
CheckResult small_chain_oracle();
CheckResult cross_oracle();
CheckResult parity_alternation();
CheckResult degeneracy_detection();
CheckResult property_suite(int random_cases = 100, std::uint64_t seed = 20240611);
CheckResult dense_equivalence();
/// Runtime scan for the generic point. Sizes that would not fit in the
/// remaining budget (projected from the last growth ratio) are not started.
CheckResult runtime_scaling(double budget_seconds = 600.0);

/// Checks 1-7, optionally followed by the runtime scan.
std::vector<CheckResult> run_all(bool include_runtime);

bool all_binding_passed(const std::vector<CheckResult>& results);
std::string format_line(const CheckResult& r);

}  // namespace ness::acceptance
