// One line per acceptance criterion. Exit status is nonzero iff a binding
// criterion fails; `--skip-runtime` leaves out the slow runtime scan.

#include <cstring>
#include <iostream>

#include "ness/acceptance.hpp"

int main(int argc, char** argv) {
  bool runtime = true;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--skip-runtime") == 0) {
      runtime = false;
    } else {
      std::cerr << "usage: acceptance [--skip-runtime]\n";
      return 2;
    }
  }
  namespace acc = ness::acceptance;
  std::vector<acc::CheckResult> results;
  auto report = [&](acc::CheckResult r) {
    std::cout << acc::format_line(r) << std::endl;
    results.push_back(std::move(r));
  };
  report(acc::single_site_analytic());
  report(acc::small_chain_oracle());
  report(acc::cross_oracle());
  report(acc::parity_alternation());
  report(acc::degeneracy_detection());
  report(acc::property_suite());
  report(acc::dense_equivalence());
  if (runtime) report(acc::runtime_scaling());

  int failed = 0;
  for (const auto& r : results) failed += !r.passed && r.binding;
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " binding criteria failed"
                       : std::string("acceptance: all binding criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
