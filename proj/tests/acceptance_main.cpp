// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: acceptance [out-dir] [criterion ids...]
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "machlab/acceptance.hpp"
#include "machlab/experiments.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_out";
  std::vector<int> ids;
  for (int i = 2; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  try {
    const int threads = machlab::resolve_threads(0);
    auto print = [](const machlab::CriterionResult& r) { std::cout << r.line() << std::endl; };
    const auto results = ids.empty() ? machlab::run_acceptance(out, threads, print)
                                     : machlab::run_criteria(out, threads, ids, print);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria pass")
              << std::endl;
    return failed ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "acceptance aborted: " << e.what() << '\n';
    return 3;
  }
}
