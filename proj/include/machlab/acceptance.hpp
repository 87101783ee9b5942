#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace machlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  std::string line() const;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Criteria 1-10 with artifacts below `out`; `ids` selects a subset (empty = all).
std::vector<CriterionResult> run_criteria(const std::filesystem::path& out, int threads,
                                          const std::vector<int>& ids = {},
                                          const CriterionCallback& progress = {});

/// The full suite: criteria 1-10 into out/run_a, then again into out/run_b for
/// the determinism check (criterion 11), which compares both trees byte for byte.
std::vector<CriterionResult> run_acceptance(const std::filesystem::path& out, int threads,
                                            const CriterionCallback& progress = {});

}  // namespace machlab
