#pragma once

#include <string>
#include <vector>

namespace bubblefem::acceptance {

enum class Status { pass, fail, informational };

struct CriterionResult {
  int id = 0;
  std::string title;
  Status status = Status::fail;
  std::string detail;
};

/// Runs every acceptance criterion with its pinned tolerance. Deterministic:
/// randomized draws use fixed seeds.
std::vector<CriterionResult> run_all();

bool all_passed(const std::vector<CriterionResult>& results);

/// "PASS [1] title: detail" style line.
std::string format_line(const CriterionResult& result);

}  // namespace bubblefem::acceptance
