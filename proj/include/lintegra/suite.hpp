#pragma once

#include <string>
#include <vector>

namespace lintegra {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the ten acceptance criteria against the fixture corpus. Tolerances
// and expected verdicts are pinned in the implementation; a criterion that
// throws is reported as failed with the exception text, never skipped.
std::vector<CriterionResult> run_acceptance(const std::string& corpus_dir);

// One line per criterion ("PASS  3  name — detail") plus a summary line.
std::string format_acceptance(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace lintegra
