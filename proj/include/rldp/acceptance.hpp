#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rldp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct AcceptanceOptions {
  std::filesystem::path models_dir;
  unsigned workers = 1;
  std::vector<int> only;  // empty runs every criterion
};

/// Directory holding the shipped model configs.
std::filesystem::path default_models_dir();

/// Runs the acceptance criteria in order. A criterion passes when its
/// numerical gate holds and it finished within its time limit. One line per
/// criterion is written to `out` as soon as it completes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out);

std::string format_result(const CriterionResult& r);

}  // namespace rldp
