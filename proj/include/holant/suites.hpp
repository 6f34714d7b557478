#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace holant {

struct SuiteCase {
  std::string name;
  int cases = 0;
  int failures = 0;
  double max_residual = 0;
  double seconds = 0;
  bool passed() const { return failures == 0; }
};

struct SuiteReport {
  std::string name;
  std::vector<SuiteCase> parts;
  double seconds = 0;
  bool passed() const;
  nlohmann::json to_json() const;
  std::string table() const;
};

SuiteReport suite_verify_identities(unsigned long seed = 0, int draws = 50);
SuiteReport suite_oracle_equivalence(unsigned long seed = 0, int grids = 200);
SuiteReport suite_closure_laws(unsigned long seed = 0, int cases = 100);
// Dispatch by name; throws ValidationError on an unknown name.
SuiteReport run_suite(const std::string& name, unsigned long seed = 0);

}  // namespace holant
