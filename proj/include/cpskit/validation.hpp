#pragma once

#include <string>
#include <vector>

#include "cpskit/io.hpp"

namespace cpskit::validation {

struct Check {
  std::string suite;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed() const { return residual <= tolerance; }
};

struct Report {
  std::vector<Check> checks;
  bool passed() const;
  io::Json to_json() const;
};

/// Suites: basis, operators, evolution, prep, oracle, all.
bool is_suite(const std::string& name);
Report run(const std::string& suite);

}  // namespace cpskit::validation
