#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kur {

// One verified condition: which condition, on what, and the worst residual seen.
struct Check {
  std::string condition;  // e.g. "(2.) section", "(4.) cocycle"
  std::string subject;    // e.g. "A->B"
  bool passed = true;
  double residual = 0.0;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;

  bool passed() const;
  // True if some check for this condition failed.
  bool failed(std::string_view condition) const;
  std::vector<std::string> failed_conditions() const;

  void add(Check c) { checks.push_back(std::move(c)); }
  void merge(const Report& other, std::string_view prefix = {});
};

// Renders the report as a fixed-width table.
std::string format_table(const Report& r);

}  // namespace kur
