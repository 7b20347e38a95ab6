#include "kuranishi/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace kur {

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool Report::failed(std::string_view condition) const {
  return std::any_of(checks.begin(), checks.end(),
                     [&](const Check& c) { return !c.passed && c.condition == condition; });
}

std::vector<std::string> Report::failed_conditions() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed && std::find(out.begin(), out.end(), c.condition) == out.end()) out.push_back(c.condition);
  return out;
}

void Report::merge(const Report& other, std::string_view prefix) {
  for (auto c : other.checks) {
    if (!prefix.empty()) c.subject = std::string(prefix) + (c.subject.empty() ? "" : " " + c.subject);
    checks.push_back(std::move(c));
  }
}

std::string format_table(const Report& r) {
  std::size_t wc = 9, ws = 7;
  for (const auto& c : r.checks) {
    wc = std::max(wc, c.condition.size());
    ws = std::max(ws, c.subject.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(wc)) << "condition" << "  " << std::setw(static_cast<int>(ws))
     << "subject" << "  verdict  residual    detail\n";
  for (const auto& c : r.checks) {
    os << std::left << std::setw(static_cast<int>(wc)) << c.condition << "  " << std::setw(static_cast<int>(ws))
       << c.subject << "  " << std::setw(7) << (c.passed ? "pass" : "FAIL") << "  " << std::scientific
       << std::setprecision(3) << std::setw(10) << c.residual << "  " << c.detail << "\n";
    os << std::defaultfloat;
  }
  os << (r.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace kur
