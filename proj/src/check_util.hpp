#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kuranishi/linalg.hpp"
#include "kuranishi/report.hpp"

namespace kur::detail {

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double max_abs(const std::vector<double>& v) {
  double r = 0.0;
  for (double c : v) r = std::max(r, std::abs(c));
  return r;
}

inline Matrix at(const PolyMatrix& m, const std::vector<double>& x) { return eval_matrix(m, x); }

// Worst residual over a set of subjects, reported as one check.
struct Tally {
  std::string condition;
  std::string subject;
  double tol;
  double worst = 0.0;
  bool failed = false;
  std::string detail{};

  void see(double r, const std::string& what) {
    if (std::isnan(r) || r > tol) {
      if (!failed || r > worst) detail = what;
      failed = true;
    }
    if (std::isnan(r) || r > worst) worst = r;
  }
  void fail(const std::string& what) {
    if (!failed) detail = what;
    failed = true;
  }
  Check check() const { return Check{condition, subject, !failed, worst, detail}; }
};

}  // namespace kur::detail
