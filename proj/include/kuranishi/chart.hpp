#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kuranishi/boxes.hpp"
#include "kuranishi/polymap.hpp"

namespace kur {

inline constexpr double kZeroTolerance = 1e-9;  // footprint residual bound
inline constexpr double kDegenerateDet = 1e-8;

struct ChartError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A labeled point of the footprint: the chart coordinates of a point of X.
struct FootprintPoint {
  std::string label;
  std::vector<double> x;

  friend bool operator==(const FootprintPoint&, const FootprintPoint&) = default;
};

// Kuranishi chart (V, R^m, s, psi) on a Euclidean open V. psi is the label table.
class KuranishiChart {
 public:
  KuranishiChart(std::string id, BoxUnion domain, int m, PolyMap section, int orientation,
                 std::vector<FootprintPoint> footprint, std::map<std::string, std::string> metadata = {});

  const std::string& id() const { return id_; }
  const BoxUnion& domain() const { return domain_; }
  int n() const { return domain_.dim(); }
  int m() const { return m_; }
  const PolyMap& section() const { return section_; }
  int orientation() const { return orientation_; }
  const std::vector<FootprintPoint>& footprint() const { return footprint_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  int vdim() const { return n() - m(); }
  const FootprintPoint* find(const std::string& label) const;
  // ds as an m x n matrix-valued map.
  const PolyMatrix& section_jacobian() const { return ds_; }

  KuranishiChart with_id(std::string id) const;
  KuranishiChart with_orientation(int orientation) const;
  KuranishiChart with_footprint(std::vector<FootprintPoint> footprint) const;

  friend bool operator==(const KuranishiChart& a, const KuranishiChart& b) {
    return a.id_ == b.id_ && a.domain_ == b.domain_ && a.m_ == b.m_ && a.section_ == b.section_ &&
           a.orientation_ == b.orientation_ && a.footprint_ == b.footprint_ && a.metadata_ == b.metadata_;
  }

 private:
  std::string id_;
  BoxUnion domain_;
  int m_;
  PolyMap section_;
  int orientation_;
  std::vector<FootprintPoint> footprint_;
  std::map<std::string, std::string> metadata_;
  PolyMatrix ds_;
};

inline int vdim(const KuranishiChart& c) { return c.vdim(); }

// A zero of a square polynomial system.
struct Zero {
  std::vector<double> x;
  double det = 0.0;
  int sign = 0;  // sign(det ds), 0 when degenerate
  bool degenerate = false;
  bool inside = true;  // lies in the domain

  friend bool operator==(const Zero&, const Zero&) = default;
};

struct NewtonOptions {
  int max_iterations = 100;
  double converged = 1e-12;  // ||s||_inf at acceptance
  double dedupe = 1e-6;
};

// Damped Newton from one start; returns the limit if it converged.
std::optional<std::vector<double>> newton(const PolyMap& s, const PolyMatrix& ds, std::vector<double> x,
                                          const NewtonOptions& opts = {});

// Multistart Newton over sample(domain, density, seed); zeros sorted and
// deduplicated. With keep_outside, converged points outside the domain are
// returned too (flagged inside = false).
std::vector<Zero> solve_square(const PolyMap& s, const BoxUnion& domain, int density, std::uint64_t seed,
                               bool keep_outside = false, const NewtonOptions& opts = {});

// Zeros of the chart section inside its domain. Requires n == m.
std::vector<Zero> find_zeros(const KuranishiChart& chart, int seeds_density, std::uint64_t seed);

}  // namespace kur
