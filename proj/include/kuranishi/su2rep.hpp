#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kuranishi/chart.hpp"
#include "kuranishi/quaternion.hpp"
#include "kuranishi/tangent.hpp"
#include "kuranishi/vfc.hpp"

namespace kur {

struct PresentationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Product of generator powers, left to right: (generator index, exponent != 0).
using Word = std::vector<std::pair<int, int>>;

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  GroupPresentation() = default;
  GroupPresentation(std::vector<std::string> generators, std::vector<Word> relators);

  int g() const { return static_cast<int>(generators.size()); }
  int r() const { return static_cast<int>(relators.size()); }
  bool balanced() const { return g() == r(); }

  friend bool operator==(const GroupPresentation&, const GroupPresentation&) = default;
};

inline constexpr double kUnitTolerance = 1e-10;
inline constexpr double kReducibleRank = 1e-7;
inline constexpr double kFingerprintStep = 1e-6;

struct RepPoint {
  std::vector<Quat> q;
};

Quat word_eval(const Word& w, const std::vector<Quat>& q);

struct HomologyCheck {
  std::vector<std::vector<long long>> matrix;  // relator x generator exponent sums
  long long det = 0;
  bool homology_sphere = false;
};

HomologyCheck homology_sphere_check(const GroupPresentation& p);

// R^{4g} -> R^{3r + g}: imaginary parts of every relator, then |q_i|^2 - 1.
PolyMap relator_system(const GroupPresentation& p);

// Largest |Im r_j|, and min Re r_j, at q.
double relator_residual(const GroupPresentation& p, const std::vector<Quat>& q);
double relator_min_real(const GroupPresentation& p, const std::vector<Quat>& q);

struct TwistedCohomology {
  int h0 = 0, h1 = 0, h2 = 0;  // closed-manifold ranks for balanced presentations
  int h2_presentation = 0;     // rank of the cokernel of d1 on the presentation complex
  int h3 = 0;
  bool borderline = false;
};

struct RepOrbit {
  RepPoint representative;
  std::vector<double> fingerprint;
  TwistedCohomology h;
  bool irreducible = false;
  int orientation_bit = 1;
  int hits = 0;            // converged starts in this orbit
  bool collision = false;  // gauge-fixed members differ by more than 1e-4
};

struct SolveOptions {
  int starts = 100000;
  std::uint64_t seed = 0;
  bool allow_positive_dim = false;
  bool allow_reducible = false;
  std::optional<Quat> conjugate_starts;  // conjugate every start by this unit quaternion
};

// Rank of the 3 x g matrix of imaginary parts is at least 2.
bool is_irreducible(const std::vector<Quat>& q);
// Conjugates so Im q_a is along +z and the next non-parallel Im q_b lies in the x-z plane, x >= 0.
std::vector<Quat> gauge_fix(const std::vector<Quat>& q);
// Traces of the generators, then of q_i q_j for i < j, rounded to 1e-6.
std::vector<double> fingerprint(const std::vector<Quat>& q);

// One damped Gauss-Newton solve from a start; returns a polished unit solution
// with every relator equal to +1, or nullopt.
std::optional<std::vector<Quat>> solve_from(const GroupPresentation& p, std::vector<Quat> start);

std::vector<RepOrbit> solve_reps(const GroupPresentation& p, const SolveOptions& opts = {});

// su(2) -> su(2)^g -> su(2)^r at rho.
ThreeTermComplex fox_complex(const GroupPresentation& p, const std::vector<Quat>& rho);
TwistedCohomology twisted_cohomology(const GroupPresentation& p, const std::vector<Quat>& rho);

// Linearization of the relator defects under q_i -> exp(v_i) q_i.
Matrix fox_matrix(const GroupPresentation& p, const std::vector<Quat>& rho);
Matrix coboundary_matrix(const std::vector<Quat>& rho);

struct LocalChartOptions {
  double radius = 0.1;
  int order = 3;
  bool allow_reducible = false;
};

// Stacked Im r_j(exp(v_i) rho_i).
std::vector<double> relator_defect(const GroupPresentation& p, const std::vector<Quat>& rho,
                                   const std::vector<double>& v);

KuranishiChart local_chart(const GroupPresentation& p, const RepOrbit& orbit, const LocalChartOptions& opts = {});

struct OrbitCount {
  RepOrbit orbit;
  int count = 0;  // virtual count of the local chart
};

struct CassonResult {
  int N = 0;
  double lambda = 0.0;
  double lambda_abs = 0.0;
  std::vector<int> seed_counts;  // N for each seed tried
  std::vector<OrbitCount> orbits;
};

struct CassonOptions {
  SolveOptions solve;
  std::vector<int> bits;  // per orbit, default +1
  int sigma = 1;
  LocalChartOptions chart;
  CountOptions count;
};

CassonResult casson_count(const GroupPresentation& p, const CassonOptions& opts = {});

}  // namespace kur
