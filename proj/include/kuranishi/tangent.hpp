#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kuranishi/atlas.hpp"
#include "kuranishi/linalg.hpp"

namespace kur {

struct ComplexError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kRankTolerance = 1e-8;

// R^a --d0--> R^b --d1--> R^c with entries polynomial in the base chart coordinates.
struct ThreeTermComplex {
  int a = 0, b = 0, c = 0;
  PolyMatrix d0;  // b x a
  PolyMatrix d1;  // c x b
  std::string base;

  // Largest |d1 d0| entry at x.
  double defect(std::span<const double> x) const;
};

// Builds and validates d1 d0 = 0 (1e-7) at every point in `points`.
ThreeTermComplex make_complex(PolyMatrix d0, PolyMatrix d1, std::string base,
                              const std::vector<std::vector<double>>& points, double tol = 1e-7);
// Constant complex (no base coordinates).
ThreeTermComplex constant_complex(const Matrix& d0, const Matrix& d1, std::string base, double tol = 1e-7);

// Cone(df, fhat): R^{n_a} -> R^{m_a} (+) R^{n_b} -> R^{m_b}, validated at the
// footprint of a.
ThreeTermComplex cone(const ChartMorphism& m, const KuranishiChart& a, const KuranishiChart& b);

struct TangentRanks {
  int t0 = 0, t1 = 0, t2 = 0;
  bool borderline = false;  // some singular value fell within [tol/10, 10 tol]

  friend bool operator==(const TangentRanks&, const TangentRanks&) = default;
};

TangentRanks cohomology_ranks(const ThreeTermComplex& c, std::span<const double> x, double tol = kRankTolerance);
TangentRanks cohomology_ranks(const Matrix& d0, const Matrix& d1, double tol = kRankTolerance);

// Orthonormal basis of the harmonic representatives ker d_out cap (im d_in)^perp.
Matrix harmonic_basis(const Matrix& d_in, const Matrix& d_out, int dim, double tol = kRankTolerance);

// Morphism of cones C_i -> C_j induced by a transition of X and h.
struct ConeTransition {
  std::string i, j;
  ThreeTermComplex source, target;
  PolyMatrix layer0;  // n_j x n_i, over x_i
  PolyMatrix layer1;  // (m_j + n_tj) x (m_i + n_ti), over x_i
  PolyMatrix layer2;  // m_tj x m_ti, over x_i
};

// Throws ComplexError naming the square and residual if the layers do not
// commute with d0, d1 at the footprint points of U_ij (unless validate = false).
ConeTransition cone_transition(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y,
                               const std::string& i, const std::string& j, bool validate = true);

// Commutation residuals of a cone transition as a report.
Report check_cone_transition(const ConeTransition& t, const KuranishiAtlas& x);

// T_ik and T_jk o T_ij induce the same maps on cohomology at every point of U_ijk.
Report check_weak_cocycle(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y,
                          const std::string& i, const std::string& j, const std::string& k);

// h : X -> R^N (target atlas with one chart, m = 0): (a) t0 = t2 = 0, (b) t1 = N - vdim
// everywhere, (c) injective on the footprint.
Report check_embedding(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y);

// Per footprint label and chart, the cone ranks of h.
struct TangentRow {
  std::string chart;
  std::string label;
  TangentRanks ranks;
};
std::vector<TangentRow> tangent_table(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y);

// The manifold atlas R^N (single chart "R^N", m = 0) whose footprint is the
// image of X under h. Chart coordinates are computed from h.
KuranishiAtlas euclidean_target(int N, const StrictMorphism& h, const KuranishiAtlas& x, double half_width = 1e6);

struct Embedding {
  KuranishiAtlas source;
  KuranishiAtlas target;
  StrictMorphism h;
};

// Single-chart atlas of c mapped into R^n by the identity of coordinates.
Embedding canonical_inclusion(const KuranishiChart& c);

}  // namespace kur
