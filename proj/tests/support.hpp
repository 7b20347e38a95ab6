#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "kuranishi/atlas.hpp"
#include "kuranishi/json_io.hpp"
#include "kuranishi/linf.hpp"
#include "kuranishi/quaternion.hpp"
#include "kuranishi/su2rep.hpp"
#include "kuranishi/tangent.hpp"
#include "kuranishi/vfc.hpp"

namespace kt {

using namespace kur;

struct Term {
  double c;
  Monomial e;
};

// Builds a map from per-coordinate term lists.
PolyMap pm(int n_in, const std::vector<std::vector<Term>>& coords);
// Matrix-valued map, entries row-major.
PolyMatrix pmat(int n_in, int rows, int cols, const std::vector<std::vector<Term>>& entries);
PolyMatrix cmat(int n_in, int rows, int cols, const std::vector<double>& values);

std::string fixture(const std::string& name);
KuranishiAtlas load_atlas(const std::string& name);
KuranishiChart load_chart(const std::string& name);
GroupPresentation load_presentation(const std::string& name);

// Random map with integer-ish coefficients in [-2, 2], degree <= max_degree.
PolyMap random_polymap(std::mt19937_64& rng, int n_in, int n_out, int max_degree, int terms);

// Central differences of p at x, row-major n_out x n_in.
std::vector<double> fd_jacobian(const PolyMap& p, const std::vector<double>& x, double h = 1e-5);

// The 120 unit quaternions of the binary icosahedral group.
std::vector<Quat> binary_icosahedral();

// Irreducible homomorphisms <s,t | R> -> G for a finite G, up to SU(2)
// conjugation, identified by their character (tr s, tr t, tr st) rounded to 1e-6.
std::vector<std::array<double, 3>> finite_group_characters(const GroupPresentation& p, const std::vector<Quat>& group);

// Irreducible SU(2) characters of a two-generator presentation with (tr s, tr t, tr st)
// restricted to {2 cos(pi k / n)} for the given n per slot: each candidate is
// realized by explicit quaternions and kept if every relator evaluates to +1.
std::vector<std::array<double, 3>> trace_grid_characters(const GroupPresentation& p, std::array<int, 3> n);

std::array<double, 3> character(const std::vector<Quat>& q);

// A valid chart morphism between linear charts with random (often deficient)
// ranks, and its cone at the footprint point.
struct RandomCone {
  KuranishiChart a, b;
  ChartMorphism m;
  ThreeTermComplex cone;
};
RandomCone random_cone(std::mt19937_64& rng);

// L-infinity chart with h1 = h2 built from a random symmetric tensor T of each
// order k + 1 and a random invertible pairing P by l_k(x^k) = (P^T)^-1 T(x^k, .),
// so its potential is sum_k T(x^(k+1)) / (k+1)!, returned alongside.
struct RandomLinf {
  LinfChart chart;
  PolyMap f;
};
RandomLinf random_linf(std::mt19937_64& rng);

// Single-datum corruptions of the two-chart fixture, each paired with the
// condition it must trip.
struct Corruption {
  std::string what;
  std::string condition;
  json atlas;
};
std::vector<Corruption> two_chart_corruptions();

// Second strict morphism of the two-chart atlas into itself: A -> A, B -> A.
StrictMorphism collapse_to_a(const KuranishiAtlas& x);
StrictMorphism identity_strict(const KuranishiAtlas& x);

}  // namespace kt
