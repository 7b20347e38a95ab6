#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kuranishi/atlas.hpp"

namespace kur {

struct CompactnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegeneratePerturbationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedRegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signed zero count of a perturbed section of a vdim-0 chart.
struct SignedCount {
  int plus = 0;
  int minus = 0;
  int value = 0;
  int degenerate_zeros = 0;
  std::vector<double> perturbation;
  int attempts = 0;
  std::vector<Zero> zeros;

  bool certified() const { return degenerate_zeros == 0; }
};

struct CountOptions {
  double eps = 1e-3;
  std::uint64_t seed = 0;
  double margin = 0.1;
  int density = 0;  // Newton seeds per axis per box; 0 picks a default from the dimension
  int max_attempts = 10;
};

// Seeds per axis used when CountOptions::density is 0.
int default_density(int dim);

// Zeros of s - c for a pseudo-random constant c (|c| = eps) drawn from the
// seed stream; retried with a fresh c while some zero is degenerate. Throws
// CompactnessError if s or s - c has a zero within `margin` of the boundary.
SignedCount perturb_and_count(const KuranishiChart& chart, const CountOptions& opts = {});

struct VirtualCount {
  SignedCount count;
  std::string regime;  // "single", "disjoint", "dominated"
  std::string chart;   // chart counted (dominated / single)
};

VirtualCount virtual_count(const KuranishiAtlas& atlas, const CountOptions& opts = {});

// Section in (x, t) with t the last input; domain is in x only.
struct ChartFamily {
  std::string id;
  BoxUnion domain;
  int m = 0;
  PolyMap section;
  int orientation = 1;

  KuranishiChart slice(double t) const;
};

struct SweepSlice {
  double t = 0.0;
  std::optional<SignedCount> count;
  std::string error;
};

struct SweepResult {
  std::vector<SweepSlice> slices;
  bool invariant = false;  // every slice certified with one common value
};

// grid >= 2 points t_k = k / (grid - 1).
SweepResult deformation_sweep(const ChartFamily& family, int grid, const CountOptions& opts = {});

// X x_{R^k} Y: domain V_X x V_Y, section (s_X(x), s_Y(y), gX(x) - gY(y)),
// orientation o_X o_Y. Footprint: label pairs "lx*ly" with equal base images.
KuranishiChart fiber_product(const KuranishiChart& x, const PolyMap& gx, const KuranishiChart& y, const PolyMap& gy);

int intersection_number(const KuranishiChart& x, const PolyMap& gx, const KuranishiChart& y, const PolyMap& gy,
                        const CountOptions& opts = {});

}  // namespace kur
