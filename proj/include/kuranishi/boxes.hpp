#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kur {

// Open axis-aligned box. A zero-dimensional box is the single point of R^0.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> x) const;

  friend bool operator==(const Box&, const Box&) = default;
};

// Finite union of open boxes of a common dimension.
class BoxUnion {
 public:
  BoxUnion() = default;
  BoxUnion(int dim, std::vector<Box> boxes);

  static BoxUnion cube(int dim, double half_width);
  static BoxUnion single(Box b);
  static BoxUnion point() { return cube(0, 0.0); }

  int dim() const { return dim_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }

  bool contains(std::span<const double> x) const;
  // True when every point within `margin` (per axis) of x is still in the union.
  bool contains_with_margin(std::span<const double> x, double margin) const;
  // Largest distance to the complement, approximated axis-wise.
  double depth(std::span<const double> x) const;

  friend bool operator==(const BoxUnion&, const BoxUnion&) = default;

 private:
  int dim_ = 0;
  std::vector<Box> boxes_;
};

BoxUnion intersect(const BoxUnion& a, const BoxUnion& b);
// Cartesian product; dimension dim_a + dim_b.
BoxUnion product(const BoxUnion& a, const BoxUnion& b);

// Deterministic low-discrepancy sample: density^dim scrambled Halton points per
// box, all strictly inside their box. Identical arguments give identical output,
// and the first density^dim points for a box do not depend on larger densities
// only through the count (sample(d) is a prefix-subset of sample(2d) per box).
std::vector<std::vector<double>> sample(const BoxUnion& dom, int density, std::uint64_t seed);

// Radical inverse of index in the given prime base, shifted by a seed-derived
// rotation; values lie in (0, 1).
double halton(std::uint64_t index, int axis, std::uint64_t seed);

}  // namespace kur
