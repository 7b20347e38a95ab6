#include "kuranishi/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kuranishi/polymap.hpp"

namespace kur {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
constexpr std::size_t kMaxSamplesPerBox = std::size_t{1} << 22;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

bool Box::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw DimensionError("Box::contains: dimension mismatch");
  for (int k = 0; k < dim(); ++k)
    if (!(x[k] > lo[k] && x[k] < hi[k])) return false;
  return true;
}

BoxUnion::BoxUnion(int dim, std::vector<Box> boxes) : dim_(dim), boxes_(std::move(boxes)) {
  if (dim < 0) throw DimensionError("BoxUnion: negative dimension");
  for (const auto& b : boxes_) {
    if (b.dim() != dim || static_cast<int>(b.hi.size()) != dim)
      throw DimensionError("BoxUnion: box dimension differs from union dimension");
    for (int k = 0; k < dim; ++k)
      if (!(b.lo[k] < b.hi[k])) throw std::invalid_argument("BoxUnion: box with lo >= hi");
  }
}

BoxUnion BoxUnion::cube(int dim, double half_width) {
  return BoxUnion(dim, {Box{std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width)}});
}

BoxUnion BoxUnion::single(Box b) {
  const int d = b.dim();
  return BoxUnion(d, {std::move(b)});
}

bool BoxUnion::contains(std::span<const double> x) const {
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(x); });
}

bool BoxUnion::contains_with_margin(std::span<const double> x, double margin) const {
  if (!contains(x)) return false;
  std::vector<double> y(x.begin(), x.end());
  for (int k = 0; k < dim_; ++k)
    for (double s : {-margin, margin}) {
      y[k] = x[k] + s;
      if (!contains(y)) return false;
      y[k] = x[k];
    }
  return true;
}

double BoxUnion::depth(std::span<const double> x) const {
  double best = 0.0;
  for (const auto& b : boxes_) {
    if (!b.contains(x)) continue;
    double d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dim_; ++k) d = std::min({d, x[k] - b.lo[k], b.hi[k] - x[k]});
    best = std::max(best, d);
  }
  return best;
}

BoxUnion intersect(const BoxUnion& a, const BoxUnion& b) {
  if (a.dim() != b.dim()) throw DimensionError("intersect: dimension mismatch");
  std::vector<Box> out;
  for (const auto& x : a.boxes())
    for (const auto& y : b.boxes()) {
      Box z{std::vector<double>(a.dim()), std::vector<double>(a.dim())};
      bool nonempty = true;
      for (int k = 0; k < a.dim(); ++k) {
        z.lo[k] = std::max(x.lo[k], y.lo[k]);
        z.hi[k] = std::min(x.hi[k], y.hi[k]);
        if (!(z.lo[k] < z.hi[k])) nonempty = false;
      }
      if (nonempty && std::find(out.begin(), out.end(), z) == out.end()) out.push_back(std::move(z));
    }
  return BoxUnion(a.dim(), std::move(out));
}

BoxUnion product(const BoxUnion& a, const BoxUnion& b) {
  std::vector<Box> out;
  for (const auto& x : a.boxes())
    for (const auto& y : b.boxes()) {
      Box z = x;
      z.lo.insert(z.lo.end(), y.lo.begin(), y.lo.end());
      z.hi.insert(z.hi.end(), y.hi.begin(), y.hi.end());
      out.push_back(std::move(z));
    }
  return BoxUnion(a.dim() + b.dim(), std::move(out));
}

double halton(std::uint64_t index, int axis, std::uint64_t seed) {
  if (axis < 0 || axis >= static_cast<int>(std::size(kPrimes)))
    throw std::out_of_range("halton: dimension too large for the prime table");
  const std::uint64_t base = kPrimes[axis];
  double f = 1.0;
  double r = 0.0;
  for (std::uint64_t i = index; i > 0; i /= base) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
  }
  if (seed != 0) {
    // Cranley-Patterson rotation by a seed-dependent shift.
    const std::uint64_t h = splitmix64(seed * 0x100000001B3ULL + static_cast<std::uint64_t>(axis));
    const double shift = static_cast<double>(h >> 11) * 0x1.0p-53;
    r += shift;
    r -= std::floor(r);
    if (r <= 0.0) r = 0.5 * f;
  }
  return r;
}

std::vector<std::vector<double>> sample(const BoxUnion& dom, int density, std::uint64_t seed) {
  if (density < 1) throw std::invalid_argument("sample: density must be >= 1");
  if (dom.empty()) throw std::invalid_argument("sample: empty BoxUnion");
  const int n = dom.dim();
  std::size_t count = 1;
  for (int k = 0; k < n; ++k) {
    count *= static_cast<std::size_t>(density);
    if (count > kMaxSamplesPerBox) throw std::invalid_argument("sample: density^dim too large");
  }
  std::vector<std::vector<double>> pts;
  pts.reserve(count * dom.boxes().size());
  for (std::size_t b = 0; b < dom.boxes().size(); ++b) {
    const Box& box = dom.boxes()[b];
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> x(n);
      for (int k = 0; k < n; ++k) {
        const double u = halton(i + 1, k, seed + 7919 * b);
        x[k] = box.lo[k] + u * (box.hi[k] - box.lo[k]);
      }
      pts.push_back(std::move(x));
    }
  }
  return pts;
}

}  // namespace kur
