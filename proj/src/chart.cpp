#include "kuranishi/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kuranishi/linalg.hpp"
#include "kuranishi/parallel.hpp"

namespace kur {

namespace {

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double two_norm_sq(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x * x;
  return m;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

}  // namespace

KuranishiChart::KuranishiChart(std::string id, BoxUnion domain, int m, PolyMap section, int orientation,
                               std::vector<FootprintPoint> footprint, std::map<std::string, std::string> metadata)
    : id_(std::move(id)),
      domain_(std::move(domain)),
      m_(m),
      section_(std::move(section)),
      orientation_(orientation),
      footprint_(std::move(footprint)),
      metadata_(std::move(metadata)) {
  if (m_ < 0) throw ChartError("chart " + id_ + ": negative obstruction rank");
  if (section_.n_in() != domain_.dim() || section_.n_out() != m_) {
    std::ostringstream os;
    os << "chart " << id_ << ": section is R^" << section_.n_in() << " -> R^" << section_.n_out()
       << " but domain has dimension " << domain_.dim() << " and m = " << m_;
    throw DimensionError(os.str());
  }
  if (orientation_ != 1 && orientation_ != -1) throw ChartError("chart " + id_ + ": orientation must be +1 or -1");
  for (const auto& p : footprint_) {
    if (static_cast<int>(p.x.size()) != n())
      throw DimensionError("chart " + id_ + ": footprint point " + p.label + " has wrong dimension");
    if (!domain_.contains(p.x)) throw ChartError("chart " + id_ + ": footprint point " + p.label + " is outside the domain");
    const double r = inf_norm(section_.eval(p.x));
    if (r > kZeroTolerance) {
      std::ostringstream os;
      os << "chart " << id_ << ": footprint point " << p.label << " has section residual " << r << " > "
         << kZeroTolerance;
      throw ChartError(os.str());
    }
  }
  for (std::size_t i = 0; i < footprint_.size(); ++i)
    for (std::size_t j = i + 1; j < footprint_.size(); ++j)
      if (footprint_[i].label == footprint_[j].label)
        throw ChartError("chart " + id_ + ": duplicate footprint label " + footprint_[i].label);
  ds_ = jacobian_matrix(section_);
}

const FootprintPoint* KuranishiChart::find(const std::string& label) const {
  for (const auto& p : footprint_)
    if (p.label == label) return &p;
  return nullptr;
}

KuranishiChart KuranishiChart::with_id(std::string id) const {
  return {std::move(id), domain_, m_, section_, orientation_, footprint_, metadata_};
}

KuranishiChart KuranishiChart::with_orientation(int orientation) const {
  return {id_, domain_, m_, section_, orientation, footprint_, metadata_};
}

KuranishiChart KuranishiChart::with_footprint(std::vector<FootprintPoint> footprint) const {
  return {id_, domain_, m_, section_, orientation_, std::move(footprint), metadata_};
}

std::optional<std::vector<double>> newton(const PolyMap& s, const PolyMatrix& ds, std::vector<double> x,
                                          const NewtonOptions& opts) {
  std::vector<double> r = s.eval(x);
  double res = two_norm_sq(r);
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (res == 0.0) break;
    const Matrix j = eval_matrix(ds, x);
    const Vector dx = j.completeOrthogonalDecomposition().solve(-to_vector(r));
    if (!dx.allFinite()) break;
    const double xnorm = inf_norm(x);
    if (dx.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + xnorm)) break;

    // Halve the step until the residual decreases.
    double lambda = 1.0;
    bool accepted = false;
    std::vector<double> trial(x.size());
    for (int h = 0; h < 40; ++h, lambda *= 0.5) {
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] + lambda * dx(static_cast<Eigen::Index>(k));
      auto tr = s.eval(trial);
      const double tres = two_norm_sq(tr);
      if (tres < res) {
        x = trial;
        r = std::move(tr);
        res = tres;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (inf_norm(x) > 1e8) return std::nullopt;
  }
  if (inf_norm(r) < opts.converged && inf_norm(r) <= kZeroTolerance) return x;
  return std::nullopt;
}

std::vector<Zero> solve_square(const PolyMap& s, const BoxUnion& domain, int density, std::uint64_t seed,
                               bool keep_outside, const NewtonOptions& opts) {
  if (s.n_in() != s.n_out()) throw DimensionError("solve_square: system is not square");
  if (s.n_in() != domain.dim()) throw DimensionError("solve_square: domain dimension mismatch");
  const PolyMatrix ds = jacobian_matrix(s);
  const auto seeds = sample(domain, density, seed);

  std::vector<std::optional<std::vector<double>>> limits(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) { limits[i] = newton(s, ds, seeds[i], opts); });

  std::vector<std::vector<double>> found;
  for (auto& l : limits)
    if (l) found.push_back(std::move(*l));
  std::sort(found.begin(), found.end());

  std::vector<Zero> zeros;
  for (auto& x : found) {
    const bool dup = std::any_of(zeros.begin(), zeros.end(),
                                 [&](const Zero& z) { return distance(z.x, x) <= opts.dedupe; });
    if (dup) continue;
    const bool inside = domain.contains(x);
    if (!inside && !keep_outside) continue;
    Zero z;
    z.det = s.n_in() == 0 ? 1.0 : eval_matrix(ds, x).determinant();
    z.degenerate = !(std::abs(z.det) > kDegenerateDet);
    z.sign = z.degenerate ? 0 : (z.det > 0 ? 1 : -1);
    z.inside = inside;
    z.x = std::move(x);
    zeros.push_back(std::move(z));
  }
  return zeros;
}

std::vector<Zero> find_zeros(const KuranishiChart& chart, int seeds_density, std::uint64_t seed) {
  if (chart.n() != chart.m()) throw DimensionError("find_zeros: chart " + chart.id() + " is not square (n != m)");
  return solve_square(chart.section(), chart.domain(), seeds_density, seed);
}

}  // namespace kur
