#include "kuranishi/vfc.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace kur {

namespace {

bool in_shell(const BoxUnion& dom, const std::vector<double>& x, double margin) {
  if (dom.contains_with_margin(x, margin)) return false;
  for (const auto& b : dom.boxes()) {
    bool near = true;
    for (int k = 0; k < b.dim(); ++k)
      if (!(x[k] > b.lo[k] - margin && x[k] < b.hi[k] + margin)) near = false;
    if (near) return true;
  }
  return false;
}

std::string point_string(const std::vector<double>& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

void require_compact(const std::vector<Zero>& zeros, const KuranishiChart& c, double margin, const char* which) {
  for (const auto& z : zeros)
    if (in_shell(c.domain(), z.x, margin))
      throw CompactnessError("chart " + c.id() + ": " + which + " has a zero at " + point_string(z.x) +
                             " within margin " + std::to_string(margin) + " of the domain boundary");
}

}  // namespace

int default_density(int dim) {
  if (dim <= 0) return 1;
  if (dim == 1) return 64;
  if (dim == 2) return 16;
  if (dim == 3) return 8;
  return std::max(2, static_cast<int>(std::floor(std::pow(4096.0, 1.0 / dim))));
}

SignedCount perturb_and_count(const KuranishiChart& chart, const CountOptions& opts) {
  if (chart.vdim() != 0)
    throw DimensionError("perturb_and_count: chart " + chart.id() + " has vdim " + std::to_string(chart.vdim()));
  if (!(opts.eps > 0.0)) throw std::invalid_argument("perturb_and_count: eps must be positive");
  const int n = chart.n();
  SignedCount out;
  if (n == 0) {
    out.value = chart.orientation();
    (out.value > 0 ? out.plus : out.minus) = 1;
    out.attempts = 1;
    out.zeros.push_back(Zero{{}, 1.0, 1, false, true});
    return out;
  }
  const int density = opts.density > 0 ? opts.density : default_density(n);
  require_compact(solve_square(chart.section(), chart.domain(), density, opts.seed, true), chart, opts.margin,
                  "the section");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 1; attempt <= opts.max_attempts; ++attempt) {
    std::vector<double> c(n);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : c) {
        v = normal(rng);
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& v : c) v *= opts.eps / norm;

    const PolyMap perturbed = subtract(chart.section(), PolyMap::constant(n, c));
    const auto zeros = solve_square(perturbed, chart.domain(), density, opts.seed, true);
    require_compact(zeros, chart, opts.margin, "the perturbed section");

    SignedCount sc;
    sc.perturbation = c;
    sc.attempts = attempt;
    for (const auto& z : zeros) {
      if (!z.inside) continue;
      if (z.degenerate) ++sc.degenerate_zeros;
      else if (z.sign * chart.orientation() > 0) ++sc.plus;
      else ++sc.minus;
      sc.zeros.push_back(z);
    }
    sc.value = sc.plus - sc.minus;
    if (sc.certified()) return sc;
    out = std::move(sc);
  }
  throw DegeneratePerturbationError("perturb_and_count: chart " + chart.id() + " still has degenerate zeros after " +
                                    std::to_string(opts.max_attempts) + " perturbations");
}

VirtualCount virtual_count(const KuranishiAtlas& atlas, const CountOptions& opts) {
  if (atlas.vdim() != 0) throw DimensionError("virtual_count: atlas vdim is " + std::to_string(atlas.vdim()));
  const auto& charts = atlas.charts();
  if (charts.empty()) throw UnsupportedRegimeError("virtual_count: atlas has no charts");
  if (charts.size() == 1) return VirtualCount{perturb_and_count(charts.front(), opts), "single", charts.front().id()};

  bool disjoint = true;
  std::set<std::string> seen;
  for (const auto& c : charts)
    for (const auto& p : c.footprint())
      if (!seen.insert(p.label).second) disjoint = false;
  if (disjoint) {
    VirtualCount vc;
    vc.regime = "disjoint";
    vc.count.attempts = 0;
    for (const auto& c : charts) {
      const SignedCount sc = perturb_and_count(c, opts);
      vc.count.plus += sc.plus;
      vc.count.minus += sc.minus;
      vc.count.degenerate_zeros += sc.degenerate_zeros;
      vc.count.attempts = std::max(vc.count.attempts, sc.attempts);
      vc.count.perturbation.insert(vc.count.perturbation.end(), sc.perturbation.begin(), sc.perturbation.end());
      vc.count.zeros.insert(vc.count.zeros.end(), sc.zeros.begin(), sc.zeros.end());
    }
    vc.count.value = vc.count.plus - vc.count.minus;
    return vc;
  }

  const std::set<std::string> all(atlas.footprint().begin(), atlas.footprint().end());
  for (const auto& c : charts) {
    std::set<std::string> mine;
    for (const auto& p : c.footprint()) mine.insert(p.label);
    if (mine != all) continue;
    const Report r = check_atlas(atlas);
    if (!r.passed())
      throw UnsupportedRegimeError("virtual_count: chart " + c.id() +
                                   " dominates but the atlas fails validation; unsupported regime");
    return VirtualCount{perturb_and_count(c, opts), "dominated", c.id()};
  }
  throw UnsupportedRegimeError(
      "virtual_count: unsupported regime (overlapping charts and no chart covers the whole footprint)");
}

KuranishiChart ChartFamily::slice(double t) const {
  if (section.n_in() != domain.dim() + 1)
    throw DimensionError("family " + id + ": section must take (x, t)");
  std::ostringstream os;
  os << id << "@t=" << t;
  return KuranishiChart(os.str(), domain, m, fix_last_variable(section, t), orientation, {});
}

SweepResult deformation_sweep(const ChartFamily& family, int grid, const CountOptions& opts) {
  if (grid < 2) throw std::invalid_argument("deformation_sweep: grid must have at least 2 points");
  SweepResult out;
  std::optional<int> common;
  bool ok = true;
  for (int k = 0; k < grid; ++k) {
    SweepSlice s;
    s.t = static_cast<double>(k) / (grid - 1);
    try {
      s.count = perturb_and_count(family.slice(s.t), opts);
      if (!common) common = s.count->value;
      if (*common != s.count->value) ok = false;
    } catch (const std::exception& e) {
      s.error = e.what();
      ok = false;
    }
    out.slices.push_back(std::move(s));
  }
  out.invariant = ok;
  return out;
}

KuranishiChart fiber_product(const KuranishiChart& x, const PolyMap& gx, const KuranishiChart& y, const PolyMap& gy) {
  if (gx.n_in() != x.n() || gy.n_in() != y.n() || gx.n_out() != gy.n_out())
    throw DimensionError("fiber_product: base maps must share a target R^k and match the chart dimensions");
  const int nx = x.n(), ny = y.n(), k = gx.n_out();
  PolyMap s = stack(embed_inputs(x.section(), 0, ny), embed_inputs(y.section(), nx, 0));
  s = stack(s, subtract(embed_inputs(gx, 0, ny), embed_inputs(gy, nx, 0)));
  std::vector<FootprintPoint> fp;
  for (const auto& p : x.footprint())
    for (const auto& q : y.footprint()) {
      const auto a = gx.eval(p.x);
      const auto b = gy.eval(q.x);
      double d = 0.0;
      for (int i = 0; i < k; ++i) d = std::max(d, std::abs(a[i] - b[i]));
      if (d > kPointTolerance) continue;
      std::vector<double> z = p.x;
      z.insert(z.end(), q.x.begin(), q.x.end());
      fp.push_back({p.label + "*" + q.label, std::move(z)});
    }
  return KuranishiChart(x.id() + "x" + y.id(), product(x.domain(), y.domain()), x.m() + y.m() + k, std::move(s),
                        x.orientation() * y.orientation(), std::move(fp));
}

int intersection_number(const KuranishiChart& x, const PolyMap& gx, const KuranishiChart& y, const PolyMap& gy,
                        const CountOptions& opts) {
  if (x.m() != 0 || y.m() != 0) throw std::invalid_argument("intersection_number: charts must be manifolds (m = 0)");
  if (x.n() + y.n() != gx.n_out())
    throw DimensionError("intersection_number: dimensions are not complementary in the base");
  return perturb_and_count(fiber_product(x, gx, y, gy), opts).value;
}

}  // namespace kur
