#include "kuranishi/tangent.hpp"

#include <set>
#include <sstream>

#include "check_util.hpp"

namespace kur {

using detail::at;
using detail::max_abs;
using detail::Tally;

namespace {

PolyMatrix to_poly(const Matrix& m) {
  std::vector<double> v(static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = m(r, c);
  return PolyMatrix::constant(0, static_cast<int>(m.rows()), static_cast<int>(m.cols()), v);
}

bool near_threshold(const Matrix& m, double tol) {
  const Vector s = singular_values(m);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) >= tol / 10 && s(i) <= tol * 10) return true;
  return false;
}

std::vector<std::vector<double>> footprint_coords(const KuranishiChart& c) {
  std::vector<std::vector<double>> pts;
  for (const auto& p : c.footprint()) pts.push_back(p.x);
  return pts;
}

const std::vector<double>& coords(const KuranishiChart& c, const std::string& label) {
  const FootprintPoint* p = c.find(label);
  if (!p) throw ChartError("chart '" + c.id() + "' has no footprint point '" + label + "'");
  return p->x;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

double ThreeTermComplex::defect(std::span<const double> x) const {
  const std::vector<double> pt(x.begin(), x.end());
  return max_abs(Matrix(at(d1, pt) * at(d0, pt)));
}

ThreeTermComplex make_complex(PolyMatrix d0, PolyMatrix d1, std::string base,
                              const std::vector<std::vector<double>>& points, double tol) {
  if (d1.cols != d0.rows || d0.n_in() != d1.n_in())
    throw DimensionError("three-term complex: d1 must be c x b and d0 b x a over the same coordinates");
  ThreeTermComplex c{d0.cols, d0.rows, d1.rows, std::move(d0), std::move(d1), std::move(base)};
  for (const auto& x : points) {
    const double r = c.defect(x);
    if (!(r <= tol)) throw ComplexError("complex over " + c.base + ": d1 d0 = " + fmt(r) + " != 0 at a footprint point");
  }
  return c;
}

ThreeTermComplex constant_complex(const Matrix& d0, const Matrix& d1, std::string base, double tol) {
  return make_complex(to_poly(d0), to_poly(d1), std::move(base), {std::vector<double>{}}, tol);
}

ThreeTermComplex cone(const ChartMorphism& m, const KuranishiChart& a, const KuranishiChart& b) {
  if (m.f.n_in() != a.n() || m.f.n_out() != b.n() || m.fhat.rows != b.m() || m.fhat.cols != a.m())
    throw DimensionError("cone: morphism shape does not match the charts");
  PolyMatrix d0 = vstack(a.section_jacobian(), jacobian_matrix(m.f));
  PolyMatrix d1 = hstack(m.fhat, scale(compose(b.section_jacobian(), m.f), -1.0));
  return make_complex(std::move(d0), std::move(d1), a.id(), footprint_coords(a));
}

TangentRanks cohomology_ranks(const Matrix& d0, const Matrix& d1, double tol) {
  const int a = static_cast<int>(d0.cols()), b = static_cast<int>(d0.rows()), c = static_cast<int>(d1.rows());
  if (d1.cols() != b) throw DimensionError("cohomology_ranks: d1 must have b columns");
  const int r0 = numerical_rank(d0, tol);
  const int r1 = numerical_rank(d1, tol);
  return TangentRanks{a - r0, b - r1 - r0, c - r1, near_threshold(d0, tol) || near_threshold(d1, tol)};
}

TangentRanks cohomology_ranks(const ThreeTermComplex& c, std::span<const double> x, double tol) {
  const std::vector<double> pt(x.begin(), x.end());
  return cohomology_ranks(at(c.d0, pt), at(c.d1, pt), tol);
}

Matrix harmonic_basis(const Matrix& d_in, const Matrix& d_out, int dim, double tol) {
  Matrix stacked(d_out.rows() + d_in.cols(), dim);
  if (d_out.rows() > 0) stacked.topRows(d_out.rows()) = d_out;
  if (d_in.cols() > 0) stacked.bottomRows(d_in.cols()) = d_in.transpose();
  if (stacked.rows() == 0) return Matrix::Identity(dim, dim);
  return kernel_basis(stacked, tol);
}

ConeTransition cone_transition(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y,
                               const std::string& i, const std::string& j, bool validate) {
  const auto tij = x.transition(i, j);
  if (!tij) throw ComplexError("cone_transition: no transition " + i + "->" + j);
  const std::string ti = h.tau.at(i), tj = h.tau.at(j);
  const auto ty = y.transition(ti, tj);
  if (!ty) throw ComplexError("cone_transition: target has no transition " + ti + "->" + tj);
  const auto &ci = x.chart(i), &cj = x.chart(j), &cti = y.chart(ti), &ctj = y.chart(tj);
  const ChartMorphism& hi = h.maps.at(i);
  const ChartMorphism& hj = h.maps.at(j);

  ConeTransition t{i, j, cone(hi, ci, cti), cone(hj, cj, ctj), {}, {}, {}};
  t.layer0 = jacobian_matrix(tij->morphism.f);
  const PolyMatrix dfy = compose(jacobian_matrix(ty->morphism.f), hi.f);
  const PolyMatrix top = hstack(tij->morphism.fhat, PolyMatrix::zero(ci.n(), cj.m(), cti.n()));
  const PolyMatrix bottom = hstack(scale(h.delta(i, j, x, y).lam, -1.0), dfy);
  t.layer1 = vstack(top, bottom);
  t.layer2 = compose(ty->morphism.fhat, hi.f);
  if (validate) {
    const Report r = check_cone_transition(t, x);
    for (const auto& c : r.checks)
      if (!c.passed)
        throw ComplexError("cone transition " + i + "->" + j + ": " + c.condition + " square does not commute (" +
                           fmt(c.residual) + ", " + c.detail + ")");
  }
  return t;
}

Report check_cone_transition(const ConeTransition& t, const KuranishiAtlas& x) {
  const auto& ci = x.chart(t.i);
  const auto& cj = x.chart(t.j);
  const std::string subject = t.i + "->" + t.j;
  Tally upper{"d0", subject, 1e-7};
  Tally lower{"d1", subject, 1e-7};
  for (const auto& lab : x.overlap(t.i, t.j)) {
    const auto& xi = coords(ci, lab);
    const auto& xj = coords(cj, lab);
    const Matrix l0 = at(t.layer0, xi), l1 = at(t.layer1, xi), l2 = at(t.layer2, xi);
    upper.see(max_abs(Matrix(l1 * at(t.source.d0, xi) - at(t.target.d0, xj) * l0)), "at '" + lab + "'");
    lower.see(max_abs(Matrix(at(t.target.d1, xj) * l1 - l2 * at(t.source.d1, xi))), "at '" + lab + "'");
  }
  Report r;
  r.add(upper.check());
  r.add(lower.check());
  return r;
}

Report check_weak_cocycle(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y,
                          const std::string& i, const std::string& j, const std::string& k) {
  const ConeTransition tij = cone_transition(h, x, y, i, j, false);
  const ConeTransition tjk = cone_transition(h, x, y, j, k, false);
  const ConeTransition tik = cone_transition(h, x, y, i, k, false);
  const auto &ci = x.chart(i), &cj = x.chart(j), &ck = x.chart(k);
  Tally t{"weak cocycle", "(" + i + "," + j + "," + k + ")", 1e-6};
  for (const auto& lab : x.overlap(i, j, k)) {
    const auto& xi = coords(ci, lab);
    const auto& xj = coords(cj, lab);
    const auto& xk = coords(ck, lab);
    const Matrix d0i = at(tij.source.d0, xi), d1i = at(tij.source.d1, xi);
    const Matrix d0k = at(tik.target.d0, xk), d1k = at(tik.target.d1, xk);
    const Matrix hi[3] = {harmonic_basis(Matrix(0, d0i.cols()).transpose(), d0i, static_cast<int>(d0i.cols())),
                          harmonic_basis(d0i, d1i, static_cast<int>(d0i.rows())),
                          harmonic_basis(d1i, Matrix(0, d1i.rows()), static_cast<int>(d1i.rows()))};
    const Matrix hk[3] = {harmonic_basis(Matrix(0, d0k.cols()).transpose(), d0k, static_cast<int>(d0k.cols())),
                          harmonic_basis(d0k, d1k, static_cast<int>(d0k.rows())),
                          harmonic_basis(d1k, Matrix(0, d1k.rows()), static_cast<int>(d1k.rows()))};
    const PolyMatrix* lij[3] = {&tij.layer0, &tij.layer1, &tij.layer2};
    const PolyMatrix* ljk[3] = {&tjk.layer0, &tjk.layer1, &tjk.layer2};
    const PolyMatrix* lik[3] = {&tik.layer0, &tik.layer1, &tik.layer2};
    for (int layer = 0; layer < 3; ++layer) {
      const Matrix diff = at(*lik[layer], xi) - at(*ljk[layer], xj) * at(*lij[layer], xi);
      const Matrix induced = hk[layer].transpose() * diff * hi[layer];
      t.see(max_abs(induced), "H^" + std::to_string(layer) + " at '" + lab + "'");
    }
  }
  Report r;
  r.add(t.check());
  return r;
}

Report check_embedding(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y) {
  Report r;
  if (y.charts().size() != 1 || y.charts().front().m() != 0)
    throw ChartError("check_embedding: target must be a single manifold chart (m = 0)");
  const auto& target = y.charts().front();
  const int N = target.n();
  const int expected = N - x.vdim();

  Tally ta{"(a) T0=T2=0", "h", 0.0};
  Tally tb{"(b) rank T1", "h", 0.0};
  for (const auto& c : x.charts()) {
    auto it = h.maps.find(c.id());
    if (it == h.maps.end() || h.tau.count(c.id()) == 0) {
      ta.fail("no map for chart " + c.id());
      continue;
    }
    const ThreeTermComplex cc = cone(it->second, c, target);
    for (const auto& p : c.footprint()) {
      const TangentRanks t = cohomology_ranks(cc, p.x);
      const std::string where = c.id() + " at '" + p.label + "'";
      if (t.t0 != 0 || t.t2 != 0) ta.fail("(t0, t2) = (" + std::to_string(t.t0) + ", " + std::to_string(t.t2) + ") on " + where);
      if (t.t1 != expected)
        tb.fail("t1 = " + std::to_string(t.t1) + " but N - vdim = " + std::to_string(expected) + " on " + where);
    }
  }
  r.add(ta.check());
  r.add(tb.check());

  // Image of each label, checked for consistency across charts, then for injectivity.
  Tally tc{"(c) injective", "h", kPointTolerance};
  std::map<std::string, std::vector<double>> image;
  for (const auto& c : x.charts()) {
    auto it = h.maps.find(c.id());
    if (it == h.maps.end()) continue;
    for (const auto& p : c.footprint()) {
      const auto v = it->second.f.eval(p.x);
      auto [slot, fresh] = image.try_emplace(p.label, v);
      if (!fresh) {
        double d = 0.0;
        for (int q = 0; q < N; ++q) d = std::max(d, std::abs(v[q] - slot->second[q]));
        tc.see(d, "charts disagree on the image of '" + p.label + "'");
      }
    }
  }
  for (auto a = image.begin(); a != image.end(); ++a)
    for (auto b = std::next(a); b != image.end(); ++b) {
      double d = 0.0;
      for (int q = 0; q < N; ++q) d = std::max(d, std::abs(a->second[q] - b->second[q]));
      if (d <= kPointTolerance) tc.fail("'" + a->first + "' and '" + b->first + "' have the same image");
    }
  r.add(tc.check());
  return r;
}

std::vector<TangentRow> tangent_table(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y) {
  std::vector<TangentRow> rows;
  for (const auto& c : x.charts()) {
    const auto& m = h.maps.at(c.id());
    const ThreeTermComplex cc = cone(m, c, y.chart(h.tau.at(c.id())));
    for (const auto& p : c.footprint()) rows.push_back({c.id(), p.label, cohomology_ranks(cc, p.x)});
  }
  return rows;
}

KuranishiAtlas euclidean_target(int N, const StrictMorphism& h, const KuranishiAtlas& x, double half_width) {
  const std::string id = "R^" + std::to_string(N);
  std::vector<FootprintPoint> pts;
  std::set<std::string> seen;
  for (const auto& c : x.charts()) {
    auto it = h.maps.find(c.id());
    if (it == h.maps.end()) throw ChartError("euclidean_target: no map for chart " + c.id());
    if (it->second.f.n_out() != N)
      throw DimensionError("euclidean_target: map for chart " + c.id() + " does not land in R^" + std::to_string(N));
    for (const auto& p : c.footprint()) {
      auto pm = h.point_map.find(p.label);
      const std::string label = pm == h.point_map.end() ? p.label : pm->second;
      if (seen.insert(label).second) pts.push_back({label, it->second.f.eval(p.x)});
    }
  }
  KuranishiChart chart(id, BoxUnion::cube(N, half_width), 0, PolyMap(N, 0), 1, std::move(pts));
  return KuranishiAtlas(N, {chart}, {}, {}, {});
}

Embedding canonical_inclusion(const KuranishiChart& c) {
  const int n = c.n();
  const std::string id = "R^" + std::to_string(n);
  KuranishiAtlas source(c.vdim(), {c}, {}, {}, {});
  KuranishiChart t(id, c.domain(), 0, PolyMap(n, 0), 1, c.footprint());
  KuranishiAtlas target(n, {t}, {}, {}, {});
  StrictMorphism h;
  h.tau[c.id()] = id;
  h.maps[c.id()] = ChartMorphism{c.id(), id, PolyMap::identity(n), PolyMatrix::zero(n, 0, c.m())};
  return Embedding{std::move(source), std::move(target), std::move(h)};
}

}  // namespace kur
