#include "kuranishi/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "check_util.hpp"
#include "kuranishi/linalg.hpp"

namespace kur {

using detail::at;
using detail::max_abs;
using detail::Tally;

namespace {

const std::vector<double>& coords_of(const KuranishiChart& c, const std::string& label) {
  const FootprintPoint* p = c.find(label);
  if (!p) throw ChartError("chart '" + c.id() + "' has no footprint point '" + label + "'");
  return p->x;
}

std::string arrow(const std::string& a, const std::string& b) { return a + "->" + b; }

void check_morphism_shape(const KuranishiChart& a, const KuranishiChart& b, const ChartMorphism& m) {
  if (m.f.n_in() != a.n() || m.f.n_out() != b.n() || m.fhat.rows != b.m() || m.fhat.cols != a.m() ||
      m.fhat.n_in() != a.n()) {
    std::ostringstream os;
    os << "morphism " << arrow(a.id(), b.id()) << ": expected f: R^" << a.n() << " -> R^" << b.n() << " and fhat "
       << b.m() << "x" << a.m() << " over R^" << a.n();
    throw DimensionError(os.str());
  }
}

bool in_dom(const BoxUnion& d, const std::vector<double>& x) { return d.contains(x); }

}  // namespace

ChartMorphism identity_morphism(const KuranishiChart& c) {
  return ChartMorphism{c.id(), c.id(), PolyMap::identity(c.n()), PolyMatrix::identity(c.n(), c.m())};
}

ChartMorphism compose(const ChartMorphism& first, const ChartMorphism& second) {
  if (first.f.n_out() != second.f.n_in() || first.fhat.rows != second.fhat.cols)
    throw DimensionError("compose: morphisms are not chainable (" + arrow(first.source, first.target) + ", " +
                         arrow(second.source, second.target) + ")");
  return ChartMorphism{first.source, second.target, compose(second.f, first.f),
                       matmul(compose(second.fhat, first.f), first.fhat)};
}

KHomRep zero_khom(int n_in, int rows, int cols) { return KHomRep{PolyMatrix::zero(n_in, rows, cols)}; }

// ---------------------------------------------------------------- atlas type

KuranishiAtlas::KuranishiAtlas(int vdim, std::vector<KuranishiChart> charts, std::vector<std::string> footprint,
                               std::vector<Transition> transitions, std::vector<TripleDatum> lambdas)
    : vdim_(vdim),
      charts_(std::move(charts)),
      footprint_(std::move(footprint)),
      transitions_(std::move(transitions)),
      lambdas_(std::move(lambdas)) {
  std::set<std::string> ids;
  for (const auto& c : charts_)
    if (!ids.insert(c.id()).second) throw ChartError("atlas: duplicate chart id '" + c.id() + "'");
  if (footprint_.empty()) {
    std::set<std::string> all;
    for (const auto& c : charts_)
      for (const auto& p : c.footprint()) all.insert(p.label);
    footprint_.assign(all.begin(), all.end());
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : transitions_) {
    if (!ids.count(t.i) || !ids.count(t.j))
      throw ChartError("atlas: transition " + arrow(t.i, t.j) + " refers to an unknown chart");
    if (!seen.insert({t.i, t.j}).second) throw ChartError("atlas: duplicate transition " + arrow(t.i, t.j));
    const auto& a = chart(t.i);
    const auto& b = chart(t.j);
    check_morphism_shape(a, b, t.morphism);
    if (t.dom_i.dim() != a.n() || t.dom_j.dim() != b.n())
      throw DimensionError("atlas: transition " + arrow(t.i, t.j) + " domain dimensions do not match the charts");
  }
  for (const auto& l : lambdas_) {
    if (!ids.count(l.i) || !ids.count(l.j) || !ids.count(l.k))
      throw ChartError("atlas: lambda (" + l.i + "," + l.j + "," + l.k + ") refers to an unknown chart");
    const auto& ci = chart(l.i);
    const auto& ck = chart(l.k);
    if (l.lam.lam.rows != ck.n() || l.lam.lam.cols != ci.m() || l.lam.lam.n_in() != ci.n())
      throw DimensionError("atlas: lambda (" + l.i + "," + l.j + "," + l.k + ") must be " + std::to_string(ck.n()) +
                           "x" + std::to_string(ci.m()) + " over R^" + std::to_string(ci.n()));
    if (l.dom && l.dom->dim() != ci.n())
      throw DimensionError("atlas: lambda domain dimension does not match chart " + l.i);
  }
}

const KuranishiChart& KuranishiAtlas::chart(const std::string& id) const {
  for (const auto& c : charts_)
    if (c.id() == id) return c;
  throw ChartError("atlas: unknown chart '" + id + "'");
}

bool KuranishiAtlas::has_chart(const std::string& id) const {
  return std::any_of(charts_.begin(), charts_.end(), [&](const KuranishiChart& c) { return c.id() == id; });
}

std::optional<Transition> KuranishiAtlas::transition(const std::string& i, const std::string& j) const {
  for (const auto& t : transitions_)
    if (t.i == i && t.j == j) return t;
  if (i == j && has_chart(i)) {
    const auto& c = chart(i);
    return Transition{i, i, c.domain(), c.domain(), identity_morphism(c)};
  }
  return std::nullopt;
}

const TripleDatum* KuranishiAtlas::find_lambda(const std::string& i, const std::string& j,
                                               const std::string& k) const {
  for (const auto& l : lambdas_)
    if (l.i == i && l.j == j && l.k == k) return &l;
  return nullptr;
}

KHomRep KuranishiAtlas::lambda(const std::string& i, const std::string& j, const std::string& k) const {
  if (const TripleDatum* d = find_lambda(i, j, k)) return d->lam;
  return zero_khom(chart(i).n(), chart(k).n(), chart(i).m());
}

std::set<std::string> KuranishiAtlas::labels(const std::string& i) const {
  std::set<std::string> out;
  for (const auto& p : chart(i).footprint()) out.insert(p.label);
  return out;
}

std::set<std::string> KuranishiAtlas::overlap(const std::string& i, const std::string& j) const {
  const auto t = transition(i, j);
  if (!t) return {};
  std::set<std::string> out;
  for (const auto& p : chart(i).footprint())
    if (in_dom(t->dom_i, p.x)) out.insert(p.label);
  return out;
}

std::set<std::string> KuranishiAtlas::overlap(const std::string& i, const std::string& j,
                                              const std::string& k) const {
  const auto a = overlap(i, j), b = overlap(j, k), c = overlap(i, k);
  std::set<std::string> out;
  for (const auto& l : a)
    if (b.count(l) && c.count(l)) out.insert(l);
  return out;
}

std::set<std::string> KuranishiAtlas::overlap(const std::string& i, const std::string& j, const std::string& k,
                                              const std::string& l) const {
  const auto a = overlap(i, j, k), b = overlap(i, j, l), c = overlap(i, k, l), d = overlap(j, k, l);
  std::set<std::string> out;
  for (const auto& x : a)
    if (b.count(x) && c.count(x) && d.count(x)) out.insert(x);
  return out;
}

BoxUnion KuranishiAtlas::triple_domain(const std::string& i, const std::string& j, const std::string& k) const {
  if (const TripleDatum* d = find_lambda(i, j, k); d && d->dom) return *d->dom;
  BoxUnion dom = chart(i).domain();
  if (auto t = transition(i, j)) dom = intersect(dom, t->dom_i);
  if (auto t = transition(i, k)) dom = intersect(dom, t->dom_i);
  return dom;
}

KuranishiAtlas KuranishiAtlas::relabeled(const std::map<std::string, std::string>& rename) const {
  auto r = [&](const std::string& id) {
    auto it = rename.find(id);
    return it == rename.end() ? id : it->second;
  };
  std::vector<KuranishiChart> charts;
  for (const auto& c : charts_) charts.push_back(c.with_id(r(c.id())));
  std::vector<Transition> ts;
  for (auto t : transitions_) {
    t.i = r(t.i);
    t.j = r(t.j);
    t.morphism.source = r(t.morphism.source);
    t.morphism.target = r(t.morphism.target);
    ts.push_back(std::move(t));
  }
  std::vector<TripleDatum> ls;
  for (auto l : lambdas_) {
    l.i = r(l.i);
    l.j = r(l.j);
    l.k = r(l.k);
    ls.push_back(std::move(l));
  }
  return KuranishiAtlas(vdim_, std::move(charts), footprint_, std::move(ts), std::move(ls));
}

// ---------------------------------------------------------------- validators

Report check_morphism(const KuranishiChart& a, const KuranishiChart& b, const ChartMorphism& m,
                      const MorphismCheckOptions& opts) {
  check_morphism_shape(a, b, m);
  const std::string subject = arrow(a.id(), b.id());
  Report r;

  const PolyMap lhs = apply(m.fhat, a.section());
  const PolyMap rhs = compose(b.section(), m.f);
  const double res = max_coefficient_difference(lhs, rhs);
  std::string detail;
  if (res > kIdentityTolerance) detail = "fhat*s - f^*s = " + to_string(subtract(lhs, rhs));
  r.add(Check{opts.section_condition, subject, res <= kIdentityTolerance, res, detail});

  Tally fp{opts.footprint_condition, subject, kPointTolerance};
  for (const auto& p : a.footprint()) {
    if (opts.labels && !opts.labels->count(p.label)) continue;
    std::string target = p.label;
    if (opts.point_map) {
      auto it = opts.point_map->find(p.label);
      if (it == opts.point_map->end()) {
        fp.fail("no image declared for footprint point '" + p.label + "'");
        continue;
      }
      target = it->second;
    }
    const FootprintPoint* q = b.find(target);
    if (!q) {
      fp.fail("footprint point '" + target + "' missing in chart " + b.id());
      continue;
    }
    const auto y = m.f.eval(p.x);
    double d = 0.0;
    for (int k = 0; k < b.n(); ++k) d = std::max(d, std::abs(y[k] - q->x[k]));
    fp.see(d, "f moves '" + p.label + "' off its target coordinates");
  }
  r.add(fp.check());
  return r;
}

KHomComparison khom_compare(const KHomRep& l1, const KHomRep& l2, const KuranishiChart& ctx,
                            const std::optional<BoxUnion>& sample_domain,
                            const std::optional<std::set<std::string>>& labels) {
  const PolyMatrix& a = l1.lam;
  const PolyMatrix& b = l2.lam;
  if (a.rows != b.rows || a.cols != b.cols || a.n_in() != b.n_in())
    throw DimensionError("khom_equal: representatives have different shapes");
  if (a.cols != ctx.m() || a.n_in() != ctx.n())
    throw DimensionError("khom_equal: representative does not act on the obstruction space of chart " + ctx.id());
  const PolyMatrix diff = subtract(a, b);
  KHomComparison out;
  const PolyMap on_s = apply(diff, ctx.section());
  const BoxUnion dom = sample_domain ? *sample_domain : ctx.domain();
  if (!dom.empty())
    for (const auto& x : sample(dom, 5, 0)) out.on_section = std::max(out.on_section, max_abs(on_s.eval(x)));
  for (const auto& p : ctx.footprint()) {
    if (labels && !labels->count(p.label)) continue;
    out.on_footprint = std::max(out.on_footprint, max_abs(diff.eval(p.x)));
  }
  out.equal = out.on_section <= kPointTolerance && out.on_footprint <= kPointTolerance;
  return out;
}

bool khom_equal(const KHomRep& l1, const KHomRep& l2, const KuranishiChart& ctx) {
  return khom_compare(l1, l2, ctx).equal;
}

Report check_homotopy(const ChartMorphism& m0, const ChartMorphism& m1, const KHomRep& lam, const KuranishiChart& a,
                      const KuranishiChart& b, const HomotopyCheckOptions& opts) {
  check_morphism_shape(a, b, m0);
  check_morphism_shape(a, b, m1);
  if (lam.lam.rows != b.n() || lam.lam.cols != a.m() || lam.lam.n_in() != a.n())
    throw DimensionError("check_homotopy: Lambda must be " + std::to_string(b.n()) + "x" + std::to_string(a.m()) +
                         " over R^" + std::to_string(a.n()));
  const std::string subject = arrow(a.id(), b.id());
  Report r;

  const PolyMap lhs = subtract(m1.f, m0.f);
  const PolyMap rhs = apply(lam.lam, a.section());
  const double res = max_coefficient_difference(lhs, rhs);
  r.add(Check{opts.condition, subject + " f1-f0=Ls", res <= kIdentityTolerance, res,
              res > kIdentityTolerance ? "f1 - f0 - L s = " + to_string(subtract(lhs, rhs)) : ""});

  const PolyMatrix df0 = jacobian_matrix(m0.f);
  const PolyMatrix df1 = jacobian_matrix(m1.f);
  const PolyMatrix dsb = b.section_jacobian();
  Tally tan{opts.condition, subject + " L ds=df1-df0", kPointTolerance};
  Tally obs{opts.condition, subject + " ds L=fhat1-fhat0", kPointTolerance};
  for (const auto& p : a.footprint()) {
    if (opts.labels && !opts.labels->count(p.label)) continue;
    const Matrix L = at(lam.lam, p.x);
    const Matrix dsa = at(a.section_jacobian(), p.x);
    tan.see(max_abs(L * dsa - (at(df1, p.x) - at(df0, p.x))), "at '" + p.label + "'");
    const auto y = m0.f.eval(p.x);
    obs.see(max_abs(at(dsb, y) * L - (at(m1.fhat, p.x) - at(m0.fhat, p.x))), "at '" + p.label + "'");
  }
  r.add(tan.check());
  r.add(obs.check());
  return r;
}

Report check_family_homotopy(const FamilyHomotopy& fh, const ChartMorphism& m0, const ChartMorphism& m1,
                             const KuranishiChart& a, const KuranishiChart& b) {
  const int n = a.n();
  const int ma = a.m();
  const int mb = b.m();
  const int pairs = ma * (ma - 1) / 2;
  if (fh.F.n_in() != n + 1 || fh.F.n_out() != b.n() || fh.Fhat.rows != mb || fh.Fhat.cols != ma ||
      fh.Fhat.n_in() != n + 1 || fh.lam.rows != b.n() || fh.lam.cols != ma || fh.lam.n_in() != n + 1 ||
      fh.xi.rows != mb || fh.xi.cols != pairs || fh.xi.n_in() != n + 1)
    throw DimensionError("check_family_homotopy: shapes do not match the charts (t is the last input)");
  const std::string subject = arrow(a.id(), b.id());
  Report r;

  double end = 0.0;
  end = std::max(end, max_coefficient_difference(fix_last_variable(fh.F, 0.0), m0.f));
  end = std::max(end, max_coefficient_difference(fix_last_variable(fh.F, 1.0), m1.f));
  end = std::max(end, max_coefficient_difference(fix_last_variable(fh.Fhat.entries, 0.0), m0.fhat.entries));
  end = std::max(end, max_coefficient_difference(fix_last_variable(fh.Fhat.entries, 1.0), m1.fhat.entries));
  r.add(Check{"(a) endpoints", subject, end <= kIdentityTolerance, end, ""});

  const PolyMap sa_t = append_variables(a.section(), 1);
  const double sec = max_coefficient_difference(compose(b.section(), fh.F), apply(fh.Fhat, sa_t));
  r.add(Check{"(b) section", subject, sec <= kIdentityTolerance, sec, ""});

  const double dt = max_coefficient_difference(partial(fh.F, n), apply(fh.lam, sa_t));
  r.add(Check{"(c) dF/dt", subject, dt <= kIdentityTolerance, dt, ""});

  // Column c of Xi(s ^ -): sum over a != c of s_a * Xi(e_a ^ e_c).
  auto pair_index = [ma](int i, int j) {
    int idx = 0;
    for (int p = 0; p < i; ++p) idx += ma - 1 - p;
    return idx + (j - i - 1);
  };
  PolyMap contraction(n + 1, mb * ma);
  for (int c = 0; c < ma; ++c)
    for (int q = 0; q < ma; ++q) {
      if (q == c) continue;
      const double sign = q < c ? 1.0 : -1.0;
      const int col = pair_index(std::min(q, c), std::max(q, c));
      for (int row = 0; row < mb; ++row) {
        const Poly prod = poly_mul(sa_t.coord(q), fh.xi.at(row, col));
        for (const auto& [e, v] : prod) contraction.add_term(row * ma + c, e, sign * v);
      }
    }
  const PolyMatrix dsb_F = compose(b.section_jacobian(), fh.F);
  const PolyMatrix rhs = add(matmul(dsb_F, fh.lam), PolyMatrix(mb, ma, contraction));
  const PolyMap lhs = partial(fh.Fhat.entries, n);
  const PolyMap diff = subtract(lhs, rhs.entries);
  Tally hat{"(c) dFhat/dt", subject, kPointTolerance};
  if (!a.domain().empty()) {
    const BoxUnion xt = product(a.domain(), BoxUnion::cube(1, 0.5));
    for (auto x : sample(xt, 5, 0)) {
      x.back() += 0.5;  // t in (0, 1)
      hat.see(max_abs(diff.eval(x)), "sampled (x, t)");
    }
  }
  r.add(hat.check());
  return r;
}

ExtractedHomotopy extract_homotopy(const FamilyHomotopy& fh) {
  const PolyMap e = integrate_last_variable(fh.lam.entries, 0.0, 1.0);
  return ExtractedHomotopy{KHomRep{PolyMatrix(fh.lam.rows, fh.lam.cols, e)}, true};
}

Report check_atlas(const KuranishiAtlas& atlas) {
  Report r;
  std::vector<std::string> ids;
  for (const auto& c : atlas.charts()) ids.push_back(c.id());

  // (1.)
  for (const auto& c : atlas.charts()) {
    const int d = c.n() - c.m();
    r.add(Check{"(1.) dimension", c.id(), d == atlas.vdim(), static_cast<double>(std::abs(d - atlas.vdim())),
                d == atlas.vdim() ? "" : "n - m = " + std::to_string(d) + ", atlas vdim " +
                                             std::to_string(atlas.vdim())});
  }
  {
    std::set<std::string> covered;
    for (const auto& c : atlas.charts())
      for (const auto& p : c.footprint()) covered.insert(p.label);
    const std::set<std::string> table(atlas.footprint().begin(), atlas.footprint().end());
    Tally cov{"(1.) cover", "X", 0.0};
    for (const auto& l : table)
      if (!covered.count(l)) cov.fail("point '" + l + "' lies in no chart footprint");
    for (const auto& l : covered)
      if (!table.count(l)) cov.fail("chart point '" + l + "' is not in the footprint table");
    r.add(cov.check());
  }

  // (2.)
  for (const auto& t : atlas.transitions()) {
    const auto& a = atlas.chart(t.i);
    const auto& b = atlas.chart(t.j);
    const std::string subject = arrow(t.i, t.j);
    if (t.i == t.j) {
      const auto id = identity_morphism(a);
      const double res = std::max(max_coefficient_difference(t.morphism.f, id.f),
                                  max_coefficient_difference(t.morphism.fhat.entries, id.fhat.entries));
      r.add(Check{"(2.) identity", subject, res <= kIdentityTolerance, res,
                  res <= kIdentityTolerance ? "" : "f_ii is not the identity"});
      continue;
    }
    const auto uij = atlas.overlap(t.i, t.j);
    MorphismCheckOptions mo;
    mo.section_condition = "(2.) section";
    mo.footprint_condition = "(2.) footprint";
    mo.labels = uij;
    Report mr = check_morphism(a, b, t.morphism, mo);
    Tally pre{"(2.) footprint", subject + " preimage", 0.0};
    for (const auto& l : uij) {
      const FootprintPoint* q = b.find(l);
      if (!q) pre.fail("'" + l + "' lies in V_i of the overlap but not in chart " + t.j);
      else if (!in_dom(t.dom_j, q->x)) pre.fail("'" + l + "' is outside the target domain of the overlap");
    }
    for (const auto& p : b.footprint())
      if (in_dom(t.dom_j, p.x) && !uij.count(p.label))
        pre.fail("'" + p.label + "' lies in V_j of the overlap but not in V_i");
    r.merge(mr);
    r.add(pre.check());
  }

  // (3.)
  for (const auto& i : ids)
    for (const auto& j : ids)
      for (const auto& k : ids) {
        const auto tij = atlas.transition(i, j), tjk = atlas.transition(j, k), tik = atlas.transition(i, k);
        if (!tij || !tjk || !tik) continue;
        const auto u = atlas.overlap(i, j, k);
        if (u.empty()) continue;
        const std::string subject = "(" + i + "," + j + "," + k + ")";
        const auto& ci = atlas.chart(i);
        const auto& ck = atlas.chart(k);
        const KHomRep lam = atlas.lambda(i, j, k);
        if (i == j || j == k) {
          if (!atlas.find_lambda(i, j, k)) continue;
          const auto cmp = khom_compare(lam, zero_khom(ci.n(), ck.n(), ci.m()), ci, atlas.triple_domain(i, j, k), u);
          r.add(Check{"(3.) degenerate", subject, cmp.equal, std::max(cmp.on_section, cmp.on_footprint),
                      cmp.equal ? "" : "Lambda_iij / Lambda_ijj is not zero in KHom"});
          continue;
        }
        HomotopyCheckOptions ho;
        ho.condition = "(3.) homotopy";
        ho.labels = u;
        Report hr = check_homotopy(tik->morphism, compose(tij->morphism, tjk->morphism), lam, ci, ck, ho);
        for (auto& c : hr.checks) c.subject = subject + " " + c.subject;
        r.merge(hr);
      }

  // (4.)
  for (const auto& i : ids)
    for (const auto& j : ids)
      for (const auto& k : ids)
        for (const auto& l : ids) {
          const auto tij = atlas.transition(i, j), tkl = atlas.transition(k, l);
          if (!tij || !tkl || !atlas.transition(i, k) || !atlas.transition(i, l) || !atlas.transition(j, k) ||
              !atlas.transition(j, l))
            continue;
          const auto u = atlas.overlap(i, j, k, l);
          if (u.empty()) continue;
          // Only quadruples that carry some nonzero homotopy datum are informative.
          if (!atlas.find_lambda(i, k, l) && !atlas.find_lambda(j, k, l) && !atlas.find_lambda(i, j, l) &&
              !atlas.find_lambda(i, j, k))
            continue;
          const auto &ci = atlas.chart(i), &cj = atlas.chart(j), &ck = atlas.chart(k);
          const PolyMatrix dfkl = jacobian_matrix(tkl->morphism.f);
          const PolyMatrix ikl = atlas.lambda(i, k, l).lam, jkl = atlas.lambda(j, k, l).lam,
                           ijl = atlas.lambda(i, j, l).lam, ijk = atlas.lambda(i, j, k).lam;
          Tally t{"(4.) cocycle", "(" + i + "," + j + "," + k + "," + l + ")", kPointTolerance};
          for (const auto& lab : u) {
            const auto& xi = coords_of(ci, lab);
            const auto& xj = coords_of(cj, lab);
            const auto& xk = coords_of(ck, lab);
            const Matrix v = at(ikl, xi) - at(jkl, xj) * at(tij->morphism.fhat, xi) - at(ijl, xi) +
                             at(dfkl, xk) * at(ijk, xi);
            t.see(max_abs(v), "at '" + lab + "'");
          }
          r.add(t.check());
        }
  return r;
}

// ---------------------------------------------------------------- morphisms of atlases

KHomRep StrictMorphism::delta(const std::string& i, const std::string& j, const KuranishiAtlas& x,
                              const KuranishiAtlas& y) const {
  auto it = deltas.find({i, j});
  if (it != deltas.end()) return it->second;
  return zero_khom(x.chart(i).n(), y.chart(tau.at(j)).n(), x.chart(i).m());
}

namespace {

std::string image_label(const PointMap& pm, const std::string& l) {
  auto it = pm.find(l);
  return it == pm.end() ? l : it->second;
}

// Validates tau and the chart maps; returns false if later checks cannot run.
bool check_index_map(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y, Report& r) {
  Tally t{"(1.) index map", "tau", 0.0};
  for (const auto& c : x.charts()) {
    auto it = h.tau.find(c.id());
    if (it == h.tau.end()) t.fail("tau is undefined on chart " + c.id());
    else if (!y.has_chart(it->second)) t.fail("tau(" + c.id() + ") = " + it->second + " is not a target chart");
    else if (!h.maps.count(c.id())) t.fail("no chart map for " + c.id());
  }
  r.add(t.check());
  return !t.failed;
}

}  // namespace

Report check_strict_morphism(const StrictMorphism& h, const KuranishiAtlas& x, const KuranishiAtlas& y) {
  Report r;
  if (!check_index_map(h, x, y, r)) return r;
  std::vector<std::string> ids;
  for (const auto& c : x.charts()) ids.push_back(c.id());
  auto tau = [&](const std::string& i) { return h.tau.at(i); };

  for (const auto& i : ids) {
    MorphismCheckOptions mo;
    mo.section_condition = "(2.) section";
    mo.footprint_condition = "(2.) footprint";
    PointMap pm = h.point_map;
    for (const auto& p : x.chart(i).footprint()) pm.try_emplace(p.label, p.label);
    mo.point_map = &pm;
    r.merge(check_morphism(x.chart(i), y.chart(tau(i)), h.maps.at(i), mo));
  }

  for (const auto& t : x.transitions()) {
    if (t.i == t.j) continue;
    const auto u = x.overlap(t.i, t.j);
    if (u.empty()) continue;
    const std::string subject = "(" + t.i + "," + t.j + ")";
    const auto ty = y.transition(tau(t.i), tau(t.j));
    if (!ty) {
      r.add(Check{"(3.) homotopy", subject, false, 0.0,
                  "target atlas has no transition " + arrow(tau(t.i), tau(t.j))});
      continue;
    }
    const ChartMorphism m0 = compose(t.morphism, h.maps.at(t.j));
    const ChartMorphism m1 = compose(h.maps.at(t.i), ty->morphism);
    HomotopyCheckOptions ho;
    ho.condition = "(3.) homotopy";
    ho.labels = u;
    Report hr = check_homotopy(m0, m1, h.delta(t.i, t.j, x, y), x.chart(t.i), y.chart(tau(t.j)), ho);
    for (auto& c : hr.checks) c.subject = subject + " " + c.subject;
    r.merge(hr);
  }

  for (const auto& i : ids)
    for (const auto& j : ids)
      for (const auto& k : ids) {
        const auto tij = x.transition(i, j);
        if (!tij || !x.transition(j, k) || !x.transition(i, k)) continue;
        const auto u = x.overlap(i, j, k);
        if (u.empty()) continue;
        const std::string subject = "(" + i + "," + j + "," + k + ")";
        const auto ty_jk = y.transition(tau(j), tau(k));
        if (!ty_jk || !y.transition(tau(i), tau(j)) || !y.transition(tau(i), tau(k))) {
          r.add(Check{"(4.) five-term", subject, false, 0.0, "target atlas lacks a transition among tau-images"});
          continue;
        }
        const auto &ci = x.chart(i), &cj = x.chart(j), &ck = x.chart(k);
        const PolyMatrix dhk = jacobian_matrix(h.maps.at(k).f);
        const PolyMatrix dfy = jacobian_matrix(ty_jk->morphism.f);
        const PolyMatrix lx = x.lambda(i, j, k).lam;
        const PolyMatrix ly = y.lambda(tau(i), tau(j), tau(k)).lam;
        const PolyMatrix dik = h.delta(i, k, x, y).lam, dij = h.delta(i, j, x, y).lam, djk = h.delta(j, k, x, y).lam;
        Tally t{"(4.) five-term", subject, kPointTolerance};
        for (const auto& lab : u) {
          const auto& xi = coords_of(ci, lab);
          const auto& xj = coords_of(cj, lab);
          const auto& xk = coords_of(ck, lab);
          const auto yi = h.maps.at(i).f.eval(xi);
          const auto yj = h.maps.at(j).f.eval(xj);
          const Matrix v = at(dik, xi) - at(dhk, xk) * at(lx, xi) + at(ly, yi) * at(h.maps.at(i).fhat, xi) -
                           at(dfy, yj) * at(dij, xi) - at(djk, xj) * at(tij->morphism.fhat, xi);
          t.see(max_abs(v), "at '" + lab + "'");
        }
        r.add(t.check());
      }
  return r;
}

Report check_2morphism(const StrictMorphism& h, const StrictMorphism& g, const std::map<std::string, KHomRep>& upsilon,
                       const KuranishiAtlas& x, const KuranishiAtlas& y, const TwoMorphismOptions& opts) {
  Report r;
  Report pre;
  if (!check_index_map(h, x, y, pre) || !check_index_map(g, x, y, pre)) {
    r.merge(pre);
    return r;
  }
  std::vector<std::string> ids;
  for (const auto& c : x.charts()) ids.push_back(c.id());

  Tally fa{"(a) footprint", "h,g", 0.0};
  for (const auto& l : x.footprint())
    if (image_label(h.point_map, l) != image_label(g.point_map, l))
      fa.fail("h and g send '" + l + "' to different points");
  r.add(fa.check());

  auto ups = [&](const std::string& i) {
    auto it = upsilon.find(i);
    if (it != upsilon.end()) return it->second;
    return zero_khom(x.chart(i).n(), y.chart(g.tau.at(i)).n(), x.chart(i).m());
  };

  for (const auto& i : ids) {
    const std::string P = h.tau.at(i), Q = g.tau.at(i);
    const auto t = y.transition(P, Q);
    if (!t) {
      r.add(Check{"(b) homotopy", i, false, 0.0, "target atlas has no transition " + arrow(P, Q)});
      continue;
    }
    HomotopyCheckOptions ho;
    ho.condition = "(b) homotopy";
    Report hr = check_homotopy(compose(h.maps.at(i), t->morphism), g.maps.at(i), ups(i), x.chart(i), y.chart(Q), ho);
    for (auto& c : hr.checks) c.subject = i + " " + c.subject;
    r.merge(hr);
  }

  const double sgn = opts.summed_lambda_terms ? 1.0 : -1.0;
  for (const auto& i : ids)
    for (const auto& j : ids) {
      const auto tij = x.transition(i, j);
      if (!tij) continue;
      const auto u = x.overlap(i, j);
      if (u.empty()) continue;
      const std::string Pi = h.tau.at(i), Pj = h.tau.at(j), Qi = g.tau.at(i), Qj = g.tau.at(j);
      const auto fQ = y.transition(Qi, Qj), fPQ = y.transition(Pj, Qj);
      const std::string subject = "(" + i + "," + j + ")";
      if (!fQ || !fPQ || !y.transition(Pi, Qi) || !y.transition(Pi, Pj) || !y.transition(Pi, Qj)) {
        r.add(Check{"(c) five-term", subject, false, 0.0, "target atlas lacks a transition among tau-images"});
        continue;
      }
      const auto &ci = x.chart(i), &cj = x.chart(j);
      const PolyMatrix dfQ = jacobian_matrix(fQ->morphism.f), dfPQ = jacobian_matrix(fPQ->morphism.f);
      const PolyMatrix l1 = y.lambda(Pi, Qi, Qj).lam, l2 = y.lambda(Pi, Pj, Qj).lam;
      const PolyMatrix dg = g.delta(i, j, x, y).lam, dh = h.delta(i, j, x, y).lam;
      const PolyMatrix ui = ups(i).lam, uj = ups(j).lam;
      Tally t{"(c) five-term", subject, kPointTolerance};
      for (const auto& lab : u) {
        const auto& xi = coords_of(ci, lab);
        const auto& xj = coords_of(cj, lab);
        const auto yPi = h.maps.at(i).f.eval(xi);
        const auto yPj = h.maps.at(j).f.eval(xj);
        const auto yQi = g.maps.at(i).f.eval(xi);
        const Matrix v = at(dg, xi) - at(dfQ, yQi) * at(ui, xi) + at(uj, xj) * at(tij->morphism.fhat, xi) -
                         at(dfPQ, yPj) * at(dh, xi) -
                         (at(l1, yPi) + sgn * at(l2, yPi)) * at(h.maps.at(i).fhat, xi);
        t.see(max_abs(v), "at '" + lab + "'");
      }
      r.add(t.check());
    }
  return r;
}

}  // namespace kur
