#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifndef KUR_FIXTURE_DIR
#error "KUR_FIXTURE_DIR must be defined"
#endif

namespace kt {

PolyMap pm(int n_in, const std::vector<std::vector<Term>>& coords) {
  PolyMap p(n_in, static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (const auto& t : coords[i]) p.add_term(static_cast<int>(i), t.e, t.c);
  return p;
}

PolyMatrix pmat(int n_in, int rows, int cols, const std::vector<std::vector<Term>>& entries) {
  return PolyMatrix(rows, cols, pm(n_in, entries));
}

PolyMatrix cmat(int n_in, int rows, int cols, const std::vector<double>& values) {
  return PolyMatrix::constant(n_in, rows, cols, values);
}

std::string fixture(const std::string& name) { return std::string(KUR_FIXTURE_DIR) + "/" + name; }

KuranishiAtlas load_atlas(const std::string& name) { return atlas_from_json(read_json_file(fixture(name))); }
KuranishiChart load_chart(const std::string& name) { return chart_from_json(read_json_file(fixture(name))); }
GroupPresentation load_presentation(const std::string& name) {
  return presentation_from_json(read_json_file(fixture(name)));
}

PolyMap random_polymap(std::mt19937_64& rng, int n_in, int n_out, int max_degree, int terms) {
  std::uniform_int_distribution<int> deg(0, max_degree), var(0, std::max(0, n_in - 1)), coef(-4, 4);
  PolyMap p(n_in, n_out);
  for (int i = 0; i < n_out; ++i)
    for (int t = 0; t < terms; ++t) {
      Monomial e(n_in, 0);
      const int d = deg(rng);
      for (int k = 0; k < d && n_in > 0; ++k) ++e[var(rng)];
      p.add_term(i, e, 0.5 * coef(rng));
    }
  return p;
}

std::vector<double> fd_jacobian(const PolyMap& p, const std::vector<double>& x, double h) {
  std::vector<double> out(static_cast<std::size_t>(p.n_out() * p.n_in()));
  for (int j = 0; j < p.n_in(); ++j) {
    auto xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const auto fp = p.eval(xp), fm = p.eval(xm);
    for (int i = 0; i < p.n_out(); ++i) out[i * p.n_in() + j] = (fp[i] - fm[i]) / (2 * h);
  }
  return out;
}

std::vector<Quat> binary_icosahedral() {
  std::vector<Quat> g;
  for (int k = 0; k < 4; ++k)
    for (double s : {1.0, -1.0}) {
      Quat q{0, 0, 0, 0};
      q[k] = s;
      g.push_back(q);
    }
  for (int m = 0; m < 16; ++m)
    g.push_back({m & 1 ? -0.5 : 0.5, m & 2 ? -0.5 : 0.5, m & 4 ? -0.5 : 0.5, m & 8 ? -0.5 : 0.5});
  const double phi = std::numbers::phi;
  const std::array<double, 4> base{0.0, 0.5, phi / 2, 0.5 / phi};
  const std::array<std::array<int, 4>, 12> even{{{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 0, 3, 2},
                                                 {1, 2, 0, 3}, {1, 3, 2, 0}, {2, 0, 1, 3}, {2, 1, 3, 0},
                                                 {2, 3, 0, 1}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 2, 1, 0}}};
  for (const auto& perm : even)
    for (int m = 0; m < 8; ++m) {
      std::array<double, 4> v = base;
      v[1] *= m & 1 ? -1 : 1;
      v[2] *= m & 2 ? -1 : 1;
      v[3] *= m & 4 ? -1 : 1;
      Quat q{0, 0, 0, 0};
      for (int k = 0; k < 4; ++k) q[perm[k]] = v[k];
      g.push_back(q);
    }
  return g;
}

std::array<double, 3> character(const std::vector<Quat>& q) {
  auto r = [](double v) {
    const double x = std::round(v * 1e6) / 1e6;
    return x == 0.0 ? 0.0 : x;
  };
  return {r(q[0].trace()), r(q[1].trace()), r((q[0] * q[1]).trace())};
}

namespace {

bool is_identity(const Quat& q) { return std::abs(q.a - 1) < 1e-9 && std::hypot(q.b, q.c, q.d) < 1e-9; }

bool non_commuting(const Quat& s, const Quat& t) {
  const auto a = s.imag(), b = t.imag();
  const double cx = a[1] * b[2] - a[2] * b[1], cy = a[2] * b[0] - a[0] * b[2], cz = a[0] * b[1] - a[1] * b[0];
  return std::hypot(cx, cy, cz) > 1e-7;
}

void insert_unique(std::vector<std::array<double, 3>>& out, const std::array<double, 3>& c) {
  for (const auto& d : out)
    if (std::abs(d[0] - c[0]) < 1e-5 && std::abs(d[1] - c[1]) < 1e-5 && std::abs(d[2] - c[2]) < 1e-5) return;
  out.push_back(c);
}

bool satisfies(const GroupPresentation& p, const std::vector<Quat>& q) {
  for (const auto& w : p.relators)
    if (!is_identity(word_eval(w, q))) return false;
  return true;
}

}  // namespace

std::vector<std::array<double, 3>> finite_group_characters(const GroupPresentation& p,
                                                           const std::vector<Quat>& group) {
  std::vector<std::array<double, 3>> out;
  for (const auto& s : group)
    for (const auto& t : group) {
      if (!non_commuting(s, t)) continue;
      const std::vector<Quat> q{s, t};
      if (satisfies(p, q)) insert_unique(out, character(q));
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::array<double, 3>> trace_grid_characters(const GroupPresentation& p, std::array<int, 3> n) {
  auto values = [](int den) {
    std::vector<double> v;
    for (int k = 0; k <= den; ++k) v.push_back(2 * std::cos(std::numbers::pi * k / den));
    return v;
  };
  std::vector<std::array<double, 3>> out;
  for (double x : values(n[0]))
    for (double y : values(n[1]))
      for (double z : values(n[2])) {
        const double sa = std::sqrt(std::max(0.0, 1 - x * x / 4)), sb = std::sqrt(std::max(0.0, 1 - y * y / 4));
        if (sa < 1e-9 || sb < 1e-9) continue;
        const double cth = (x * y / 4 - z / 2) / (sa * sb);
        if (std::abs(cth) > 1 - 1e-12) continue;  // |cos| = 1 is a commuting pair
        const double sth = std::sqrt(1 - cth * cth);
        const std::vector<Quat> q{{x / 2, sa, 0, 0}, {y / 2, sb * cth, sb * sth, 0}};
        if (satisfies(p, q)) insert_unique(out, character(q));
      }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Matrix gaussian(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

// r x c of rank at most k, k drawn uniformly.
Matrix low_rank(std::mt19937_64& rng, int r, int c) {
  const int k = std::uniform_int_distribution<int>(0, std::min(r, c))(rng);
  return gaussian(rng, r, k) * gaussian(rng, k, c);
}

PolyMap linear(const Matrix& a) {
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = a;
  const std::vector<double> b(a.rows(), 0.0);
  return PolyMap::affine(static_cast<int>(a.cols()), static_cast<int>(a.rows()),
                         std::span<const double>(rm.data(), rm.size()), b);
}

}  // namespace

RandomCone random_cone(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(0, 4);
  const int na = 1 + dim(rng) % 4, nb = na + dim(rng) % 3, ma = dim(rng), mb = dim(rng);
  const Matrix dsa = low_rank(rng, ma, na), fhat = low_rank(rng, mb, ma), f = gaussian(rng, nb, na);
  // ds_b f = fhat ds_a, with ds_b free on the complement of im f.
  const Matrix fp = f.completeOrthogonalDecomposition().pseudoInverse();
  const Matrix dsb = fhat * dsa * fp + low_rank(rng, mb, nb) * (Matrix::Identity(nb, nb) - f * fp);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> fh = fhat;
  KuranishiChart a("a", BoxUnion::cube(na, 1.0), ma, linear(dsa), 1, {{"p", std::vector<double>(na, 0.0)}});
  KuranishiChart b("b", BoxUnion::cube(nb, 1.0), mb, linear(dsb), 1, {{"p", std::vector<double>(nb, 0.0)}});
  ChartMorphism m{"a", "b", linear(f),
                  PolyMatrix::constant(na, mb, ma, std::span<const double>(fh.data(), fh.size()))};
  ThreeTermComplex c = cone(m, a, b);
  return RandomCone{std::move(a), std::move(b), std::move(m), std::move(c)};
}

RandomLinf random_linf(std::mt19937_64& rng) {
  const int h = std::uniform_int_distribution<int>(1, 3)(rng);
  std::uniform_int_distribution<int> coef(-3, 3);
  Matrix p = gaussian(rng, h, h);
  while (std::abs(p.determinant()) < 0.1) p = gaussian(rng, h, h);
  const Matrix q = p.transpose().inverse();

  RandomLinf out;
  out.chart.h1 = out.chart.h2 = h;
  out.chart.pairing = p;
  out.f = PolyMap(h, 1);
  double factorial = 1.0;
  for (int k = 2; k <= 4; ++k) {
    factorial *= k;  // k!
    // T of order k + 1 on R^h, entries indexed by sorted tuples.
    std::map<std::vector<int>, double> t;
    std::vector<int> idx(k + 1, 0);
    for (;;) {
      if (std::is_sorted(idx.begin(), idx.end())) t[idx] = coef(rng) * 0.5;
      int pos = k;
      while (pos >= 0 && ++idx[pos] == h) idx[pos--] = 0;
      if (pos < 0) break;
    }
    auto value = [&](std::vector<int> i) {
      std::sort(i.begin(), i.end());
      return t.at(i);
    };
    SymmetricTensor l(k, h, h);
    std::vector<int> args(k, 0);
    for (;;) {
      for (int a = 0; a < h; ++a) {
        double v = 0;
        for (int b = 0; b < h; ++b) {
          auto full = args;
          full.push_back(b);
          v += q(a, b) * value(full);
        }
        if (std::is_sorted(args.begin(), args.end())) l.set(a, args, v);
      }
      int pos = k - 1;
      while (pos >= 0 && ++args[pos] == h) args[pos--] = 0;
      if (pos < 0) break;
    }
    out.chart.brackets.emplace(k, l);
    // f gets T(x^(k+1)) / (k+1)!, one term per ordered tuple.
    idx.assign(k + 1, 0);
    for (;;) {
      Monomial e(h, 0);
      for (int i : idx) ++e[i];
      out.f.add_term(0, e, value(idx) / (factorial * (k + 1)));
      int pos = k;
      while (pos >= 0 && ++idx[pos] == h) idx[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return out;
}

std::vector<Corruption> two_chart_corruptions() {
  const json base = read_json_file(fixture("two_chart.json"));
  auto constant = [](int n_in, int rows, int cols, const std::vector<double>& v) {
    return to_json(PolyMatrix::constant(n_in, rows, cols, v));
  };
  std::vector<Corruption> out;

  json a = base;
  a["vdim"] = 1;
  out.push_back({"vdim changed to 1", "(1.) dimension", a});

  a = base;
  a["footprint"].push_back("Q");
  out.push_back({"footprint label no chart covers", "(1.) cover", a});

  a = base;
  a["transitions"][0]["fhat"] = constant(3, 2, 3, {0, 2, 0, 0, 0, 1});
  out.push_back({"fhat_AB entry scaled", "(2.) section", a});

  a = base;
  json self = base["transitions"][0];
  self["j"] = "A";
  self["dom_j"] = self["dom_i"];
  self["f"] = to_json(PolyMap::identity(3));
  self["fhat"] = constant(3, 3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 2});
  a["transitions"].push_back(self);
  out.push_back({"declared f_AA is not the identity", "(2.) identity", a});

  a = base;
  a["lambdas"][0]["lam"] = constant(3, 3, 3, {-0.5, 0, 0, 0, 0, 0, 0, 0, 0});
  out.push_back({"Lambda_ABA shifted by E11", "(3.) homotopy", a});

  a = base;
  a["lambdas"][1]["lam"] = constant(2, 2, 2, {0, 1, 0, 0});
  out.push_back({"Lambda_BAB shifted by E12", "(4.) cocycle", a});
  return out;
}

StrictMorphism identity_strict(const KuranishiAtlas& x) {
  StrictMorphism h;
  for (const auto& c : x.charts()) {
    h.tau[c.id()] = c.id();
    h.maps[c.id()] = identity_morphism(c);
  }
  return h;
}

StrictMorphism collapse_to_a(const KuranishiAtlas& x) {
  StrictMorphism g;
  g.tau = {{"A", "A"}, {"B", "A"}};
  g.maps["A"] = identity_morphism(x.chart("A"));
  g.maps["B"] = x.transition("B", "A")->morphism;
  g.deltas[{"A", "B"}] = KHomRep{PolyMatrix::constant(3, 3, 3, std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0, 0})};
  return g;
}

}  // namespace kt
