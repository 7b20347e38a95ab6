// One line per acceptance criterion: verdict, measured values, tolerance, time.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace kt;

namespace {

struct Outcome {
  bool ok = true;
  std::string measured;
  std::string tolerance;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

bool same_characters(std::vector<std::array<double, 3>> a, std::vector<std::array<double, 3>> b, double tol) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 3; ++k)
      if (std::abs(a[i][k] - b[i][k]) > tol) return false;
  return true;
}

std::vector<std::array<double, 3>> characters(const std::vector<RepOrbit>& orbits) {
  std::vector<std::array<double, 3>> out;
  for (const auto& o : orbits) out.push_back(character(o.representative.q));
  return out;
}

SolveOptions starts(int n) {
  SolveOptions o;
  o.starts = n;
  return o;
}

Outcome poincare_count() {
  const auto p = load_presentation("p235.json");
  CassonOptions o;
  o.solve = starts(100000);
  const auto r = casson_count(p, o);
  const auto oracle = finite_group_characters(p, binary_icosahedral());
  std::vector<RepOrbit> orbits;
  for (const auto& oc : r.orbits) orbits.push_back(oc.orbit);
  const bool match = same_characters(characters(orbits), oracle, 1e-6);
  const bool stable = r.seed_counts == std::vector<int>{2, 2, 2};
  std::ostringstream m;
  m << "N=" << r.N << " |lambda|=" << r.lambda_abs << " oracle N=" << oracle.size()
    << " characters " << (match ? "match" : "differ") << " seeds{0,1,2} N=" << join(r.seed_counts);
  return {r.N == 2 && r.lambda_abs == 1.0 && oracle.size() == 2 && match && stable, m.str(),
          "exact; characters 1e-6"};
}

Outcome dimension_identities() {
  const auto free = load_presentation("free2.json");
  RepOrbit fo;
  fo.representative.q = {Quat{0, 1, 0, 0}, Quat{0, 0, 1, 0}};
  fo.fingerprint = fingerprint(fo.representative.q);
  const int g = free.g();
  const int h1 = twisted_cohomology(free, fo.representative.q).h1;
  const int n = local_chart(free, fo).n();
  bool ok = h1 == 3 * g - 3 && n == h1;
  std::vector<int> vdims;
  for (const char* f : {"p235.json", "p237.json"}) {
    const auto p = load_presentation(f);
    const auto orbits = solve_reps(p, starts(2000));
    ok &= orbits.size() == 2;
    for (const auto& o : orbits) vdims.push_back(local_chart(p, o).vdim());
  }
  for (int v : vdims) ok &= v == 0;
  std::ostringstream m;
  m << "free g=2: h1=" << h1 << " chart n=" << n << " (3g-3=" << 3 * g - 3 << "); P235,P237 orbit vdims {"
    << join(vdims) << "}";
  return {ok, m.str(), "exact"};
}

Outcome virtual_counts() {
  const std::vector<std::pair<const char*, int>> cases{
      {"chart_x.json", 1}, {"chart_x2.json", 0}, {"chart_x3.json", 1}, {"chart_2d.json", 0}};
  bool ok = true;
  std::vector<int> values;
  int runs = 0;
  for (const auto& [f, want] : cases) {
    const auto c = load_chart(f);
    bool all = true;
    for (double eps : {1e-3, 1e-4})
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CountOptions o;
        o.eps = eps;
        o.seed = seed;
        const auto r = perturb_and_count(c, o);
        all &= r.certified() && r.value == want;
        ++runs;
      }
    values.push_back(perturb_and_count(c).value);
    ok &= all;
  }
  std::ostringstream m;
  m << "x,x^2,x^3-x,2D -> {" << join(values) << "}; " << runs << " certified perturbations "
    << (ok ? "all agree" : "disagree");
  return {ok, m.str(), "exact"};
}

Outcome deformation() {
  const auto fam = family_from_json(read_json_file(fixture("family_birth.json")));
  const auto r = deformation_sweep(fam, 11);
  std::vector<int> values, zeros;
  bool ok = r.invariant && r.slices.size() == 11;
  for (const auto& s : r.slices) {
    ok &= s.count.has_value();
    if (!s.count) continue;
    values.push_back(s.count->value);
    zeros.push_back(static_cast<int>(s.count->zeros.size()));
    ok &= s.count->value == 0;
  }
  // Zeros are born between t = 0.4 and t = 0.6.
  ok &= zeros.size() == 11 && zeros.front() == 0 && zeros.back() == 2;
  std::ostringstream m;
  m << "counts {" << join(values) << "} zeros {" << join(zeros) << "}";
  return {ok, m.str(), "exact"};
}

Outcome intersections() {
  auto load = [](const char* f) { return mapped_chart_from_json(read_json_file(fixture(f))); };
  const auto axis = load("line_axis.json"), diag = load("line_diagonal.json"), parabola = load("line_parabola.json");
  const int d = intersection_number(axis.chart, axis.g, diag.chart, diag.g);
  const int q = intersection_number(axis.chart, axis.g, parabola.chart, parabola.g);
  const auto& c = axis.chart;
  const KuranishiChart reversed(c.id(), c.domain(), c.m(), c.section(), -c.orientation(), c.footprint());
  const int dr = intersection_number(reversed, axis.g, diag.chart, diag.g);
  std::ostringstream m;
  m << "diagonal " << d << ", parabola " << q << ", diagonal reversed " << dr;
  return {std::abs(d) == 1 && q == 0 && dr == -d, m.str(), "exact"};
}

Outcome atlas_validator() {
  const Report base = check_atlas(load_atlas("two_chart.json"));
  std::set<std::string> conditions;
  for (const auto& c : base.checks) conditions.insert(c.condition);
  int named = 0;
  const auto cs = two_chart_corruptions();
  for (const auto& c : cs) named += check_atlas(atlas_from_json(c.atlas)).failed(c.condition);
  std::ostringstream m;
  m << "fixture " << (base.passed() ? "passes" : "fails") << " " << base.checks.size() << " checks over "
    << conditions.size() << " conditions; corruptions named " << named << "/" << cs.size();
  return {base.passed() && conditions.count("(4.) cocycle") && named == static_cast<int>(cs.size()), m.str(),
          "exact"};
}

Outcome potentials() {
  std::mt19937_64 rng(2024);
  double worst_check = 0, worst_oracle = 0, worst_grad = 0;
  bool verified = true;
  for (int trial = 0; trial < 100; ++trial) {
    const RandomLinf r = random_linf(rng);
    const Potential p = potential(r.chart);
    verified &= p.verified;
    worst_check = std::max(worst_check, p.residual);
    worst_oracle = std::max(worst_oracle, max_coefficient_difference(p.f, r.f));
    // (P^T)^-1 grad f against the section, with f the closed-form potential.
    const Matrix q = r.chart.pairing.transpose().inverse();
    const PolyMap grad = jacobian(r.f);
    PolyMap lifted(r.chart.h1, r.chart.h2);
    for (int a = 0; a < r.chart.h2; ++a)
      for (int b = 0; b < r.chart.h1; ++b)
        for (const auto& [e, v] : grad.coords()[b]) lifted.add_term(a, e, q(a, b) * v);
    worst_grad = std::max(worst_grad, max_coefficient_difference(lifted, from_linf(r.chart).section()));
  }
  std::ostringstream m;
  m.precision(2);
  m << std::scientific << "100 charts; max residual " << worst_check << ", |f - closed form| " << worst_oracle
    << ", |P^-T grad f - s| " << worst_grad;
  return {verified && worst_check <= 1e-9 && worst_oracle <= 1e-9 && worst_grad <= 1e-9, m.str(), "1e-9"};
}

Outcome cones() {
  std::mt19937_64 rng(99);
  int exact = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const RandomCone rc = random_cone(rng);
    const TangentRanks t = cohomology_ranks(rc.cone, rc.a.footprint().front().x);
    exact += t.t0 - t.t1 + t.t2 == rc.cone.a - rc.cone.b + rc.cone.c;
  }
  const auto inc = canonical_inclusion(load_chart("chart_2d.json"));
  const bool inclusion = check_embedding(inc.h, inc.source, inc.target).passed();
  const auto x = load_atlas("fold.json");
  const auto mf = morphism_from_json(read_json_file(fixture("fold_square.json")), x);
  const Report fold = check_embedding(mf.h, x, mf.target);
  const bool injective_fails = fold.failed("(c) injective");
  std::ostringstream m;
  m << "Euler identity " << exact << "/100; inclusion " << (inclusion ? "passes" : "fails")
    << "; fold fails (c) injective: " << (injective_fails ? "yes" : "no");
  return {exact == 100 && inclusion && injective_fails, m.str(), "exact"};
}

Outcome twisted() {
  bool ok = true;
  int identity_points = 0;
  const std::vector<Quat> trivial2{Quat{}, Quat{}};
  for (const char* f : {"p235.json", "p235_tietze.json", "p237.json", "trivial.json"}) {
    const auto p = load_presentation(f);
    const auto at_trivial = twisted_cohomology(p, trivial2);
    ok &= at_trivial.h0 == 3 && at_trivial.h1 == 0 && at_trivial.h2 == 0;
    ok &= at_trivial.h0 - at_trivial.h1 + at_trivial.h2_presentation == 3;
    ++identity_points;
    for (const auto& o : solve_reps(p, starts(20000))) {
      ok &= o.h.h0 - o.h.h1 + o.h.h2_presentation == 3;
      ++identity_points;
    }
  }
  const auto p235 = solve_reps(load_presentation("p235.json"), starts(20000));
  ok &= p235.size() == 2;
  std::vector<int> ranks;
  for (const auto& o : p235) {
    ranks.insert(ranks.end(), {o.h.h0, o.h.h1, o.h.h2});
    ok &= o.h.h0 == 0 && o.h.h1 == 0 && o.h.h2 == 0;
  }
  std::ostringstream m;
  m << "h0-h1+h2=3 at " << identity_points << " points; trivial rep (3,0,0) on 4 fixtures; P235 orbits ("
    << join(ranks) << ")";
  return {ok, m.str(), "exact"};
}

Outcome robustness() {
  const auto p = load_presentation("p235.json");
  const auto a = solve_reps(p, starts(100000));
  const auto b = solve_reps(load_presentation("p235_tietze.json"), starts(100000));
  const bool tietze = a.size() == b.size() && same_characters(characters(a), characters(b), 1e-6);
  double fp_gap = a.size() == b.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    for (std::size_t k = 0; k < std::min(a[i].fingerprint.size(), b[i].fingerprint.size()); ++k)
      fp_gap = std::max(fp_gap, std::abs(a[i].fingerprint[k] - b[i].fingerprint[k]));
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n;
  SolveOptions c = starts(100000);
  c.conjugate_starts = Quat{n(rng), n(rng), n(rng), n(rng)}.normalized();
  const auto turned = solve_reps(p, c);
  bool same = turned.size() == a.size();
  for (std::size_t i = 0; same && i < a.size(); ++i) same = turned[i].fingerprint == a[i].fingerprint;
  std::ostringstream m;
  m << "Tietze N " << a.size() << "->" << b.size() << " fingerprint gap " << fp_gap << "; conjugated starts "
    << (same ? "identical" : "differ") << " orbit list";
  return {tietze && fp_gap <= 1e-6 && same, m.str(), "1e-6; exact"};
}

}  // namespace

int main() {
  setenv("KURANISHI_THREADS", "1", 1);
  const std::vector<Criterion> criteria{
      {1, "Poincare sphere count", 60, poincare_count},
      {2, "dimension identities", 1, dimension_identities},
      {3, "virtual count suite", 5, virtual_counts},
      {4, "deformation invariance", 5, deformation},
      {5, "intersection numbers", 5, intersections},
      {6, "atlas validator", 5, atlas_validator},
      {7, "potential gradient", 10, potentials},
      {8, "tangent cone suite", 10, cones},
      {9, "twisted cohomology", 10, twisted},
      {10, "presentation robustness", 60, robustness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what(), "-"};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.ok && s < c.limit_s;
    failed += !pass;
    std::printf("%s  %2d %-24s %s | tol %s | %.2fs (limit %.0fs)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.measured.c_str(), o.tolerance.c_str(), s, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
