#include "doctest.h"
#include "support.hpp"

using namespace kt;

namespace {

// (R, s = x) with the origin as footprint.
KuranishiChart line(const std::string& id, const PolyMap& s = pm(1, {{{1, {1}}}})) {
  return KuranishiChart(id, BoxUnion::cube(1, 2.0), 1, s, 1, {{"P", {0.0}}});
}

ChartMorphism morph(const std::string& a, const std::string& b, PolyMap f, PolyMatrix fhat) {
  return ChartMorphism{a, b, std::move(f), std::move(fhat)};
}

const PolyMap kBend = pm(1, {{{1, {1}}, {1, {2}}}});           // x + x^2
const PolyMatrix kBendHat = pmat(1, 1, 1, {{{1, {0}}, {1, {1}}}});  // 1 + x
const KHomRep kLamX{pmat(1, 1, 1, {{{1, {1}}}})};                 // xi -> x xi

}  // namespace

TEST_CASE("check_morphism") {
  const auto a = line("A");
  CHECK(check_morphism(a, a, identity_morphism(a)).passed());
  CHECK(check_morphism(a, a, morph("A", "A", kBend, kBendHat)).passed());
  const Report bad = check_morphism(a, a, morph("A", "A", kBend, PolyMatrix::identity(1, 1)));
  CHECK_FALSE(bad.passed());
  CHECK(bad.failed("section"));
  CHECK(bad.checks.front().residual == doctest::Approx(1.0));  // the x^2 coefficient
}

TEST_CASE("khom_equal") {
  const auto a = line("A");
  const KHomRep l1{pmat(1, 1, 1, {{{2, {0}}}})};
  const KuranishiChart flat("F", BoxUnion::cube(1, 1.0), 1, PolyMap(1, 1), 1, {});
  CHECK(khom_equal(zero_khom(1, 1, 1), KHomRep{PolyMatrix::identity(1, 1)}, flat));
  CHECK_FALSE(khom_equal(kLamX, zero_khom(1, 1, 1), a));
  CHECK_THROWS(khom_equal(kLamX, zero_khom(1, 2, 1), a));

  // l2 - l1 = x vanishes at the footprint but not on the section.
  const KHomRep l2{pmat(1, 1, 1, {{{2, {0}}, {1, {1}}}})};
  CHECK(khom_equal(l1, l1, a));
  CHECK(khom_equal(l2, l2, a));
  CHECK_FALSE(khom_equal(l1, l2, a));
  CHECK_FALSE(khom_equal(l2, l1, a));
}

TEST_CASE("check_homotopy") {
  const auto a = line("A");
  const auto id = identity_morphism(a);
  const auto bend = morph("A", "A", kBend, kBendHat);
  CHECK(check_homotopy(id, id, zero_khom(1, 1, 1), a, a).passed());
  CHECK(check_homotopy(id, bend, kLamX, a, a).passed());
  const Report r = check_homotopy(id, bend, zero_khom(1, 1, 1), a, a);
  CHECK_FALSE(r.passed());
  CHECK(r.checks.front().condition == "homotopy");
  CHECK_FALSE(r.checks.front().passed);
}

TEST_CASE("homotopy is symmetric and transitive on examples") {
  const auto a = line("A");
  const auto id = identity_morphism(a);
  const auto bend = morph("A", "A", kBend, kBendHat);
  const auto bend2 = morph("A", "A", pm(1, {{{1, {1}}, {3, {2}}}}), pmat(1, 1, 1, {{{1, {0}}, {3, {1}}}}));
  const KHomRep l12{pmat(1, 1, 1, {{{2, {1}}}})};
  CHECK(check_homotopy(bend, id, KHomRep{scale(kLamX.lam, -1)}, a, a).passed());
  CHECK(check_homotopy(bend, bend2, l12, a, a).passed());
  CHECK(check_homotopy(id, bend2, KHomRep{add(kLamX.lam, l12.lam)}, a, a).passed());
}

TEST_CASE("check_family_homotopy") {
  const auto a = line("A");
  const auto id = identity_morphism(a);
  // Constant family.
  FamilyHomotopy c{append_variables(id.f, 1), PolyMatrix(1, 1, append_variables(id.fhat.entries, 1)),
                   PolyMatrix::zero(2, 1, 1), PolyMatrix::zero(2, 1, 0)};
  CHECK(check_family_homotopy(c, id, id, a, a).passed());

  FamilyHomotopy f{pm(2, {{{1, {1, 0}}, {1, {2, 1}}}}), pmat(2, 1, 1, {{{1, {0, 0}}, {1, {1, 1}}}}),
                   pmat(2, 1, 1, {{{1, {1, 0}}}}), PolyMatrix::zero(2, 1, 0)};
  const auto bend = morph("A", "A", kBend, kBendHat);
  CHECK(check_family_homotopy(f, id, bend, a, a).passed());
  const auto ex = extract_homotopy(f);
  CHECK(ex.heuristic);
  CHECK(check_homotopy(id, bend, ex.lam, a, a).passed());

  FamilyHomotopy g = f;
  g.lam = PolyMatrix::zero(2, 1, 1);
  const Report r = check_family_homotopy(g, id, bend, a, a);
  CHECK(r.failed("(c) dF/dt"));
  CHECK_FALSE(r.failed("(a) endpoints"));
  CHECK_FALSE(r.failed("(b) section"));
}

TEST_CASE("family homotopy with a wedge term") {
  // Chart (R^2, s = (x, y)) to itself; Fhat(t) = I + t [[y, -x], [0, 0]] kills s
  // and its t-derivative is carried by Xi alone.
  const KuranishiChart a("W", BoxUnion::cube(2, 1.0), 2, PolyMap::identity(2), 1, {{"P", {0.0, 0.0}}});
  const auto id = identity_morphism(a);
  FamilyHomotopy fh{append_variables(PolyMap::identity(2), 1),
                    pmat(3, 2, 2, {{{1, {0, 0, 0}}, {1, {0, 1, 1}}}, {{-1, {1, 0, 1}}}, {}, {{1, {0, 0, 0}}}}),
                    PolyMatrix::zero(3, 2, 2), cmat(3, 2, 1, {-1, 0})};
  const ChartMorphism end{"W", "W", PolyMap::identity(2),
                          pmat(2, 2, 2, {{{1, {0, 0}}, {1, {0, 1}}}, {{-1, {1, 0}}}, {}, {{1, {0, 0}}}})};
  CHECK(check_family_homotopy(fh, id, end, a, a).passed());
  fh.xi = PolyMatrix::zero(3, 2, 1);
  const Report r = check_family_homotopy(fh, id, end, a, a);
  CHECK(r.failed_conditions() == std::vector<std::string>{"(c) dFhat/dt"});
}

TEST_CASE("compose") {
  const auto a = line("A");
  const auto m = morph("A", "B", kBend, kBendHat);
  CHECK(compose(identity_morphism(a), m) == m);
  const auto m1 = morph("X", "Y", pm(1, {{{1, {2}}}}), PolyMatrix::identity(1, 1));
  const auto m2 = morph("Y", "Z", pm(1, {{{1, {1}}, {1, {0}}}}), pmat(1, 1, 1, {{{1, {0}}, {1, {1}}}}));
  const auto c = compose(m1, m2);
  CHECK(c.f == pm(1, {{{1, {2}}, {1, {0}}}}));
  CHECK(c.fhat == pmat(1, 1, 1, {{{1, {0}}, {1, {2}}}}));
  CHECK_THROWS_AS(compose(m2, morph("Z", "W", PolyMap::identity(2), PolyMatrix::identity(2, 1))), DimensionError);
}

TEST_CASE("check_atlas on fixtures") {
  const KuranishiAtlas single(0, {line("A")}, {"P"}, {}, {});
  CHECK(check_atlas(single).passed());
  CHECK(check_atlas(load_atlas("two_chart.json")).passed());
  CHECK(check_atlas(load_atlas("two_chart_transversal.json")).passed());
}

TEST_CASE("check_atlas names the corrupted condition") {
  for (const auto& c : two_chart_corruptions()) {
    CAPTURE(c.what);
    const Report r = check_atlas(atlas_from_json(c.atlas));
    CHECK_FALSE(r.passed());
    CHECK(r.failed(c.condition));
  }
}

TEST_CASE("Lambda corruptions isolate conditions 3 and 4") {
  const auto cs = two_chart_corruptions();
  const Report r3 = check_atlas(atlas_from_json(cs[4].atlas));
  CHECK(r3.failed_conditions() == std::vector<std::string>{"(3.) homotopy"});
  const Report r4 = check_atlas(atlas_from_json(cs[5].atlas));
  CHECK(r4.failed_conditions() == std::vector<std::string>{"(4.) cocycle"});
}

TEST_CASE("check_atlas is invariant under chart relabeling") {
  for (const char* f : {"two_chart.json", "two_chart_transversal.json"}) {
    const auto a = load_atlas(f);
    const auto b = a.relabeled({{"A", "Z"}, {"B", "C"}});
    CHECK(b.has_chart("Z"));
    CHECK(check_atlas(b).passed());
  }
}

TEST_CASE("a truncated local inverse is not a chart morphism") {
  // s_B = y + y^2, f_AB = x, fhat_AB = 1 + x; the degree-3 inverse y - y^2 + 2y^3
  // is not divisible by s_B, so no polynomial fhat_BA exists.
  const auto a = line("A");
  const auto b = line("B", kBend);
  CHECK(check_morphism(a, b, morph("A", "B", PolyMap::identity(1), kBendHat)).passed());
  const auto inv = pm(1, {{{1, {1}}, {-1, {2}}, {2, {3}}}});
  for (const auto& fh : {pmat(1, 1, 1, {{{1, {0}}}}), pmat(1, 1, 1, {{{1, {0}}, {-2, {1}}}})})
    CHECK_FALSE(check_morphism(b, a, morph("B", "A", inv, fh)).passed());
}

TEST_CASE("check_strict_morphism") {
  const auto x = load_atlas("two_chart.json");
  CHECK(check_strict_morphism(identity_strict(x), x, x).passed());
  CHECK(check_strict_morphism(collapse_to_a(x), x, x).passed());

  auto bad = collapse_to_a(x);
  bad.deltas[{"A", "B"}] = zero_khom(3, 3, 3);
  const Report r = check_strict_morphism(bad, x, x);
  CHECK((r.failed("(3.) homotopy") || r.failed("(4.) five-term")));

  auto wrong_tau = identity_strict(x);
  wrong_tau.tau.erase("B");
  CHECK(check_strict_morphism(wrong_tau, x, x).failed("(1.) index map"));
}

TEST_CASE("check_2morphism") {
  const auto x = load_atlas("two_chart.json");
  const auto h = identity_strict(x);
  const auto g = collapse_to_a(x);
  std::map<std::string, KHomRep> none{{"A", zero_khom(3, 3, 3)}, {"B", zero_khom(2, 3, 2)}};
  std::map<std::string, KHomRep> zero_h{{"A", zero_khom(3, 3, 3)}, {"B", zero_khom(2, 2, 2)}};
  CHECK(check_2morphism(h, h, zero_h, x, x).passed());
  CHECK(check_2morphism(h, g, none, x, x).passed());

  // The literal sum of the two Lambda terms does not vanish here.
  const Report summed = check_2morphism(h, g, none, x, x, TwoMorphismOptions{true});
  CHECK(summed.failed("(c) five-term"));

  auto corrupted = none;
  corrupted["A"] = KHomRep{cmat(3, 3, 3, {0, 0, 0, 0, 1, 0, 0, 0, 0})};
  CHECK(check_2morphism(h, g, corrupted, x, x).failed("(b) homotopy"));
}
