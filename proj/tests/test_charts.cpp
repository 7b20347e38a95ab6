#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace kt;

namespace {

KuranishiChart line_chart(const PolyMap& s, std::vector<FootprintPoint> fp = {}) {
  return KuranishiChart("c", BoxUnion::cube(1, 2.0), 1, s, 1, std::move(fp));
}

}  // namespace

TEST_CASE("new chart") {
  const auto c = line_chart(pm(1, {{{1, {1}}}}), {{"P0", {0.0}}});
  CHECK(c.vdim() == 0);
  const KuranishiChart manifold("M", BoxUnion::cube(3, 2.0), 0, PolyMap(3, 0), 1, {});
  CHECK(manifold.vdim() == 3);
  CHECK_THROWS_AS(line_chart(pm(1, {{{1, {1}}, {0.1, {0}}}}), {{"bad", {0.0}}}), ChartError);
  try {
    line_chart(pm(1, {{{1, {1}}, {0.1, {0}}}}), {{"bad", {0.0}}});
  } catch (const ChartError& e) {
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
  }
  CHECK_THROWS_AS(KuranishiChart("c", BoxUnion::cube(2, 1.0), 1, pm(1, {{{1, {1}}}}), 1, {}), DimensionError);
  CHECK_THROWS_AS(line_chart(pm(1, {{{1, {1}}}}), {{"far", {5.0}}}), ChartError);
}

TEST_CASE("vdim") {
  CHECK(KuranishiChart("a", BoxUnion::cube(3, 1), 1, PolyMap(3, 1), 1, {}).vdim() == 2);
  CHECK(KuranishiChart("b", BoxUnion::cube(2, 1), 2, PolyMap(2, 2), 1, {}).vdim() == 0);
  CHECK(KuranishiChart("c", BoxUnion::cube(6, 1), 0, PolyMap(6, 0), 1, {}).vdim() == 6);
}

TEST_CASE("find_zeros") {
  const auto zs = find_zeros(line_chart(pm(1, {{{1, {2}}, {-1, {0}}}})), 16, 0);
  REQUIRE(zs.size() == 2);
  CHECK(zs[0].x[0] == doctest::Approx(-1.0));
  CHECK(zs[0].sign == -1);
  CHECK(zs[1].x[0] == doctest::Approx(1.0));
  CHECK(zs[1].sign == 1);
  CHECK(find_zeros(line_chart(pm(1, {{{1, {2}}, {1, {0}}}})), 16, 0).empty());
  const auto deg = find_zeros(line_chart(pm(1, {{{1, {2}}}})), 16, 0);
  REQUIRE(deg.size() == 1);
  CHECK(deg[0].degenerate);
  CHECK(std::abs(deg[0].x[0]) < 1e-5);
}

TEST_CASE("find_zeros at density d is a subset of density 2d") {
  const KuranishiChart c("c", BoxUnion::cube(2, 2.0), 2,
                         pm(2, {{{1, {2, 0}}, {-1, {0, 1}}}, {{1, {0, 2}}, {1, {1, 0}}, {-1, {0, 0}}}}), 1, {});
  for (int d : {3, 5, 8}) {
    const auto a = find_zeros(c, d, 1), b = find_zeros(c, 2 * d, 1);
    for (const auto& z : a) {
      bool hit = false;
      for (const auto& w : b) hit |= std::hypot(z.x[0] - w.x[0], z.x[1] - w.x[1]) < 1e-6;
      CHECK(hit);
    }
  }
  CHECK(find_zeros(c, 6, 9) == find_zeros(c, 6, 9));
}

TEST_CASE("from_linf") {
  LinfChart l;
  l.h1 = l.h2 = 1;
  l.brackets.emplace(2, SymmetricTensor::from_dense(2, 1, 1, std::vector{2.0}));
  CHECK(from_linf(l).section() == pm(1, {{{1, {2}}}}));
  l.brackets.emplace(3, SymmetricTensor::from_dense(3, 1, 1, std::vector{6.0}));
  CHECK(approx_equal(from_linf(l).section(), pm(1, {{{1, {2}}, {1, {3}}}})));
  CHECK(from_linf(l).find("origin") != nullptr);

  LinfChart zero;
  zero.h1 = 2;
  zero.h2 = 0;
  const auto c = from_linf(zero);
  CHECK(c.section().is_zero());
  CHECK(c.m() == 0);
  CHECK(c.n() == 2);
}

TEST_CASE("symmetric storage rejects asymmetric data") {
  CHECK_THROWS_AS(SymmetricTensor::from_dense(2, 2, 1, std::vector{0.0, 1.0, 2.0, 0.0}), AsymmetricTensorError);
  const auto t = SymmetricTensor::from_dense(2, 2, 1, std::vector{0.0, 1.0, 1.0, 0.0});
  CHECK(t.get(0, {1, 0}) == 1.0);
  CHECK(t.get(0, {0, 1}) == 1.0);
}

TEST_CASE("Taylor coefficients of from_linf recover the brackets") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    LinfChart l;
    l.h1 = 1 + trial % 3;
    l.h2 = 1 + (trial / 3) % 2;
    for (int k = 2; k <= 4; ++k) {
      SymmetricTensor t(k, l.h1, l.h2);
      for (int a = 0; a < l.h2; ++a)
        for (int r = 0; r < 4; ++r) {
          std::vector<int> idx(k);
          for (auto& i : idx) i = std::uniform_int_distribution<int>(0, l.h1 - 1)(rng);
          t.set(a, idx, coef(rng));
        }
      l.brackets.emplace(k, t);
    }
    const auto s = from_linf(l).section();
    for (int k = 2; k <= 4; ++k) {
      const auto got = bracket_from_section(s, k).to_dense(), want = l.brackets.at(k).to_dense();
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
    }
  }
}

TEST_CASE("potential") {
  LinfChart l;
  l.h1 = l.h2 = 1;
  l.pairing = Matrix::Identity(1, 1);
  l.brackets.emplace(2, SymmetricTensor::from_dense(2, 1, 1, std::vector{2.0}));
  const Potential p = potential(l);
  CHECK(approx_equal(p.f, pm(1, {{{1.0 / 3.0, {3}}}})));
  CHECK(p.verified);

  LinfChart z;
  z.h1 = z.h2 = 2;
  z.pairing = Matrix::Identity(2, 2);
  CHECK(potential(z).f.is_zero());

  LinfChart singular = l;
  singular.pairing = Matrix::Zero(1, 1);
  CHECK_THROWS(potential(singular));
}

TEST_CASE("potential of random charts matches the closed form") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const RandomLinf r = random_linf(rng);
    const Potential p = potential(r.chart);
    CHECK(p.verified);
    CHECK(p.residual <= 1e-9);
    CHECK(max_coefficient_difference(p.f, r.f) <= 1e-9);
  }
}
