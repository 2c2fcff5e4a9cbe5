#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bvd/core.hpp"

using namespace bvd;

TEST_CASE("vector helpers") {
  Vec a{1, 2, 3}, b{4, 5, 6};
  CHECK(dot(a, b) == 32);
  CHECK(sub(b, a) == Vec{3, 3, 3});
  CHECK(add(a, b) == Vec{5, 7, 9});
  CHECK(scaled(a, 2) == Vec{2, 4, 6});
  CHECK(lerp(a, b, 0.5) == Vec{2.5, 3.5, 4.5});
  CHECK(norm2(a) == 14);
  CHECK(dist2(a, b) == 27);
  CHECK(all_finite(a));
  CHECK_FALSE(all_finite(Vec{1, std::nan("")}));
  CHECK_THROWS_AS(require_dim(a, 2, "x"), DimensionMismatch);
}

TEST_CASE("linear solve and inverse") {
  Mat m(2, 2);
  m.at(0, 0) = 2, m.at(0, 1) = 1, m.at(1, 0) = 1, m.at(1, 1) = 3;
  auto x = solve_linear(m, Vec{5, 10});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == doctest::Approx(1.0));
  CHECK((*x)[1] == doctest::Approx(3.0));

  auto inv = invert(m);
  REQUIRE(inv.has_value());
  Vec y = mat_vec(*inv, Vec{5, 10});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(3.0));
  CHECK(determinant(m) == doctest::Approx(5.0));

  Mat sing(2, 2);
  sing.at(0, 0) = 1, sing.at(0, 1) = 2, sing.at(1, 0) = 2, sing.at(1, 1) = 4;
  CHECK_FALSE(solve_linear(sing, Vec{1, 1}).has_value());
}

TEST_CASE("symmetric 2x2 eigenvalues") {
  auto ev = sym2_eigenvalues(2, 1, 2);
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(3.0));
  auto iso = sym2_eigenvalues(4, 0, 4);
  CHECK(iso[0] == doctest::Approx(4.0));
  CHECK(iso[1] == doctest::Approx(4.0));
}

TEST_CASE("intervals and domains") {
  Interval open{0, 1};
  CHECK(open.contains(0.5));
  CHECK_FALSE(open.contains(0.0));
  CHECK_FALSE(open.contains(1.0));
  CHECK_FALSE(open.contains(std::numeric_limits<double>::infinity()));
  CHECK_FALSE(Interval{1, -1}.contains(0.0));
  CHECK(Interval{1, -1}.empty());

  DomainSpec all = DomainSpec::all_space(2);
  CHECK(all.contains(Vec{-1e100, 1e100}));
  DomainSpec pos = DomainSpec::positive_orthant(2);
  CHECK(pos.contains(Vec{0.1, 0.1}));
  CHECK_FALSE(pos.contains(Vec{0.1, 0.0}));
  DomainSpec box = DomainSpec::open_box(2, 0, 1);
  CHECK(box.contains(Vec{0.5, 0.5}));
  CHECK_FALSE(box.contains(Vec{0.5, 1.0}));
  DomainSpec sim = DomainSpec::open_simplex(2);
  CHECK(sim.contains(Vec{0.3, 0.3}));
  CHECK_FALSE(sim.contains(Vec{0.6, 0.6}));

  DomainSpec both = DomainSpec::intersect(pos, box);
  CHECK(both.contains(Vec{0.5, 0.5}));
  CHECK_FALSE(both.contains(Vec{1.5, 0.5}));
  DomainSpec neg = DomainSpec::open_box(2, -2, -1);
  CHECK_THROWS_AS(DomainSpec::intersect(pos, neg), EmptyDomain);
}

TEST_CASE("polygon clipping") {
  Polygon2 square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polygon_area(square) == doctest::Approx(1.0));
  P2 c = polygon_centroid(square);
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(0.5));
  CHECK(polygon_contains(square, P2{0.5, 0.5}));
  CHECK_FALSE(polygon_contains(square, P2{1.5, 0.5}));

  Hyperplane h{Vec{1, 0}, -0.5};  // keep x <= 0.5
  Polygon2 half = clip_halfplane(square, h);
  CHECK(polygon_area(half) == doctest::Approx(0.5));

  Hyperplane away{Vec{1, 0}, 5};  // keep x <= -5: everything gone
  CHECK(clip_halfplane(square, away).empty());

  Hyperplane keep{Vec{1, 0}, 0.5};  // keep x <= -0.5 reversed sign: x+0.5<=0 none
  CHECK(clip_halfplane(square, keep).empty());

  CHECK(orient2d(P2{0, 0}, P2{1, 0}, P2{0, 1}) > 0);
  CHECK(orient2d(P2{0, 0}, P2{0, 1}, P2{1, 0}) < 0);
  CHECK(orient2d(P2{0, 0}, P2{1, 1}, P2{2, 2}) == doctest::Approx(0.0));
}

TEST_CASE("rect") {
  Rect r{0, 0, 2, 1};
  CHECK(r.valid());
  CHECK(r.width() == 2);
  CHECK(r.height() == 1);
  CHECK(r.contains(P2{1, 0.5}));
  CHECK_FALSE(r.contains(P2{3, 0.5}));
  CHECK(polygon_area(r.polygon()) == doctest::Approx(2.0));
}

TEST_CASE("rng determinism") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng d(1), e(2);
  CHECK(d.next_u64() != e.next_u64());
}

TEST_CASE("adaptive simpson") {
  double i1 = adaptive_simpson([](double x) { return x * x; }, 0, 1, 1e-12);
  CHECK(i1 == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  double i2 = adaptive_simpson([](double x) { return std::sin(x); }, 0, M_PI, 1e-12);
  CHECK(i2 == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(adaptive_simpson([](double) { return 1.0; }, 3, 3, 1e-12) == 0.0);
}

TEST_CASE("parallel_for covers the range exactly once") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, [&](int b, int e) {
    for (int i = b; i < e; ++i) hits[i] += 1;
  });
  for (int h : hits) CHECK(h == 1);
  bool ran = false;  // n = 0 edge
  parallel_for(0, [&](int, int) { ran = true; });
  CHECK_FALSE(ran);
}
