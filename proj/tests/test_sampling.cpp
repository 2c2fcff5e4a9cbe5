#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvd/core.hpp"
#include "bvd/generator.hpp"
#include "bvd/sampling.hpp"

using namespace bvd;

TEST_CASE("region centroid is the mass centroid") {
  // uniform density on a rectangle: centroid = geometric center, for every
  // generator (the right-centroid of a Bregman divergence is the mean)
  Rect clip{0.25, 0.5, 0.75, 1.0};
  for (const auto& gen : {squared_half_norm(2), shannon(2), exponential(2)}) {
    CAPTURE(gen.name);
    Vec c = region_centroid(gen, clip);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(c[1] == doctest::Approx(0.75).epsilon(1e-9));
  }

  // linear density tilts the centroid: rho(x) = x1 on [0,1]^2 -> E[x1] = 2/3
  Rect unit{0.01, 0.01, 0.99, 0.99};
  Vec c = region_centroid(squared_half_norm(2), unit, [](const P2& x) { return x[0]; }, 1024);
  CHECK(c[0] == doctest::Approx((2.0 / 3.0) * 0.98 + 0.0).epsilon(1e-2));
  CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-3));

  // the centroid minimizes the average divergence against grid competitors
  Generator gen = shannon(2);
  Rect box{0.3, 0.3, 1.7, 1.7};
  Vec best = region_centroid(gen, box, {}, 256);
  auto avg_div = [&](const Vec& cand) {
    double acc = 0.0;
    int n = 0;
    for (int i = 0; i < 24; ++i)
      for (int j = 0; j < 24; ++j) {
        Vec x{box.x0 + (i + 0.5) / 24.0 * (box.x1 - box.x0),
              box.y0 + (j + 0.5) / 24.0 * (box.y1 - box.y0)};
        acc += eval_divergence(gen, x, cand);
        ++n;
      }
    return acc / n;
  };
  double fbest = avg_div(best);
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    Vec cand{rng.uniform(box.x0, box.x1), rng.uniform(box.y0, box.y1)};
    CHECK(fbest <= avg_div(cand) + 1e-6);
  }
}

TEST_CASE("region centroid errors") {
  Generator gen = shannon(2);
  CHECK_THROWS_AS(region_centroid(gen, Rect{1, 1, 0, 0}), ConfigError);
  // zero density everywhere -> empty region
  Rect clip{0.3, 0.3, 0.7, 0.7};
  CHECK_THROWS_AS(region_centroid(gen, clip, [](const P2&) { return 0.0; }),
                  EmptyRegion);
  CHECK_THROWS_AS(region_centroid(gen, clip, [](const P2&) { return -1.0; }),
                  ConfigError);
  // clip escaping the domain: centroid computation masks outside pixels
  Rect half_out{-0.5, 0.3, 0.7, 0.7};
  Vec c = region_centroid(gen, half_out);
  CHECK(c[0] > 0.0);  // only the in-domain strip contributes
  CHECK(gen.domain.contains(c));
}

TEST_CASE("lloyd: k=1 converges to the window centroid") {
  Generator gen = squared_half_norm(2);
  Rect clip{0.0, 0.0, 2.0, 1.0};
  std::vector<Vec> init = {{0.2, 0.2}};
  LloydResult res = lloyd_quantization(gen, init, clip, {}, 50, 256);
  CHECK(res.converged);
  CHECK(res.sites[0][0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(res.sites[0][1] == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(res.reseeded.empty());
}

TEST_CASE("lloyd objective decreases monotonically") {
  Rect clip{0.2, 0.2, 2.8, 2.8};
  for (const auto& gen : {squared_half_norm(2), shannon(2)}) {
    CAPTURE(gen.name);
    Rng rng(11);
    std::vector<Vec> init;
    for (int i = 0; i < 6; ++i)
      init.push_back(Vec{rng.uniform(0.4, 2.6), rng.uniform(0.4, 2.6)});
    LloydResult res = lloyd_quantization(gen, init, clip, {}, 30, 128);
    REQUIRE(res.objective.size() >= 2);
    for (size_t i = 1; i < res.objective.size(); ++i)
      CHECK(res.objective[i] <= res.objective[i - 1] + 1e-9 * (1 + res.objective[i - 1]));
    CHECK(int(res.sites.size()) == 6);
    for (const auto& s : res.sites) {
      CHECK(gen.domain.contains(s));
      CHECK(clip.contains(p2(s)));
    }
  }
}

TEST_CASE("lloyd reseeds stacked duplicates") {
  Generator gen = squared_half_norm(2);
  Rect clip{0.0, 0.0, 1.0, 1.0};
  // two sites at the same spot: one cell starves, gets reseeded, and the run
  // still ends with two separated sites
  std::vector<Vec> init = {{0.5, 0.5}, {0.5, 0.5}};
  LloydResult res = lloyd_quantization(gen, init, clip, {}, 40, 128);
  CHECK(res.reseeded.size() >= 1);
  CHECK(dist2(res.sites[0], res.sites[1]) > 1e-4);
}

TEST_CASE("lloyd validates input") {
  Generator gen = shannon(2);
  Rect clip{0.2, 0.2, 2.8, 2.8};
  std::vector<Vec> none;
  CHECK_THROWS_AS(lloyd_quantization(gen, none, clip), ConfigError);
  std::vector<Vec> outside = {{-1.0, 1.0}};
  CHECK_THROWS_AS(lloyd_quantization(gen, outside, clip), DomainError);
}

TEST_CASE("kmeans recovers separated blobs") {
  Generator gen = squared_half_norm(2);
  Rng rng(21);
  std::vector<Vec> data;
  std::vector<int> truth;
  std::vector<Vec> centers = {{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 40; ++i) {
      data.push_back(Vec{centers[c][0] + rng.uniform(-0.5, 0.5),
                         centers[c][1] + rng.uniform(-0.5, 0.5)});
      truth.push_back(c);
    }
  KMeansResult res = bregman_kmeans(gen, data, 3, 7);
  CHECK(res.converged);
  // every found center is near one true blob center
  for (const auto& c : res.centers) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : centers) best = std::min(best, dist2(c, t));
    CHECK(best < 0.25);
  }
  // cluster labels agree with the blobs up to permutation: points in the same
  // blob share a label
  for (int c = 0; c < 3; ++c) {
    int l0 = res.assignment[c * 40];
    for (int i = 1; i < 40; ++i) CHECK(res.assignment[c * 40 + i] == l0);
  }
}

TEST_CASE("kmeans objective is monotone and k=n reaches zero") {
  Generator gen = shannon(2);
  Rng rng(31);
  std::vector<Vec> data;
  for (int i = 0; i < 12; ++i)
    data.push_back(Vec{rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0)});
  KMeansResult res = bregman_kmeans(gen, data, 4, 3);
  for (size_t i = 1; i < res.objective.size(); ++i)
    CHECK(res.objective[i] <= res.objective[i - 1] + 1e-9 * (1 + res.objective[i - 1]));

  KMeansResult all = bregman_kmeans(gen, data, 12, 3);
  CHECK(all.objective.back() == doctest::Approx(0.0));

  // k=1: center is the arithmetic mean regardless of the generator (the
  // Bregman centroid under the right argument is always the mean)
  KMeansResult one = bregman_kmeans(gen, data, 1, 3);
  Vec mean(2, 0.0);
  for (const auto& d : data) mean = add(mean, d);
  mean = scaled(mean, 1.0 / data.size());
  CHECK(one.centers[0][0] == doctest::Approx(mean[0]).epsilon(1e-9));
  CHECK(one.centers[0][1] == doctest::Approx(mean[1]).epsilon(1e-9));
}

TEST_CASE("kmeans is deterministic per seed and validates input") {
  Generator gen = squared_half_norm(2);
  Rng rng(41);
  std::vector<Vec> data;
  for (int i = 0; i < 30; ++i)
    data.push_back(Vec{rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0)});
  KMeansResult a = bregman_kmeans(gen, data, 5, 99);
  KMeansResult b = bregman_kmeans(gen, data, 5, 99);
  CHECK(a.centers == b.centers);
  CHECK(a.assignment == b.assignment);

  CHECK_THROWS_AS(bregman_kmeans(gen, data, 0, 1), ConfigError);
  CHECK_THROWS_AS(bregman_kmeans(gen, data, 31, 1), ConfigError);
  std::vector<Vec> none;
  CHECK_THROWS_AS(bregman_kmeans(gen, none, 2, 1), ConfigError);
}

TEST_CASE("coverage error of the unit square center") {
  Generator gen = squared_half_norm(2);
  Rect clip{0.0, 0.0, 1.0, 1.0};
  std::vector<Vec> one = {{0.5, 0.5}};
  CoverageReport rep = coverage_error(gen, one, clip);
  // worst point is a corner: D = 0.5 * 0.5 = 0.25
  CHECK(rep.error == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(rep.worst_site == 0);
  CHECK(std::fabs(rep.worst_point[0] - 0.5) == doctest::Approx(0.5).epsilon(1e-9));

  // adding the corners drops it to the in-center gaps
  std::vector<Vec> five = {{0.5, 0.5}, {0, 0}, {1, 0}, {0, 1}, {1, 1}};
  CoverageReport r5 = coverage_error(gen, five, clip);
  CHECK(r5.error < rep.error);

  // sample_error agrees with the cell-vertex bound for convex divergences
  double se = sample_error(gen, one, clip);
  CHECK(se <= rep.error + 1e-9);
  CHECK(se >= rep.error * 0.8);
}

TEST_CASE("coverage error needs the clip inside the domain") {
  Generator gen = shannon(2);
  Rect clip{0.0, 0.0, 1.0, 1.0};  // corner (0,0) is outside the open domain
  std::vector<Vec> one = {{0.5, 0.5}};
  CHECK_THROWS_AS(coverage_error(gen, one, clip), DomainError);
  Rect ok{0.1, 0.1, 1.0, 1.0};
  CoverageReport rep = coverage_error(gen, one, ok);
  CHECK(rep.error > 0.0);
}

TEST_CASE("eps-net certifies coverage and sparsity") {
  Rect clip{0.1, 0.1, 1.1, 1.1};
  for (const auto& gen : {squared_half_norm(2), shannon(2)}) {
    CAPTURE(gen.name);
    for (double eps : {0.05, 0.02}) {
      CAPTURE(eps);
      EpsNetResult net = eps_net(gen, clip, eps);
      CHECK(net.coverage_certified);
      REQUIRE(!net.points.empty());
      CHECK(net.errors.back() <= eps);
      // the recorded error trace is decreasing overall (greedy insertions)
      CHECK(net.errors.front() >= net.errors.back());
      // verify the certificate independently
      CoverageReport rep = coverage_error(gen, net.points, clip);
      CHECK(rep.error <= eps * (1 + 1e-9));
      // sparsity: inserted points are mutually separated in divergence
      if (net.points.size() > 1) CHECK(net.sparsity > 0.0);
      // packing-style bound for squared_half: area argument gives
      // |N| <= area / (pi * eps^2 / 2) * const; sanity-check a loose version
      if (gen.name == "squared_half_norm")
        CHECK(double(net.points.size()) <= 1.2 / (2.0 * eps) * 1.2 / (2.0 * eps) * 4 + 8);
    }
  }
}

TEST_CASE("eps-net respects seeds and guards") {
  Generator gen = squared_half_norm(2);
  Rect clip{0.0, 0.0, 1.0, 1.0};
  std::vector<Vec> seeds = {{0.1, 0.1}, {0.9, 0.9}};
  EpsNetResult net = eps_net(gen, clip, 0.05, seeds);
  CHECK(net.points.size() >= 2);
  CHECK(net.points[0] == seeds[0]);
  CHECK(net.points[1] == seeds[1]);

  CHECK_THROWS_AS(eps_net(gen, clip, 0.0), ConfigError);
  CHECK_THROWS_AS(eps_net(gen, clip, -1.0), ConfigError);
  std::vector<Vec> bad_seed = {{2.0, 2.0}};  // outside the clip
  CHECK_THROWS_AS(eps_net(gen, clip, 0.1, bad_seed), ConfigError);
  // max_points guard trips on an unreachable eps
  CHECK_THROWS_AS(eps_net(gen, clip, 1e-9, {}, 8), NonTermination);
}
