#pragma once

// Quantization and covering driven by the divergence geometry: rastered mass
// centroids, Lloyd relaxation, Bregman k-means, the vertex-based covering
// error of a site set, and greedy eps-nets with coverage and sparsity
// certificates.

#include <cstdint>
#include <functional>
#include <vector>

#include "bvd/core.hpp"
#include "bvd/generator.hpp"

namespace bvd {

// Nonnegative density over the clip window. An empty function means uniform.
using DensityFn = std::function<double(const P2&)>;

// Mass centroid of {x in clip ∩ domain : density(x) > 0} sampled on a
// resolution^2 pixel grid. This is also the minimizer of the integrated
// divergence x -> D_F(x || c) over the region, for every generator alike.
// Throws EmptyRegion when no pixel carries mass.
Vec region_centroid(const Generator& gen, const Rect& clip, const DensityFn& density = {},
                    int resolution = 512);

struct LloydResult {
  std::vector<Vec> sites;
  std::vector<double> objective;  // integrated divergence after each assignment
  std::vector<int> reseeded;      // site ids reseeded from empty cells
  int iterations = 0;
  bool converged = false;
};

// Raster Lloyd iteration: assign pixels to sites by first-type divergence,
// move each site to its cell's mass centroid, repeat. Stops when the
// objective change drops below 1e-9 * |f| or after max_iters passes. Sites
// with empty cells are reseeded at the currently worst-covered pixels.
LloydResult lloyd_quantization(const Generator& gen, std::vector<Vec> sites, const Rect& clip,
                               const DensityFn& density = {}, int max_iters = 100,
                               int resolution = 512);

struct KMeansResult {
  std::vector<Vec> centers;
  std::vector<int> assignment;
  std::vector<double> objective;  // sum of point divergences after each assignment
  std::vector<int> reseeded;      // center ids reseeded from empty clusters
  int iterations = 0;
  bool converged = false;
};

// Bregman k-means: assignment by min D(x || c), center update by the plain
// mean (the divergence minimizer for every generator). Deterministic for a
// fixed seed; empty clusters reseed at the farthest point.
KMeansResult bregman_kmeans(const Generator& gen, const std::vector<Vec>& data, int k,
                            uint64_t seed = 0, int max_iters = 200);

struct CoverageReport {
  double error = 0.0;  // max over clip of min_i D(x || p_i)
  Vec worst_point;     // a diagram vertex attaining the maximum
  int worst_site = -1;
};

// Exact covering error of a site set over the clip window: x -> D(x || p) is
// convex, so per cell the maximum sits on a vertex of the clipped first-type
// cell. Requires the clip rectangle to lie inside the domain.
CoverageReport coverage_error(const Generator& gen, const std::vector<Vec>& sites,
                              const Rect& clip);

double sample_error(const Generator& gen, const std::vector<Vec>& sites, const Rect& clip);

struct EpsNetResult {
  std::vector<Vec> points;     // seeds first, then greedy insertions in order
  std::vector<double> errors;  // covering error before each insertion + final
  bool coverage_certified = false;  // final error <= eps
  double sparsity = 0.0;            // min D(p_j || p_i) over insertion pairs j > i
};

// Greedy farthest-point eps-net: insert the worst-covered diagram vertex
// until the covering error drops to eps. The recorded error sequence is
// non-increasing; insertion beyond max_points raises NonTermination.
EpsNetResult eps_net(const Generator& gen, const Rect& clip, double eps,
                     const std::vector<Vec>& seeds = {}, size_t max_points = 1000000);

}  // namespace bvd
