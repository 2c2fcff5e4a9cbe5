#pragma once

// Planar (d = 2) Voronoi diagrams under Bregman divergences.
//
// First-type diagrams (min D_F(x || p_i)) have affine bisectors and convex
// cells; they are computed exactly by halfplane clipping and coincide with
// the power diagram of the lifted balls from to_power_balls(). Second-type
// diagrams (min D_F(p_i || x)) are affine in gradient coordinates: we build
// the dual first-type diagram there and map cell boundaries back through the
// inverse gradient (sampled polylines, hence "curved" cells). Weighted
// diagrams shift each bisector by w_i - w_j; k-order diagrams reduce to a
// weighted diagram over subset centroids c_A = (grad F)^{-1}(mean of
// gradients). The raster oracle recomputes everything per pixel by brute
// force and is the universal cross-check.

#include <array>
#include <utility>
#include <vector>

#include "bvd/core.hpp"
#include "bvd/generator.hpp"

namespace bvd {

// Euclidean ball (possibly of imaginary radius: r2 < 0) whose power distance
// ordering reproduces the first-type divergence ordering:
//   |x - center|^2 - r2  orders like  D_F(x || p).
// center lives in GRADIENT coordinates even though x is a source point.
struct PowerBall {
  Vec center;
  double r2 = 0.0;

  double power(const Vec& x) const { return dist2(x, center) - r2; }
};

std::vector<PowerBall> to_power_balls(const Generator& gen, const std::vector<Vec>& sites);

struct Cell {
  std::vector<int> sites;  // one id, or the k-subset for k-order diagrams
  Polygon2 poly;           // CCW; empty when the cell is empty
  bool bounded = true;     // false: cell clipped from an unbounded region
};

struct PlanarDiagram {
  enum class Kind { first, second, weighted, k_order };
  Kind kind = Kind::first;
  Rect clip;
  std::vector<Vec> sites;
  std::vector<Cell> cells;
  int k = 1;  // k-order only
};

// Validation shared by diagram/triangulation entry points: 2D sites, inside
// the domain, pairwise distinct (min gap 1e-9 -> DegenerateSites).
void validate_sites(const Generator& gen, const std::vector<Vec>& sites);

PlanarDiagram first_type_diagram_2d(const Generator& gen, const std::vector<Vec>& sites,
                                    const Rect& clip);

PlanarDiagram weighted_first_type_diagram_2d(const Generator& gen, const std::vector<Vec>& sites,
                                             const std::vector<double>& weights,
                                             const Rect& clip);

// edge_samples: boundary samples per gradient-space edge when mapping cells
// back to source coordinates.
PlanarDiagram second_type_diagram_2d(const Generator& gen, const std::vector<Vec>& sites,
                                     const Rect& clip, int edge_samples = 32);

// Cells labeled by k-subsets in lexicographic subset order (empty subsets
// kept, possibly with empty polygons). n is capped so the subset count stays
// sane: C(n, k) with n <= 14, else TooManySubsets.
PlanarDiagram k_order_diagram_2d(const Generator& gen, const std::vector<Vec>& sites, int k,
                                 const Rect& clip);

// All diagram vertices: points equidistant (in divergence) from three sites
// and not dominated by any other site. Triples with near-parallel bisectors
// contribute no vertex.
std::vector<std::pair<Vec, std::array<int, 3>>> diagram_vertices(const Generator& gen,
                                                                 const std::vector<Vec>& sites);

// Pairs (i, j) whose first-type cells share a boundary segment. Computed on
// an effectively unbounded window (the bisector arrangement needs no
// generator evaluations away from the sites), so open domains are fine.
std::vector<std::pair<int, int>> first_type_adjacency(const Generator& gen,
                                                      const std::vector<Vec>& sites,
                                                      const std::vector<double>* weights = nullptr);

// --- raster oracle ----------------------------------------------------------

struct RasterLabels {
  int width = 0, height = 0;
  Rect clip;
  std::vector<int> labels;  // row-major, row 0 = top of clip; -1 = masked

  int at(int row, int col) const { return labels[static_cast<size_t>(row) * width + col]; }
  P2 pixel_center(int row, int col) const {
    return P2{clip.x0 + (col + 0.5) * clip.width() / width,
              clip.y1 - (row + 0.5) * clip.height() / height};
  }
};

enum class RasterMode { first, second, symmetrized };

// Brute-force per-pixel winner (ties -> lowest site index; pixels outside the
// domain masked -1). `weights` applies the additive shift (first mode only).
RasterLabels raster_diagram(const Generator& gen, const std::vector<Vec>& sites, RasterMode mode,
                            const Rect& clip, int resolution,
                            const std::vector<double>* weights = nullptr);

// k-bag variant: site i carries mixture weights alphas[i] over `basis`, and
// the per-site divergence is sum_l alphas[i][l] * D_{F_l}(x || p_i).
RasterLabels raster_kbag(const std::vector<Generator>& basis, const std::vector<Vec>& alphas,
                         const std::vector<Vec>& sites, const Rect& clip, int resolution);

// k-order oracle: label = lexicographic rank of the subset of k smallest
// divergences (ties by site index). Matches k_order_diagram_2d cell order.
RasterLabels raster_korder(const Generator& gen, const std::vector<Vec>& sites, int k,
                           const Rect& clip, int resolution);

// Rasterize exact cells with the same pixel grid (point-in-polygon; pixels
// claimed by zero or several cells get -1).
RasterLabels rasterize_cells(const PlanarDiagram& diagram, int resolution);

// Fraction of agreeing pixels among those that are (a) unmasked in both, and
// (b) not within 1 pixel of an oracle label change. Returns 1.0 when nothing
// qualifies; `considered` (optional) receives the sample size.
double label_agreement(const RasterLabels& oracle, const RasterLabels& candidate,
                       long* considered = nullptr);

// Lexicographic k-subset enumeration (shared by k-order code and tests).
std::vector<std::vector<int>> k_subsets(int n, int k);

}  // namespace bvd
