#pragma once

// Triangulations dual to the planar diagrams.
//
// Everything reduces to one engine: the lower convex hull of 2D points lifted
// to prescribed heights, built by incremental insertion (Bowyer-Watson with a
// ghost vertex -1 so hull growth needs no special cases). Heights z = F(p)
// give the divergence Delaunay triangulation (straight edges, empty
// circumspheres under in_sphere); heights z = 2 F*(p') on the gradient images
// of the sites give the geodesic triangulation, whose edge set is exactly the
// adjacency graph of the first-type diagram.
//
// Degeneracies: four lifted points on a common plane (cocircular sites) are
// treated as no-conflict -- the triangulation keeps whichever diagonal the
// insertion order produced and general_position_warning is set. Sites lifted
// above the lower hull (possible only for non-convex height assignments, e.g.
// dominated sites of a regular lift) are skipped and listed in `redundant`.
// Fully collinear input has no 2D lower hull -> DegenerateInput.

#include <array>
#include <utility>
#include <vector>

#include "bvd/core.hpp"
#include "bvd/generator.hpp"

namespace bvd {

struct Triangulation {
  int site_count = 0;
  std::vector<std::array<int, 3>> triangles;  // CCW, smallest index first, sorted
  std::vector<int> hull;                      // CCW cycle of hull site indices
  std::vector<int> redundant;                 // sites not on the lower hull
  bool general_position_warning = false;

  // Unique undirected edges (i < j), sorted.
  std::vector<std::pair<int, int>> edges() const;
};

Triangulation lower_hull_triangulation_2d(const std::vector<Vec>& points,
                                          const std::vector<double>& heights);

Triangulation bregman_delaunay_2d(const Generator& gen, const std::vector<Vec>& sites);

Triangulation geodesic_triangulation_2d(const Generator& gen, const std::vector<Vec>& sites);

// True when every triangle's circumsphere is empty of the remaining sites
// (in_sphere >= 0 for every non-vertex site; the tolerance band counts as
// empty). This is the defining property of bregman_delaunay_2d output.
bool empty_sphere_check(const Generator& gen, const std::vector<Vec>& sites,
                        const Triangulation& tri);

// Local regularity of two triangles sharing an edge under the given lift:
// neither opposite vertex lies strictly below the other triangle's lifted
// plane. Throws ConfigError if the triangles do not share exactly one edge.
bool is_regular_pair(const std::vector<Vec>& points, const std::vector<double>& heights,
                     const std::array<int, 3>& t1, const std::array<int, 3>& t2);

// Smallest first-type ball {x : D(x||c) <= r} containing all sites.
// Minimizes max_i D_F*(y || grad(p_i)) over gradient coordinates y (convex),
// by Welzl-style recursion on support sets of size <= 3. At the optimum the
// center lies in the convex hull of the support sites (source coordinates);
// the distance from the center to that hull is the reported residual.
struct EnclosingBall {
  Vec center;             // source coordinates
  double radius = 0.0;
  std::vector<int> support;
  double residual = 0.0;  // optimality certificate, <= 1e-6 expected
};

EnclosingBall smallest_enclosing_ball(const Generator& gen, const std::vector<Vec>& sites);

}  // namespace bvd
