#pragma once

// Geometry of a fixed generator F: the lifted surface z = F(x), tangent
// planes, the two bisector types, the InSphere predicate and circumspheres,
// Bregman balls of both types, geodesics, orthogonality, projection onto
// convex sets, and Euclidean sandwiching of first-type balls.
//
// Conventions used throughout:
//  * bisector_first_type(gen,p,q).eval(x)  == D_F(x||p) - D_F(x||q)
//    (negative side contains p, positive side contains q);
//  * bisector_second_type lives in GRADIENT coordinates,
//    eval(grad(x)) == D_F(p||x) - D_F(q||x);
//  * in_sphere is the sign of the (d+2)x(d+2) lifted determinant divided by
//    the orientation minor, which algebraically equals F(x) - H(x) for the
//    affine H interpolating the lifted simplex: inside = below = negative,
//    independent of simplex orientation.

#include <utility>
#include <vector>

#include "bvd/core.hpp"
#include "bvd/generator.hpp"

namespace bvd {

struct LiftedPoint {
  Vec x;
  double z = 0.0;
};

// Non-vertical plane in lifted space, z = <a, x> + b.
struct LiftedPlane {
  Vec a;
  double b = 0.0;
  double height(const Vec& x) const { return dot(a, x) + b; }
};

LiftedPoint lift(const Generator& gen, const Vec& x);

// Tangent plane of the lifted surface at q: z = <x - q, grad F(q)> + F(q).
// Supports the surface from below; D_F(x||q) is the vertical gap.
LiftedPlane tangent_hyperplane(const Generator& gen, const Vec& q);

Hyperplane bisector_first_type(const Generator& gen, const Vec& p, const Vec& q);
Hyperplane bisector_second_type(const Generator& gen, const Vec& p, const Vec& q);

// -1 inside, +1 outside, 0 within the tolerance band (normalized value
// below kPredicateTol). `simplex` holds d+1 affinely independent points.
int in_sphere(const Generator& gen, const Vec& x, const std::vector<Vec>& simplex);

// Raw predicate value F(x) - H(x); exposed for predicate-consistency tests.
double in_sphere_value(const Generator& gen, const Vec& x, const std::vector<Vec>& simplex);

struct BregmanBall {
  enum class Kind { first, second };  // first: D(x||c) <= r;  second: D(c||x) <= r
  Kind kind = Kind::first;
  Vec center;
  double radius = 0.0;
};

// Unique first-type ball with the d+1 simplex points on its boundary.
// Throws DegenerateSimplex for affinely dependent simplices and DomainError
// when the center falls outside the domain (reported, never clamped).
BregmanBall circumsphere(const Generator& gen, const std::vector<Vec>& simplex);

bool ball_contains(const Generator& gen, const BregmanBall& ball, const Vec& x);

// Second-type membership via duality: D_F(c||x) <= r iff grad(x) lies in the
// FIRST-type ball of F* around grad(c). Agrees with direct evaluation.
bool second_ball_contains_via_dual(const Generator& gen, const Vec& c, double r, const Vec& x);

struct GeodesicArc {
  enum class Kind { gamma, lambda };  // gamma: curved (dual-straight); lambda: straight
  Kind kind = Kind::gamma;
  Vec p, q;
};

// Point at parameter t in [0,1]. gamma: (grad F)^{-1}((1-t) p' + t q');
// lambda: (1-t) p + t q.
Vec geodesic_point(const Generator& gen, const GeodesicArc& arc, double t);

// Divergence-weighted arc length: gamma arcs integrate D_F(p || x(t)) dt,
// lambda arcs integrate D_F(x(t) || p) dt, both over t in [0,1].
double geodesic_length(const Generator& gen, const GeodesicArc& arc, double abs_tol = 1e-8);

// <p - q, grad(r) - grad(q)> == 0 up to 1e-9 * scale: the three-point
// identity's inner-product term, i.e. D(p||q) + D(q||r) = D(p||r).
bool is_bregman_orthogonal(const Generator& gen, const Vec& p, const Vec& q, const Vec& r);

// Intersection of halfspaces eval <= 0 (boxes expressible as 2d of them).
struct ConvexPolytope {
  std::vector<Hyperplane> halves;

  static ConvexPolytope from_box(const Vec& lo, const Vec& hi);
  bool contains(const Vec& x, double tol = 1e-9) const;
  // Euclidean projection (Dykstra's alternating projections). Throws
  // EmptyFeasibleSet when the constraints are inconsistent.
  Vec project(const Vec& x) const;
};

// Bregman projection argmin_{x in W} D_F(x || p) by projected gradient with
// Armijo backtracking; first-order stationarity residual <= 1e-6.
Vec bregman_project(const Generator& gen, const Vec& p, const ConvexPolytope& w,
                    int max_iter = 10000);

// Radii of the largest inscribed / smallest enclosing Euclidean disks of a
// 2D first-type ball, by a 256-direction boundary scan with per-direction
// bisection to 1e-10. The scan stays inside `probe_box`; if the Bregman ball
// leaks out of the box the scan cannot certify anything -> DomainError.
std::pair<double, double> euclidean_sandwich(const Generator& gen, const BregmanBall& ball,
                                             const Rect& probe_box, int directions = 256);

}  // namespace bvd
