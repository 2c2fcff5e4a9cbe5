#include "bvd/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace bvd {

LiftedPoint lift(const Generator& gen, const Vec& x) {
  require_dim(x, gen.dim, "lift");
  if (!gen.domain.contains(x)) throw DomainError(gen.name + ": lift point outside domain");
  double z = gen.f(x);
  if (!std::isfinite(z)) throw NonFiniteError(gen.name + ": lift overflowed");
  return LiftedPoint{x, z};
}

LiftedPlane tangent_hyperplane(const Generator& gen, const Vec& q) {
  require_dim(q, gen.dim, "tangent_hyperplane");
  if (!gen.domain.contains(q)) throw DomainError(gen.name + ": tangent point outside domain");
  Vec gq = gen.grad(q);
  return LiftedPlane{gq, gen.f(q) - dot(gq, q)};
}

Hyperplane bisector_first_type(const Generator& gen, const Vec& p, const Vec& q) {
  require_dim(p, gen.dim, "bisector");
  require_dim(q, gen.dim, "bisector");
  Vec gp = gen.grad(p), gq = gen.grad(q);
  // eval(x) = D(x||p) - D(x||q): the F(x) terms cancel, leaving an affine
  // function of x. Negative side holds p.
  Hyperplane h;
  h.normal = sub(gq, gp);
  h.offset = gen.f(q) - gen.f(p) + dot(gp, p) - dot(gq, q);
  return h;
}

Hyperplane bisector_second_type(const Generator& gen, const Vec& p, const Vec& q) {
  require_dim(p, gen.dim, "bisector");
  require_dim(q, gen.dim, "bisector");
  // In gradient coordinates y = grad(x): eval(y) = D(p||x) - D(q||x)
  //   = F(p) - F(q) + <y, q - p>, an affine function of y.
  Hyperplane h;
  h.normal = sub(q, p);
  h.offset = gen.f(p) - gen.f(q);
  return h;
}

namespace {

// Affine interpolant z = <a, x> + b of the lifted simplex; shared by the
// predicate and circumsphere paths. Throws DegenerateSimplex when the simplex
// is affinely dependent or numerically hopeless.
LiftedPlane simplex_plane(const Generator& gen, const std::vector<Vec>& simplex) {
  const int d = gen.dim;
  if (static_cast<int>(simplex.size()) != d + 1)
    throw DimensionMismatch(gen.name + ": simplex needs exactly d+1 points");
  Mat m(d + 1, d + 1);
  Vec rhs(d + 1);
  for (int r = 0; r <= d; ++r) {
    const Vec& pt = simplex[r];
    require_dim(pt, d, "simplex point");
    if (!gen.domain.contains(pt))
      throw DomainError(gen.name + ": simplex point outside domain");
    for (int c = 0; c < d; ++c) m.at(r, c) = pt[c];
    m.at(r, d) = 1.0;
    rhs[r] = gen.f(pt);
  }
  double cond = 0.0;
  auto sol = solve_linear(m, rhs, &cond);
  if (!sol || cond > kConditionLimit)
    throw DegenerateSimplex(gen.name + ": affinely dependent simplex");
  Vec a(sol->begin(), sol->begin() + d);
  return LiftedPlane{a, (*sol)[d]};
}

}  // namespace

double in_sphere_value(const Generator& gen, const Vec& x, const std::vector<Vec>& simplex) {
  require_dim(x, gen.dim, "in_sphere");
  if (!gen.domain.contains(x)) throw DomainError(gen.name + ": query point outside domain");
  LiftedPlane pl = simplex_plane(gen, simplex);
  return gen.f(x) - pl.height(x);
}

int in_sphere(const Generator& gen, const Vec& x, const std::vector<Vec>& simplex) {
  LiftedPlane pl = simplex_plane(gen, simplex);
  double fx = gen.f(x);
  double hx = pl.height(x);
  double v = fx - hx;
  double tol = kPredicateTol * (1.0 + std::fabs(fx) + std::fabs(hx));
  if (v < -tol) return -1;
  if (v > tol) return +1;
  return 0;
}

BregmanBall circumsphere(const Generator& gen, const std::vector<Vec>& simplex) {
  LiftedPlane pl = simplex_plane(gen, simplex);
  if (!gen.inv_grad)
    throw UnsupportedError(gen.name + ": no inverse gradient; circumsphere unavailable");
  if (gen.grad_image && !gen.grad_image->contains(pl.a))
    throw DomainError(gen.name + ": circumcenter falls outside the domain");
  Vec c = gen.inv_grad(pl.a);
  // Same margin eval_divergence uses, so the returned ball is evaluable.
  if (!all_finite(c) || !gen.domain.contains(c, kDomainMargin))
    throw DomainError(gen.name + ": circumcenter falls outside the domain");
  // Vertical gap between the tangent contact and the simplex plane at c.
  double r = dot(pl.a, c) - gen.f(c) + pl.b;
  if (!std::isfinite(r)) throw NonFiniteError(gen.name + ": circumsphere radius overflowed");
  return BregmanBall{BregmanBall::Kind::first, c, r};
}

bool ball_contains(const Generator& gen, const BregmanBall& ball, const Vec& x) {
  double d = ball.kind == BregmanBall::Kind::first ? eval_divergence(gen, x, ball.center)
                                                   : eval_divergence(gen, ball.center, x);
  return d <= ball.radius;
}

bool second_ball_contains_via_dual(const Generator& gen, const Vec& c, double r, const Vec& x) {
  // D(c||x) = D_{F*}(grad(x) || grad(c)), so test the dual first-type ball.
  Vec gx = gen.grad(x);
  Vec gc = gen.grad(c);
  return eval_dual_divergence(gen, gx, gc) <= r;
}

Vec geodesic_point(const Generator& gen, const GeodesicArc& arc, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("geodesic parameter must be in [0,1]");
  if (arc.kind == GeodesicArc::Kind::lambda) return lerp(arc.p, arc.q, t);
  if (!gen.inv_grad)
    throw UnsupportedError(gen.name + ": no inverse gradient; gamma geodesic unavailable");
  Vec y = lerp(gen.grad(arc.p), gen.grad(arc.q), t);
  Vec x = gen.inv_grad(y);
  if (!all_finite(x)) throw NonFiniteError(gen.name + ": geodesic point overflowed");
  return x;
}

double geodesic_length(const Generator& gen, const GeodesicArc& arc, double abs_tol) {
  if (!gen.domain.contains(arc.p) || !gen.domain.contains(arc.q))
    throw DomainError(gen.name + ": geodesic endpoint outside domain");
  auto integrand = [&](double t) {
    // Endpoint t=0 is the degenerate D(p||p)=0 case; guard the open set.
    Vec xt = geodesic_point(gen, arc, t);
    return arc.kind == GeodesicArc::Kind::gamma ? eval_divergence(gen, arc.p, xt)
                                                : eval_divergence(gen, xt, arc.p);
  };
  return adaptive_simpson(integrand, 0.0, 1.0, abs_tol);
}

bool is_bregman_orthogonal(const Generator& gen, const Vec& p, const Vec& q, const Vec& r) {
  Vec dq = sub(p, q);
  Vec dg = sub(gen.grad(r), gen.grad(q));
  double v = dot(dq, dg);
  return std::fabs(v) <= 1e-9 * (1.0 + norm(dq) * norm(dg));
}

// --- convex polytopes and Bregman projection --------------------------------

ConvexPolytope ConvexPolytope::from_box(const Vec& lo, const Vec& hi) {
  ConvexPolytope w;
  const int d = static_cast<int>(lo.size());
  for (int i = 0; i < d; ++i) {
    Hyperplane upper;  //  x_i <= hi_i
    upper.normal.assign(d, 0.0);
    upper.normal[i] = 1.0;
    upper.offset = -hi[i];
    Hyperplane lower;  // -x_i <= -lo_i
    lower.normal.assign(d, 0.0);
    lower.normal[i] = -1.0;
    lower.offset = lo[i];
    w.halves.push_back(upper);
    w.halves.push_back(lower);
  }
  return w;
}

bool ConvexPolytope::contains(const Vec& x, double tol) const {
  for (const Hyperplane& h : halves)
    if (h.eval(x) > tol * (1.0 + norm(h.normal) * norm(x))) return false;
  return true;
}

Vec ConvexPolytope::project(const Vec& x) const {
  if (halves.empty()) return x;
  // Dykstra's alternating projections onto the halfspaces.
  Vec y = x;
  std::vector<Vec> corrections(halves.size(), Vec(x.size(), 0.0));
  const int max_sweeps = 2000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (size_t i = 0; i < halves.size(); ++i) {
      Vec z = add(y, corrections[i]);
      const Hyperplane& h = halves[i];
      double n2 = norm2(h.normal);
      if (n2 == 0.0) continue;
      double v = h.eval(z);
      Vec proj = v > 0.0 ? sub(z, scaled(h.normal, v / n2)) : z;
      corrections[i] = sub(z, proj);
      moved += dist2(proj, y);
      y = proj;
    }
    if (moved < 1e-26) break;
  }
  if (!contains(y, 1e-7))
    throw EmptyFeasibleSet("polytope projection did not converge; constraints inconsistent?");
  return y;
}

Vec bregman_project(const Generator& gen, const Vec& p, const ConvexPolytope& w, int max_iter) {
  require_dim(p, gen.dim, "bregman_project");
  if (!gen.domain.contains(p)) throw DomainError(gen.name + ": source point outside domain");

  auto in_domain = [&](const Vec& x) { return gen.domain.contains(x); };
  auto objective = [&](const Vec& x) { return eval_divergence(gen, x, p); };
  Vec gp = gen.grad(p);
  auto gradient = [&](const Vec& x) { return sub(gen.grad(x), gp); };

  Vec x = w.project(p);
  if (!in_domain(x)) {
    // Slide from p toward the projection until we re-enter the open domain.
    double t = 1.0;
    for (int k = 0; k < 60 && !in_domain(x); ++k) {
      t *= 0.5;
      x = lerp(p, w.project(p), t);
    }
    if (!in_domain(x))
      throw EmptyFeasibleSet(gen.name + ": could not find a feasible domain point in W");
  }

  double step = 1.0;
  double fx = objective(x);
  for (int it = 0; it < max_iter; ++it) {
    Vec g = gradient(x);
    // Stationarity: unit-step projected gradient residual.
    Vec probe = w.project(sub(x, g));
    double resid = std::sqrt(dist2(x, probe));
    if (resid <= 1e-6 * (1.0 + norm(g))) return x;

    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Vec cand = w.project(sub(x, scaled(g, step)));
      if (in_domain(cand)) {
        double fc = objective(cand);
        double decrease = dot(g, sub(x, cand));
        if (fc <= fx - 1e-4 * decrease + 1e-15) {
          x = cand;
          fx = fc;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Step collapsed: either at a constrained stationary point or wedged
      // against the open domain boundary.
      Vec probe2 = w.project(sub(x, g));
      if (std::sqrt(dist2(x, probe2)) <= 1e-5 * (1.0 + norm(g))) return x;
      throw NonTermination(gen.name + ": projection stalled before reaching stationarity");
    }
    step = std::min(step * 2.0, 1e6);
  }
  throw NonTermination(gen.name + ": projection exceeded the iteration budget");
}

std::pair<double, double> euclidean_sandwich(const Generator& gen, const BregmanBall& ball,
                                             const Rect& probe_box, int directions) {
  if (gen.dim != 2) throw UnsupportedError("euclidean_sandwich: 2D only");
  if (ball.kind != BregmanBall::Kind::first)
    throw UnsupportedError("euclidean_sandwich: first-type balls only");
  if (!(ball.radius > 0.0)) throw ConfigError("euclidean_sandwich: radius must be positive");
  const Vec& c = ball.center;
  if (!gen.domain.contains(c)) throw DomainError(gen.name + ": ball center outside domain");

  auto div_at = [&](double t, double ux, double uy) {
    Vec x{c[0] + t * ux, c[1] + t * uy};
    return eval_divergence(gen, x, c);
  };

  double r_in = std::numeric_limits<double>::infinity();
  double r_out = 0.0;
  for (int k = 0; k < directions; ++k) {
    double ang = 2.0 * M_PI * k / directions;
    double ux = std::cos(ang), uy = std::sin(ang);
    // Max parameter before the ray exits the probe box.
    double t_max = std::numeric_limits<double>::infinity();
    if (ux > 0) t_max = std::min(t_max, (probe_box.x1 - c[0]) / ux);
    if (ux < 0) t_max = std::min(t_max, (probe_box.x0 - c[0]) / ux);
    if (uy > 0) t_max = std::min(t_max, (probe_box.y1 - c[1]) / uy);
    if (uy < 0) t_max = std::min(t_max, (probe_box.y0 - c[1]) / uy);
    if (!(t_max > 0))
      throw DomainError("euclidean_sandwich: center lies outside the probe box");
    if (div_at(t_max, ux, uy) < ball.radius)
      throw DomainError("euclidean_sandwich: Bregman ball exits the probe box");
    double lo = 0.0, hi = t_max;
    while (hi - lo > 1e-10) {
      double mid = (lo + hi) / 2.0;
      if (div_at(mid, ux, uy) < ball.radius)
        lo = mid;
      else
        hi = mid;
    }
    double t_star = (lo + hi) / 2.0;
    r_in = std::min(r_in, t_star);
    r_out = std::max(r_out, t_star);
  }
  return {r_in, r_out};
}

}  // namespace bvd
