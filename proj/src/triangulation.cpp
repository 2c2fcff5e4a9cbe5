#include "bvd/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "bvd/diagram.hpp"
#include "bvd/geometry.hpp"

namespace bvd {

namespace {

constexpr int kGhost = -1;

// z = a x + b y + c through three lifted points.
struct FacetPlane {
  double a = 0, b = 0, c = 0;
  double height(const P2& p) const { return a * p[0] + b * p[1] + c; }
};

FacetPlane facet_plane(const P2& p0, const P2& p1, const P2& p2, double z0, double z1,
                       double z2) {
  Mat m(3, 3);
  m.at(0, 0) = p0[0], m.at(0, 1) = p0[1], m.at(0, 2) = 1.0;
  m.at(1, 0) = p1[0], m.at(1, 1) = p1[1], m.at(1, 2) = 1.0;
  m.at(2, 0) = p2[0], m.at(2, 1) = p2[1], m.at(2, 2) = 1.0;
  auto sol = solve_linear(m, Vec{z0, z1, z2});
  if (!sol) throw DegenerateInput("lower hull: facet through nearly collinear points");
  return FacetPlane{(*sol)[0], (*sol)[1], (*sol)[2]};
}

struct Tri {
  std::array<int, 3> v{};
  FacetPlane plane;  // finite triangles only
  bool alive = true;

  bool ghost() const { return v[0] == kGhost || v[1] == kGhost || v[2] == kGhost; }
};

// Incremental lower-hull construction. The ghost vertex -1 closes the
// combinatorial sphere so hull growth is ordinary cavity starring.
struct HullBuilder {
  const std::vector<P2>& pts;
  const std::vector<double>& z;
  std::vector<Tri> tris;
  std::unordered_map<int64_t, int> owner;  // directed edge -> triangle id
  std::vector<int> redundant;
  bool warning = false;

  HullBuilder(const std::vector<P2>& pts_, const std::vector<double>& z_) : pts(pts_), z(z_) {}

  int64_t ekey(int u, int v) const {
    int64_t base = static_cast<int64_t>(pts.size()) + 2;
    return (static_cast<int64_t>(u) + 1) * base + (v + 1);
  }

  int add_tri(int a, int b, int c) {
    Tri t;
    t.v = {a, b, c};
    if (!t.ghost()) {
      double o = orient2d(pts[a], pts[b], pts[c]);
      if (!(o > 0.0)) throw DegenerateInput("lower hull: degenerate triangle from starring");
      t.plane = facet_plane(pts[a], pts[b], pts[c], z[a], z[b], z[c]);
    }
    int id = static_cast<int>(tris.size());
    tris.push_back(std::move(t));
    owner[ekey(a, b)] = id;
    owner[ekey(b, c)] = id;
    owner[ekey(c, a)] = id;
    return id;
  }

  void kill(int id) {
    const auto& v = tris[id].v;
    tris[id].alive = false;
    owner.erase(ekey(v[0], v[1]));
    owner.erase(ekey(v[1], v[2]));
    owner.erase(ekey(v[2], v[0]));
  }

  // Strictly-below test against a finite facet; the tolerance band is a tie
  // (no conflict, general-position warning).
  bool finite_conflict(const Tri& t, int pi) {
    double h = t.plane.height(pts[pi]);
    double s = z[pi] - h;
    double tol = kPredicateTol * (1.0 + std::fabs(z[pi]) + std::fabs(h));
    if (s < -tol) return true;
    if (s <= tol) warning = true;
    return false;
  }

  void init(std::vector<int>& order) {
    int n = static_cast<int>(pts.size());
    int k = -1;
    double best = 0.0;
    for (int j = 2; j < n; ++j) {
      double o = orient2d(pts[0], pts[1], pts[j]);
      double scale = std::hypot(pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]) *
                     std::hypot(pts[j][0] - pts[0][0], pts[j][1] - pts[0][1]);
      if (std::fabs(o) > kPredicateTol * (1.0 + scale)) {
        k = j;
        best = o;
        break;
      }
    }
    if (k < 0) throw DegenerateInput("lower hull: all points are collinear");
    int a = 0, b = 1;
    if (best < 0) std::swap(a, b);
    add_tri(a, b, k);
    add_tri(b, a, kGhost);
    add_tri(k, b, kGhost);
    add_tri(a, k, kGhost);
    for (int j = 2; j < n; ++j)
      if (j != k) order.push_back(j);
  }

  void insert(int pi) {
    const int m = static_cast<int>(tris.size());
    std::vector<char> confl(m, 0);
    bool any = false;
    for (int t = 0; t < m; ++t) {
      if (!tris[t].alive || tris[t].ghost()) continue;
      if (finite_conflict(tris[t], pi)) confl[t] = 1, any = true;
    }
    for (int t = 0; t < m; ++t) {
      if (!tris[t].alive || !tris[t].ghost()) continue;
      const auto& v = tris[t].v;
      int gi = v[0] == kGhost ? 0 : (v[1] == kGhost ? 1 : 2);
      int bb = v[(gi + 1) % 3];  // ghost's finite edge runs bb -> aa,
      int aa = v[(gi + 2) % 3];  // the hull edge is aa -> bb
      double o = orient2d(pts[aa], pts[bb], pts[pi]);
      double scale = std::hypot(pts[bb][0] - pts[aa][0], pts[bb][1] - pts[aa][1]) *
                     std::hypot(pts[pi][0] - pts[aa][0], pts[pi][1] - pts[aa][1]);
      double tol = kPredicateTol * (1.0 + scale);
      if (o < -tol) {
        confl[t] = 1, any = true;
      } else if (o <= tol) {
        // Collinear with a hull edge: join the cavity only alongside the
        // finite neighbor, which keeps the starring free of slivers.
        warning = true;
        int nb = owner.at(ekey(aa, bb));
        if (confl[nb]) confl[t] = 1, any = true;
      }
    }
    if (!any) {
      redundant.push_back(pi);
      return;
    }

    std::map<int, int> bnd;  // u -> v over boundary edges (u, v) of the cavity
    for (int t = 0; t < m; ++t) {
      if (!confl[t]) continue;
      const auto& v = tris[t].v;
      for (int e = 0; e < 3; ++e) {
        int u = v[e], w = v[(e + 1) % 3];
        int nb = owner.at(ekey(w, u));
        if (confl[nb]) continue;
        if (bnd.count(u))
          throw DegenerateInput("lower hull: cavity boundary is not a simple cycle");
        bnd[u] = w;
      }
    }
    if (bnd.empty()) throw DegenerateInput("lower hull: insertion cavity has no boundary");
    int start = bnd.begin()->first;
    int cur = start;
    size_t steps = 0;
    do {
      auto it = bnd.find(cur);
      if (it == bnd.end())
        throw DegenerateInput("lower hull: cavity boundary is not a simple cycle");
      cur = it->second;
      if (++steps > bnd.size())
        throw DegenerateInput("lower hull: cavity boundary is not a simple cycle");
    } while (cur != start);
    if (steps != bnd.size())
      throw DegenerateInput("lower hull: cavity boundary is not a simple cycle");

    for (int t = 0; t < m; ++t)
      if (confl[t]) kill(t);
    for (const auto& [u, w] : bnd) add_tri(u, w, pi);
  }
};

std::array<int, 3> canonical(std::array<int, 3> t) {
  int k = t[0] <= t[1] && t[0] <= t[2] ? 0 : (t[1] <= t[2] ? 1 : 2);
  return {t[k], t[(k + 1) % 3], t[(k + 2) % 3]};
}

Triangulation build_lower_hull(const std::vector<P2>& pts, const std::vector<double>& z) {
  if (pts.size() < 3) throw DegenerateInput("lower hull: need at least 3 points");
  for (double h : z)
    if (!std::isfinite(h)) throw NonFiniteError("lower hull: non-finite height");

  HullBuilder hb(pts, z);
  std::vector<int> order;
  hb.init(order);
  for (int pi : order) hb.insert(pi);

  Triangulation out;
  out.site_count = static_cast<int>(pts.size());
  out.redundant = hb.redundant;
  out.general_position_warning = hb.warning;

  std::map<int, int> hull_next;
  for (const auto& t : hb.tris) {
    if (!t.alive) continue;
    if (!t.ghost()) {
      out.triangles.push_back(canonical(t.v));
      continue;
    }
    int gi = t.v[0] == kGhost ? 0 : (t.v[1] == kGhost ? 1 : 2);
    int bb = t.v[(gi + 1) % 3];
    int aa = t.v[(gi + 2) % 3];
    hull_next[aa] = bb;  // hull edge aa -> bb, interior on the left
  }
  std::sort(out.triangles.begin(), out.triangles.end());

  if (!hull_next.empty()) {
    int start = hull_next.begin()->first;
    int cur = start;
    do {
      out.hull.push_back(cur);
      cur = hull_next.at(cur);
      if (out.hull.size() > hull_next.size())
        throw DegenerateInput("lower hull: hull cycle is inconsistent");
    } while (cur != start);
  }
  return out;
}

std::vector<P2> to_p2(const std::vector<Vec>& points) {
  std::vector<P2> pts;
  pts.reserve(points.size());
  for (const auto& v : points) {
    require_dim(v, 2, "triangulation point");
    pts.push_back(p2(v));
  }
  return pts;
}

}  // namespace

std::vector<std::pair<int, int>> Triangulation::edges() const {
  std::set<std::pair<int, int>> es;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      es.insert({std::min(a, b), std::max(a, b)});
    }
  return {es.begin(), es.end()};
}

Triangulation lower_hull_triangulation_2d(const std::vector<Vec>& points,
                                          const std::vector<double>& heights) {
  if (points.size() != heights.size())
    throw DimensionMismatch("lower hull: points/heights size mismatch");
  return build_lower_hull(to_p2(points), heights);
}

Triangulation bregman_delaunay_2d(const Generator& gen, const std::vector<Vec>& sites) {
  validate_sites(gen, sites);
  if (sites.size() < 3) throw DegenerateInput("delaunay: need at least 3 sites");
  std::vector<double> z;
  z.reserve(sites.size());
  for (const auto& s : sites) z.push_back(gen.f(s));
  return build_lower_hull(to_p2(sites), z);
}

Triangulation geodesic_triangulation_2d(const Generator& gen, const std::vector<Vec>& sites) {
  validate_sites(gen, sites);
  if (sites.size() < 3) throw DegenerateInput("geodesic triangulation: need at least 3 sites");
  std::vector<P2> dual;
  std::vector<double> z;
  dual.reserve(sites.size());
  z.reserve(sites.size());
  for (const auto& s : sites) {
    Vec g = gen.grad(s);
    // Height of the polar lift: 2 F*(p') = 2 (<p, p'> - F(p)). The lower hull
    // of these heights over the gradient images is the regular triangulation
    // whose cells are the first-type diagram.
    dual.push_back(p2(g));
    z.push_back(2.0 * (dot(s, g) - gen.f(s)));
  }
  return build_lower_hull(dual, z);
}

bool empty_sphere_check(const Generator& gen, const std::vector<Vec>& sites,
                        const Triangulation& tri) {
  for (const auto& t : tri.triangles) {
    std::vector<Vec> simplex{sites[t[0]], sites[t[1]], sites[t[2]]};
    for (int j = 0; j < static_cast<int>(sites.size()); ++j) {
      if (j == t[0] || j == t[1] || j == t[2]) continue;
      if (in_sphere(gen, sites[j], simplex) < 0) return false;
    }
  }
  return true;
}

bool is_regular_pair(const std::vector<Vec>& points, const std::vector<double>& heights,
                     const std::array<int, 3>& t1, const std::array<int, 3>& t2) {
  if (points.size() != heights.size())
    throw DimensionMismatch("regular pair: points/heights size mismatch");
  std::vector<int> shared;
  int opp2 = -1;
  for (int v : t2) {
    if (v == t1[0] || v == t1[1] || v == t1[2])
      shared.push_back(v);
    else
      opp2 = v;
  }
  if (shared.size() != 2 || opp2 < 0)
    throw ConfigError("regular pair: triangles do not share exactly one edge");
  int opp1 = -1;
  for (int v : t1)
    if (v != shared[0] && v != shared[1]) opp1 = v;

  std::vector<P2> pts = to_p2(points);
  auto above = [&](const std::array<int, 3>& t, int x) {
    FacetPlane pl = facet_plane(pts[t[0]], pts[t[1]], pts[t[2]], heights[t[0]], heights[t[1]],
                                heights[t[2]]);
    double h = pl.height(pts[x]);
    double tol = kPredicateTol * (1.0 + std::fabs(heights[x]) + std::fabs(h));
    return heights[x] - h >= -tol;
  };
  return above(t1, opp2) && above(t2, opp1);
}

// --- smallest enclosing first-type ball -------------------------------------

namespace {

// Candidate ball in dual coordinates: center y, radius max_i D_F*(y || y_i).
struct DualBall {
  Vec y;
  double r = -1.0;  // r < 0: covers nothing
  std::vector<int> support;
};

struct SebContext {
  const Generator& gen;
  const std::vector<Vec>& sites;
  std::vector<Vec> grads;

  double dual_div(const Vec& y, int i) const {
    try {
      return eval_dual_divergence(gen, y, grads[i]);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  bool covers(const DualBall& b, int i) const {
    if (b.r < 0 || b.y.empty()) return false;
    return dual_div(b.y, i) <= b.r + kPredicateTol * (1.0 + b.r);
  }

  // Equality locus D*(y||y_i) = D*(y||y_j) is the affine line
  // <p_j - p_i, y> = F(p_j) - F(p_i).
  Hyperplane equality_line(int i, int j) const {
    Vec n = sub(sites[j], sites[i]);
    double rhs = gen.f(sites[j]) - gen.f(sites[i]);
    return Hyperplane{n, -rhs};  // eval(y) = <n, y> - rhs
  }

  DualBall pair_ball(int i, int j) const {
    Hyperplane line = equality_line(i, j);
    // Feasible anchor: the segment y_i -> y_j crosses the locus exactly once
    // (monotone gradients), and the gradient image is convex.
    double denom = dot(line.normal, sub(grads[j], grads[i]));
    double t = (-line.offset - dot(line.normal, grads[i])) / denom;
    Vec y0 = lerp(grads[i], grads[j], t);
    Vec d{-line.normal[1], line.normal[0]};
    double dn = norm(d);
    d = scaled(d, 1.0 / dn);

    auto phi = [&](double s) {
      Vec y = add(y0, scaled(d, s));
      return std::max(dual_div(y, i), dual_div(y, j));
    };
    // Bracket the 1D convex minimum around s = 0, then golden-section.
    double h = 1e-3 * (1.0 + norm(y0));
    double a = -h, b = h, fa = phi(a), fb = phi(b), f0 = phi(0.0);
    for (int it = 0; it < 200 && fa < f0; ++it) a *= 2.0, fa = phi(a);
    for (int it = 0; it < 200 && fb < f0; ++it) b *= 2.0, fb = phi(b);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = phi(x1), f2 = phi(x2);
    for (int it = 0; it < 160; ++it) {
      if (f1 <= f2) {
        b = x2, x2 = x1, f2 = f1;
        x1 = b - gr * (b - a);
        f1 = phi(x1);
      } else {
        a = x1, x1 = x2, f1 = f2;
        x2 = a + gr * (b - a);
        f2 = phi(x2);
      }
    }
    double s = f1 <= f2 ? x1 : x2;
    DualBall out;
    out.y = add(y0, scaled(d, s));
    out.r = std::max(dual_div(out.y, i), dual_div(out.y, j));
    out.support = {i, j};
    return out;
  }

  DualBall triple_ball(int i, int j, int k) const {
    Hyperplane l1 = equality_line(i, j);
    Hyperplane l2 = equality_line(i, k);
    Mat m(2, 2);
    m.at(0, 0) = l1.normal[0], m.at(0, 1) = l1.normal[1];
    m.at(1, 0) = l2.normal[0], m.at(1, 1) = l2.normal[1];
    auto sol = solve_linear(m, Vec{-l1.offset, -l2.offset});
    DualBall out;
    if (!sol) return out;  // collinear sites: a pair dominates
    double di = dual_div(*sol, i);
    if (!std::isfinite(di)) return out;
    out.y = *sol;
    out.r = std::max({di, dual_div(*sol, j), dual_div(*sol, k)});
    out.support = {i, j, k};
    return out;
  }

  DualBall of_support(const std::vector<int>& rs) const {
    if (rs.empty()) return DualBall{};
    if (rs.size() == 1) return DualBall{grads[rs[0]], 0.0, rs};
    if (rs.size() == 2) return pair_ball(rs[0], rs[1]);
    DualBall b = triple_ball(rs[0], rs[1], rs[2]);
    if (b.r >= 0) return b;
    // Degenerate triple: fall back to the best covering pair.
    DualBall best;
    for (int a = 0; a < 3; ++a)
      for (int c = a + 1; c < 3; ++c) {
        DualBall pb = pair_ball(rs[a], rs[c]);
        int other = rs[3 - a - c];
        if (!covers(pb, other)) continue;
        if (best.r < 0 || pb.r < best.r) best = pb;
      }
    return best;
  }

  DualBall welzl(std::vector<int>& pts, size_t limit, std::vector<int> rs) {
    if (limit == 0 || rs.size() == 3) return of_support(rs);
    int p = pts[limit - 1];
    DualBall b = welzl(pts, limit - 1, rs);
    if (covers(b, p)) return b;
    rs.push_back(p);
    return welzl(pts, limit - 1, std::move(rs));
  }
};

double point_segment_dist(const Vec& x, const Vec& a, const Vec& b) {
  Vec ab = sub(b, a);
  double t = dot(sub(x, a), ab) / std::max(norm2(ab), 1e-300);
  t = std::clamp(t, 0.0, 1.0);
  return norm(sub(x, lerp(a, b, t)));
}

double hull_distance(const Vec& x, const std::vector<Vec>& pts) {
  if (pts.size() == 1) return norm(sub(x, pts[0]));
  if (pts.size() == 2) return point_segment_dist(x, pts[0], pts[1]);
  P2 xp = p2(x);
  double o0 = orient2d(p2(pts[0]), p2(pts[1]), xp);
  double o1 = orient2d(p2(pts[1]), p2(pts[2]), xp);
  double o2 = orient2d(p2(pts[2]), p2(pts[0]), xp);
  if ((o0 >= 0 && o1 >= 0 && o2 >= 0) || (o0 <= 0 && o1 <= 0 && o2 <= 0)) return 0.0;
  return std::min({point_segment_dist(x, pts[0], pts[1]), point_segment_dist(x, pts[1], pts[2]),
                   point_segment_dist(x, pts[2], pts[0])});
}

}  // namespace

EnclosingBall smallest_enclosing_ball(const Generator& gen, const std::vector<Vec>& sites) {
  validate_sites(gen, sites);
  if (!gen.inv_grad)
    throw UnsupportedError("smallest enclosing ball: generator has no inverse gradient");
  if (gen.dim != 2) throw DimensionMismatch("smallest enclosing ball: 2D only");

  SebContext ctx{gen, sites, {}};
  ctx.grads.reserve(sites.size());
  for (const auto& s : sites) ctx.grads.push_back(gen.grad(s));

  const int n = static_cast<int>(sites.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Rng rng(0x5eb5eb);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  DualBall b = n == 1 ? DualBall{ctx.grads[0], 0.0, {0}}
                      : ctx.welzl(order, order.size(), {});
  if (b.r < 0 || b.y.empty())
    throw NonTermination("smallest enclosing ball: no valid support ball found");

  EnclosingBall out;
  out.center = gen.inv_grad(b.y);
  if (!gen.domain.contains(out.center))
    throw DomainError("smallest enclosing ball: center falls outside the domain");
  double r = 0.0;
  for (int i = 0; i < n; ++i) r = std::max(r, eval_divergence(gen, sites[i], out.center));
  out.radius = r;
  out.support = b.support;
  std::sort(out.support.begin(), out.support.end());

  // Optimality certificate: the center must lie in the hull of the support
  // sites (source coordinates), i.e. zero lies in the hull of the active
  // subgradients c - p_i.
  std::vector<Vec> sp;
  for (int i : out.support) sp.push_back(sites[i]);
  out.residual = hull_distance(out.center, sp);
  return out;
}

}  // namespace bvd
