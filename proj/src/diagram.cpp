#include "bvd/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bvd/geometry.hpp"

namespace bvd {

void validate_sites(const Generator& gen, const std::vector<Vec>& sites) {
  if (sites.empty()) throw ConfigError("site set is empty");
  for (const Vec& s : sites) {
    require_dim(s, gen.dim, "site");
    if (!gen.domain.contains(s))
      throw DomainError(gen.name + ": site outside the open domain");
  }
  for (size_t i = 0; i < sites.size(); ++i)
    for (size_t j = i + 1; j < sites.size(); ++j)
      if (dist2(sites[i], sites[j]) <= 1e-18)
        throw DegenerateSites("sites " + std::to_string(i) + " and " + std::to_string(j) +
                              " coincide (gap below 1e-9)");
}

std::vector<PowerBall> to_power_balls(const Generator& gen, const std::vector<Vec>& sites) {
  validate_sites(gen, sites);
  std::vector<PowerBall> balls;
  balls.reserve(sites.size());
  for (const Vec& p : sites) {
    Vec gp = gen.grad(p);
    // |x|^2 - 2<x,p'> - 2 F(p) + 2<p,p'> == |x - p'|^2 - r2 with:
    double r2 = dot(gp, gp) + 2.0 * (gen.f(p) - dot(p, gp));
    balls.push_back(PowerBall{gp, r2});
  }
  return balls;
}

namespace {

double clip_eps(const Hyperplane& h, double diag) {
  return 1e-12 * (norm(h.normal) * diag + std::fabs(h.offset) + 1.0);
}

// Clip `base` by every halfplane in `planes` (eval <= 0 kept).
Polygon2 clip_all(Polygon2 base, const std::vector<Hyperplane>& planes, double diag) {
  for (const Hyperplane& h : planes) {
    if (base.empty()) break;
    base = clip_halfplane(base, h, clip_eps(h, diag));
  }
  return base;
}

Rect big_window(const Rect& clip) {
  double cx = (clip.x0 + clip.x1) / 2.0, cy = (clip.y0 + clip.y1) / 2.0;
  double half = 1e6 * std::max({clip.width(), clip.height(), 1.0});
  return Rect{cx - half, cy - half, cx + half, cy + half};
}

bool touches(const Polygon2& poly, const Rect& box) {
  double eps = 1e-6 * std::max(box.width(), box.height());
  for (const P2& p : poly) {
    if (p[0] < box.x0 + eps || p[0] > box.x1 - eps || p[1] < box.y0 + eps ||
        p[1] > box.y1 - eps)
      return true;
  }
  return false;
}

PlanarDiagram halfplane_diagram(const Generator& gen, const std::vector<Vec>& sites,
                                const std::vector<double>* weights, const Rect& clip,
                                PlanarDiagram::Kind kind) {
  validate_sites(gen, sites);
  if (!clip.valid()) throw ConfigError("clip rectangle is empty");
  if (weights && weights->size() != sites.size())
    throw DimensionMismatch("weights/site count mismatch");
  const int n = static_cast<int>(sites.size());
  double diag = std::hypot(clip.width(), clip.height());
  Rect big = big_window(clip);

  PlanarDiagram d;
  d.kind = kind;
  d.clip = clip;
  d.sites = sites;
  d.cells.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Hyperplane> planes;
    planes.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Hyperplane h = bisector_first_type(gen, sites[i], sites[j]);
      if (weights) h.offset += (*weights)[i] - (*weights)[j];
      planes.push_back(h);
    }
    Cell cell;
    cell.sites = {i};
    Polygon2 unclipped = clip_all(big.polygon(), planes, 1e6 * diag);
    cell.bounded = !touches(unclipped, big);
    cell.poly = clip_all(clip.polygon(), planes, diag);
    d.cells.push_back(std::move(cell));
  }
  return d;
}

}  // namespace

PlanarDiagram first_type_diagram_2d(const Generator& gen, const std::vector<Vec>& sites,
                                    const Rect& clip) {
  if (gen.dim != 2) throw UnsupportedError("first_type_diagram_2d: 2D generators only");
  return halfplane_diagram(gen, sites, nullptr, clip, PlanarDiagram::Kind::first);
}

PlanarDiagram weighted_first_type_diagram_2d(const Generator& gen, const std::vector<Vec>& sites,
                                             const std::vector<double>& weights,
                                             const Rect& clip) {
  if (gen.dim != 2) throw UnsupportedError("weighted diagram: 2D generators only");
  for (double w : weights)
    if (!std::isfinite(w)) throw ConfigError("weights must be finite");
  return halfplane_diagram(gen, sites, &weights, clip, PlanarDiagram::Kind::weighted);
}

PlanarDiagram second_type_diagram_2d(const Generator& gen, const std::vector<Vec>& sites,
                                     const Rect& clip, int edge_samples) {
  if (gen.dim != 2) throw UnsupportedError("second_type_diagram_2d: 2D generators only");
  if (edge_samples < 1) throw ConfigError("edge_samples must be >= 1");
  validate_sites(gen, sites);
  Generator dual = dual_generator(gen);

  std::vector<Vec> dual_sites;
  dual_sites.reserve(sites.size());
  for (const Vec& p : sites) dual_sites.push_back(gen.grad(p));

  // Gradient image of the clip window: sample the boundary densely and take
  // the bounding box (exact for separable monotone gradients, safe otherwise).
  Polygon2 frame = clip.polygon();
  double gx0 = std::numeric_limits<double>::infinity(), gy0 = gx0;
  double gx1 = -gx0, gy1 = -gx0;
  for (int e = 0; e < 4; ++e) {
    const P2& a = frame[e];
    const P2& b = frame[(e + 1) % 4];
    for (int s = 0; s <= 32; ++s) {
      double t = s / 32.0;
      Vec x{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
      if (!gen.domain.contains(x))
        throw DomainError(gen.name + ": clip window leaves the domain");
      Vec g = gen.grad(x);
      gx0 = std::min(gx0, g[0]);
      gx1 = std::max(gx1, g[0]);
      gy0 = std::min(gy0, g[1]);
      gy1 = std::max(gy1, g[1]);
    }
  }
  Rect gclip{gx0, gy0, gx1, gy1};

  PlanarDiagram dual_diag =
      halfplane_diagram(dual, dual_sites, nullptr, gclip, PlanarDiagram::Kind::first);

  PlanarDiagram d;
  d.kind = PlanarDiagram::Kind::second;
  d.clip = clip;
  d.sites = sites;
  d.cells.reserve(dual_diag.cells.size());
  for (const Cell& dc : dual_diag.cells) {
    Cell cell;
    cell.sites = dc.sites;
    cell.bounded = dc.bounded;
    const size_t m = dc.poly.size();
    for (size_t v = 0; v < m; ++v) {
      const P2& a = dc.poly[v];
      const P2& b = dc.poly[(v + 1) % m];
      for (int s = 0; s < edge_samples; ++s) {
        double t = static_cast<double>(s) / edge_samples;
        Vec y{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
        Vec x = gen.inv_grad(y);
        cell.poly.push_back(p2(x));
      }
    }
    d.cells.push_back(std::move(cell));
  }
  return d;
}

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

PlanarDiagram k_order_diagram_2d(const Generator& gen, const std::vector<Vec>& sites, int k,
                                 const Rect& clip) {
  if (gen.dim != 2) throw UnsupportedError("k_order_diagram_2d: 2D generators only");
  validate_sites(gen, sites);
  const int n = static_cast<int>(sites.size());
  if (k < 1 || k > n) throw ConfigError("k must be in [1, n]");
  if (n > 14) throw TooManySubsets("k-order diagrams cap the site count at 14");
  if (!gen.inv_grad) throw UnsupportedError(gen.name + ": k-order needs the inverse gradient");

  std::vector<Vec> grads;
  grads.reserve(n);
  std::vector<double> fvals(n);
  for (int i = 0; i < n; ++i) {
    grads.push_back(gen.grad(sites[i]));
    fvals[i] = gen.f(sites[i]);
  }

  auto subsets = k_subsets(n, k);
  std::vector<Vec> centers;
  std::vector<double> weights;
  centers.reserve(subsets.size());
  weights.reserve(subsets.size());

  // Probe points for the numeric weight derivation: the average divergence to
  // a subset equals D_F(x || c_A) plus a constant; we measure that constant
  // at one point and verify it is constant at ten more.
  Rng rng(12345);
  std::vector<Vec> probes;
  {
    // Interior probe points: blend of clip center and random sites stays in
    // the (convex) domain even when the clip center is atypical.
    Vec cc{(clip.x0 + clip.x1) / 2.0, (clip.y0 + clip.y1) / 2.0};
    if (!gen.domain.contains(cc)) cc = sites[0];
    probes.push_back(cc);
    for (int t = 0; t < 10; ++t) {
      const Vec& s = sites[rng.below(n)];
      double a = rng.uniform(0.15, 0.85);
      probes.push_back(lerp(cc, s, a));
    }
  }

  auto avg_div = [&](const std::vector<int>& subset, const Vec& x) {
    double fx = gen.f(x);
    double s = 0.0;
    for (int j : subset) s += fx - fvals[j] - dot(grads[j], sub(x, sites[j]));
    return s / subset.size();
  };

  for (const auto& subset : subsets) {
    Vec gsum(2, 0.0);
    for (int j : subset) gsum = add(gsum, grads[j]);
    Vec c = gen.inv_grad(scaled(gsum, 1.0 / k));
    if (!all_finite(c) || !gen.domain.contains(c, 0.0))
      throw DomainError(gen.name + ": subset centroid left the domain");
    double w = avg_div(subset, probes[0]) - eval_divergence(gen, probes[0], c);
    for (size_t t = 1; t < probes.size(); ++t) {
      double w2 = avg_div(subset, probes[t]) - eval_divergence(gen, probes[t], c);
      double scale = 1.0 + std::fabs(w) + std::fabs(w2);
      if (std::fabs(w2 - w) > 1e-8 * scale)
        throw DegenerateInput(gen.name + ": k-order weight constant drifted; generator data inconsistent");
    }
    centers.push_back(c);
    weights.push_back(w);
  }

  // The subset centroids may coincide for symmetric site sets; the weighted
  // clipping machinery tolerates that as long as validate_sites is bypassed,
  // so run the clip manually against all competing (center, weight) pairs.
  double diag = std::hypot(clip.width(), clip.height());
  Rect big = big_window(clip);
  PlanarDiagram d;
  d.kind = PlanarDiagram::Kind::k_order;
  d.clip = clip;
  d.sites = sites;
  d.k = k;
  for (size_t a = 0; a < subsets.size(); ++a) {
    std::vector<Hyperplane> planes;
    bool dead = false;
    for (size_t b = 0; b < subsets.size() && !dead; ++b) {
      if (a == b) continue;
      if (dist2(centers[a], centers[b]) <= 1e-24) {
        // Coincident centroids (symmetric site sets): same objective shape,
        // only the constants differ. Keep the better weight; on an exact tie
        // the lexicographically first subset owns the region.
        double tol = 1e-12 * (1.0 + std::fabs(weights[a]) + std::fabs(weights[b]));
        if (weights[a] > weights[b] + tol || (std::fabs(weights[a] - weights[b]) <= tol && a > b))
          dead = true;
        continue;
      }
      Hyperplane h = bisector_first_type(gen, centers[a], centers[b]);
      h.offset += weights[a] - weights[b];
      planes.push_back(h);
    }
    Cell cell;
    cell.sites = subsets[a];
    if (!dead) {
      Polygon2 unclipped = clip_all(big.polygon(), planes, 1e6 * diag);
      cell.bounded = !touches(unclipped, big);
      cell.poly = clip_all(clip.polygon(), planes, diag);
    }
    d.cells.push_back(std::move(cell));
  }
  return d;
}

std::vector<std::pair<Vec, std::array<int, 3>>> diagram_vertices(const Generator& gen,
                                                                 const std::vector<Vec>& sites) {
  if (gen.dim != 2) throw UnsupportedError("diagram_vertices: 2D generators only");
  validate_sites(gen, sites);
  const int n = static_cast<int>(sites.size());
  std::vector<std::pair<Vec, std::array<int, 3>>> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Hyperplane hij = bisector_first_type(gen, sites[i], sites[j]);
      for (int k = j + 1; k < n; ++k) {
        Hyperplane hik = bisector_first_type(gen, sites[i], sites[k]);
        double det = hij.normal[0] * hik.normal[1] - hij.normal[1] * hik.normal[0];
        double scale = norm(hij.normal) * norm(hik.normal);
        if (std::fabs(det) <= scale / kConditionLimit) continue;  // parallel: no vertex
        double x = (-hij.offset * hik.normal[1] + hik.offset * hij.normal[1]) / det;
        double y = (-hik.offset * hij.normal[0] + hij.offset * hik.normal[0]) / det;
        Vec v{x, y};
        if (!gen.domain.contains(v)) continue;
        double di = eval_divergence(gen, v, sites[i]);
        double dj = eval_divergence(gen, v, sites[j]);
        double dk = eval_divergence(gen, v, sites[k]);
        double tol = 1e-8 * (1.0 + di + dj + dk);
        if (std::fabs(di - dj) > tol || std::fabs(di - dk) > tol) continue;
        bool dominated = false;
        for (int m = 0; m < n && !dominated; ++m) {
          if (m == i || m == j || m == k) continue;
          if (eval_divergence(gen, v, sites[m]) < di - tol) dominated = true;
        }
        if (!dominated) out.push_back({v, {i, j, k}});
      }
    }
  }
  return out;
}

std::vector<std::pair<int, int>> first_type_adjacency(const Generator& gen,
                                                      const std::vector<Vec>& sites,
                                                      const std::vector<double>* weights) {
  if (gen.dim != 2) throw UnsupportedError("first_type_adjacency: 2D generators only");
  validate_sites(gen, sites);
  const int n = static_cast<int>(sites.size());

  // Window large enough that every shared boundary piece shows up: the
  // arrangement of n affine bisectors has all its vertices well inside a
  // window ~1e6x the site spread.
  double x0 = sites[0][0], x1 = x0, y0 = sites[0][1], y1 = y0;
  for (const Vec& s : sites) {
    x0 = std::min(x0, s[0]);
    x1 = std::max(x1, s[0]);
    y0 = std::min(y0, s[1]);
    y1 = std::max(y1, s[1]);
  }
  double spread = std::max({x1 - x0, y1 - y0, 1.0});
  double cx = (x0 + x1) / 2.0, cy = (y0 + y1) / 2.0;
  double half = 1e6 * spread;
  Rect window{cx - half, cy - half, cx + half, cy + half};
  double diag = std::hypot(window.width(), window.height());

  std::vector<std::pair<int, int>> adj;
  for (int i = 0; i < n; ++i) {
    std::vector<Hyperplane> planes;
    std::vector<int> owner;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Hyperplane h = bisector_first_type(gen, sites[i], sites[j]);
      if (weights) h.offset += (*weights)[i] - (*weights)[j];
      planes.push_back(h);
      owner.push_back(j);
    }
    Polygon2 poly = clip_all(window.polygon(), planes, diag);
    if (poly.empty()) continue;
    const size_t m = poly.size();
    double edge_margin = 1e-5 * half;
    for (size_t e = 0; e < m; ++e) {
      const P2& a = poly[e];
      const P2& b = poly[(e + 1) % m];
      double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      if (len <= 1e-9 * spread) continue;
      // Skip edges lying on the artificial window frame.
      auto on_frame = [&](double v, double lo, double hi) {
        return std::fabs(v - lo) < edge_margin || std::fabs(v - hi) < edge_margin;
      };
      if ((on_frame(a[0], window.x0, window.x1) && on_frame(b[0], window.x0, window.x1) &&
           std::fabs(a[0] - b[0]) < edge_margin) ||
          (on_frame(a[1], window.y0, window.y1) && on_frame(b[1], window.y0, window.y1) &&
           std::fabs(a[1] - b[1]) < edge_margin))
        continue;
      // The owning bisector is the one the edge midpoint sits on; every other
      // constraint is strictly negative there, so the argmax of the signed
      // distances identifies it without an absolute tolerance.
      P2 mid{(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0};
      int best_j = -1;
      double best_v = -std::numeric_limits<double>::infinity();
      for (size_t pi = 0; pi < planes.size(); ++pi) {
        double v = planes[pi].eval2(mid) / norm(planes[pi].normal);
        if (v > best_v) {
          best_v = v;
          best_j = owner[pi];
        }
      }
      if (best_j >= 0) adj.push_back({std::min(i, best_j), std::max(i, best_j)});
    }
  }
  std::sort(adj.begin(), adj.end());
  adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  return adj;
}

// --- raster -----------------------------------------------------------------

namespace {

void check_raster_args(const Rect& clip, int resolution) {
  if (!clip.valid()) throw ConfigError("clip rectangle is empty");
  if (resolution < 1 || resolution > 4096)
    throw ConfigError("raster resolution must lie in [1, 4096]");
}

}  // namespace

RasterLabels raster_diagram(const Generator& gen, const std::vector<Vec>& sites, RasterMode mode,
                            const Rect& clip, int resolution,
                            const std::vector<double>* weights) {
  if (gen.dim != 2) throw UnsupportedError("raster_diagram: 2D generators only");
  validate_sites(gen, sites);
  check_raster_args(clip, resolution);
  if (weights && weights->size() != sites.size())
    throw DimensionMismatch("weights/site count mismatch");
  if (weights && mode != RasterMode::first)
    throw UnsupportedError("weights only apply to first-type rasters");

  const int n = static_cast<int>(sites.size());
  const int w = resolution, h = resolution;
  RasterLabels out;
  out.width = w;
  out.height = h;
  out.clip = clip;
  out.labels.assign(static_cast<size_t>(w) * h, -1);

  // Per-site data reused across pixels.
  std::vector<Vec> grads(n);
  std::vector<double> fvals(n), dots(n);
  for (int i = 0; i < n; ++i) {
    grads[i] = gen.grad(sites[i]);
    fvals[i] = gen.f(sites[i]);
    dots[i] = dot(grads[i], sites[i]);
  }

  parallel_for(h, [&](int r0, int r1) {
    for (int row = r0; row < r1; ++row) {
      for (int col = 0; col < w; ++col) {
        P2 pc = out.pixel_center(row, col);
        Vec x = vec2(pc);
        if (!gen.domain.contains(x)) continue;
        double best = std::numeric_limits<double>::infinity();
        int best_i = -1;
        switch (mode) {
          case RasterMode::first: {
            // argmin_i F(x)-F(p_i)-<p_i', x-p_i> (+w_i): F(x) is common.
            for (int i = 0; i < n; ++i) {
              double s = -fvals[i] - (grads[i][0] * x[0] + grads[i][1] * x[1]) + dots[i];
              if (weights) s += (*weights)[i];
              if (s < best) {
                best = s;
                best_i = i;
              }
            }
            break;
          }
          case RasterMode::second: {
            Vec gx = gen.grad(x);
            for (int i = 0; i < n; ++i) {
              double s = fvals[i] - (gx[0] * sites[i][0] + gx[1] * sites[i][1]);
              if (s < best) {
                best = s;
                best_i = i;
              }
            }
            break;
          }
          case RasterMode::symmetrized: {
            Vec gx = gen.grad(x);
            for (int i = 0; i < n; ++i) {
              double s = dots[i] - (grads[i][0] * x[0] + grads[i][1] * x[1]) -
                         (gx[0] * sites[i][0] + gx[1] * sites[i][1]);
              if (s < best) {
                best = s;
                best_i = i;
              }
            }
            break;
          }
        }
        out.labels[static_cast<size_t>(row) * w + col] = best_i;
      }
    }
  });
  return out;
}

RasterLabels raster_kbag(const std::vector<Generator>& basis, const std::vector<Vec>& alphas,
                         const std::vector<Vec>& sites, const Rect& clip, int resolution) {
  if (basis.empty()) throw ConfigError("k-bag needs at least one basis generator");
  const int kb = static_cast<int>(basis.size());
  const int n = static_cast<int>(sites.size());
  for (const Generator& g : basis) {
    if (g.dim != 2) throw UnsupportedError("raster_kbag: 2D generators only");
    validate_sites(g, sites);
  }
  if (static_cast<int>(alphas.size()) != n)
    throw DimensionMismatch("k-bag needs one mixture row per site");
  for (const Vec& a : alphas) {
    if (static_cast<int>(a.size()) != kb)
      throw DimensionMismatch("mixture rows must match the basis size");
    double s = 0.0;
    for (double v : a) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("mixture weights must be >= 0");
      s += v;
    }
    if (!(s > 0.0)) throw ConfigError("mixture rows must have positive mass");
  }
  check_raster_args(clip, resolution);

  DomainSpec dom = basis[0].domain;
  for (int l = 1; l < kb; ++l) dom = DomainSpec::intersect(dom, basis[l].domain);

  // score_i(x) = sum_l alpha_il F_l(x) - <g_i, x> - c_i.
  std::vector<Vec> gsite(n, Vec(2, 0.0));
  std::vector<double> csite(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < kb; ++l) {
      double a = alphas[i][l];
      if (a == 0.0) continue;
      Vec gl = basis[l].grad(sites[i]);
      gsite[i][0] += a * gl[0];
      gsite[i][1] += a * gl[1];
      csite[i] += a * (basis[l].f(sites[i]) - dot(gl, sites[i]));
    }
  }

  const int w = resolution, h = resolution;
  RasterLabels out;
  out.width = w;
  out.height = h;
  out.clip = clip;
  out.labels.assign(static_cast<size_t>(w) * h, -1);

  parallel_for(h, [&](int r0, int r1) {
    std::vector<double> fl(kb);
    for (int row = r0; row < r1; ++row) {
      for (int col = 0; col < w; ++col) {
        P2 pc = out.pixel_center(row, col);
        Vec x = vec2(pc);
        if (!dom.contains(x)) continue;
        for (int l = 0; l < kb; ++l) fl[l] = basis[l].f(x);
        double best = std::numeric_limits<double>::infinity();
        int best_i = -1;
        for (int i = 0; i < n; ++i) {
          double s = -csite[i] - (gsite[i][0] * x[0] + gsite[i][1] * x[1]);
          for (int l = 0; l < kb; ++l) s += alphas[i][l] * fl[l];
          if (s < best) {
            best = s;
            best_i = i;
          }
        }
        out.labels[static_cast<size_t>(row) * w + col] = best_i;
      }
    }
  });
  return out;
}

RasterLabels raster_korder(const Generator& gen, const std::vector<Vec>& sites, int k,
                           const Rect& clip, int resolution) {
  if (gen.dim != 2) throw UnsupportedError("raster_korder: 2D generators only");
  validate_sites(gen, sites);
  check_raster_args(clip, resolution);
  const int n = static_cast<int>(sites.size());
  if (k < 1 || k > n) throw ConfigError("k must be in [1, n]");
  if (n > 14) throw TooManySubsets("k-order rasters cap the site count at 14");

  // Map sorted subsets to their lexicographic rank.
  auto subsets = k_subsets(n, k);
  std::map<std::vector<int>, int> rank;
  for (size_t i = 0; i < subsets.size(); ++i) rank[subsets[i]] = static_cast<int>(i);

  std::vector<Vec> grads(n);
  std::vector<double> fvals(n), dots(n);
  for (int i = 0; i < n; ++i) {
    grads[i] = gen.grad(sites[i]);
    fvals[i] = gen.f(sites[i]);
    dots[i] = dot(grads[i], sites[i]);
  }

  const int w = resolution, h = resolution;
  RasterLabels out;
  out.width = w;
  out.height = h;
  out.clip = clip;
  out.labels.assign(static_cast<size_t>(w) * h, -1);

  parallel_for(h, [&](int r0, int r1) {
    std::vector<std::pair<double, int>> scored(n);
    std::vector<int> subset(k);
    for (int row = r0; row < r1; ++row) {
      for (int col = 0; col < w; ++col) {
        P2 pc = out.pixel_center(row, col);
        Vec x = vec2(pc);
        if (!gen.domain.contains(x)) continue;
        for (int i = 0; i < n; ++i) {
          double s = -fvals[i] - (grads[i][0] * x[0] + grads[i][1] * x[1]) + dots[i];
          scored[i] = {s, i};
        }
        std::partial_sort(scored.begin(), scored.begin() + k, scored.end());
        for (int i = 0; i < k; ++i) subset[i] = scored[i].second;
        std::sort(subset.begin(), subset.end());
        out.labels[static_cast<size_t>(row) * w + col] = rank.at(subset);
      }
    }
  });
  return out;
}

RasterLabels rasterize_cells(const PlanarDiagram& diagram, int resolution) {
  check_raster_args(diagram.clip, resolution);
  const int w = resolution, h = resolution;
  RasterLabels out;
  out.width = w;
  out.height = h;
  out.clip = diagram.clip;
  out.labels.assign(static_cast<size_t>(w) * h, -1);
  std::vector<uint8_t> claims(out.labels.size(), 0);

  const Rect& clip = diagram.clip;
  double dx = clip.width() / w, dy = clip.height() / h;

  for (size_t ci = 0; ci < diagram.cells.size(); ++ci) {
    const Polygon2& poly = diagram.cells[ci].poly;
    if (poly.size() < 3) continue;
    double bx0 = poly[0][0], bx1 = bx0, by0 = poly[0][1], by1 = by0;
    for (const P2& p : poly) {
      bx0 = std::min(bx0, p[0]);
      bx1 = std::max(bx1, p[0]);
      by0 = std::min(by0, p[1]);
      by1 = std::max(by1, p[1]);
    }
    int c0 = std::max(0, static_cast<int>(std::floor((bx0 - clip.x0) / dx - 0.5)));
    int c1 = std::min(w - 1, static_cast<int>(std::ceil((bx1 - clip.x0) / dx + 0.5)));
    int r1 = std::min(h - 1, static_cast<int>(std::ceil((clip.y1 - by0) / dy + 0.5)));
    int r0 = std::max(0, static_cast<int>(std::floor((clip.y1 - by1) / dy - 0.5)));
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        P2 pc = out.pixel_center(row, col);
        // Crossing-number test; handles the sampled (non-convex) cells too.
        bool inside = false;
        const size_t m = poly.size();
        for (size_t e = 0, f = m - 1; e < m; f = e++) {
          const P2& a = poly[e];
          const P2& b = poly[f];
          if ((a[1] > pc[1]) != (b[1] > pc[1])) {
            double t = (pc[1] - a[1]) / (b[1] - a[1]);
            if (pc[0] < a[0] + t * (b[0] - a[0])) inside = !inside;
          }
        }
        if (inside) {
          size_t idx = static_cast<size_t>(row) * w + col;
          ++claims[idx];
          out.labels[idx] = static_cast<int>(ci);
        }
      }
    }
  }
  for (size_t i = 0; i < out.labels.size(); ++i)
    if (claims[i] != 1) out.labels[i] = -1;
  return out;
}

double label_agreement(const RasterLabels& oracle, const RasterLabels& candidate,
                       long* considered) {
  if (oracle.width != candidate.width || oracle.height != candidate.height)
    throw DimensionMismatch("label_agreement: raster sizes differ");
  const int w = oracle.width, h = oracle.height;
  long total = 0, match = 0;
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      int lab = oracle.at(row, col);
      if (lab < 0) continue;
      // 1-pixel boundary band: all neighbors must agree with the center.
      bool interior = true;
      for (int dr = -1; dr <= 1 && interior; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          int r = row + dr, c = col + dc;
          if (r < 0 || r >= h || c < 0 || c >= w) continue;
          if (oracle.at(r, c) != lab) {
            interior = false;
            break;
          }
        }
      }
      if (!interior) continue;
      ++total;
      if (candidate.at(row, col) == lab) ++match;
    }
  }
  if (considered) *considered = total;
  return total == 0 ? 1.0 : static_cast<double>(match) / static_cast<double>(total);
}

}  // namespace bvd
