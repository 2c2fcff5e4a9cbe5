#include "bvd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bvd/diagram.hpp"

namespace bvd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PixelGrid {
  Rect clip;
  int res = 0;
  double px = 0, py = 0;  // pixel extents

  P2 center(int row, int col) const {
    return P2{clip.x0 + (col + 0.5) * px, clip.y1 - (row + 0.5) * py};
  }
  double area() const { return px * py; }
};

PixelGrid make_grid(const Rect& clip, int resolution) {
  if (!clip.valid()) throw ConfigError("clip rectangle is empty");
  if (resolution < 2 || resolution > 4096)
    throw ConfigError("raster resolution must be in [2, 4096]");
  return PixelGrid{clip, resolution, clip.width() / resolution, clip.height() / resolution};
}

double density_at(const DensityFn& density, const P2& p) {
  if (!density) return 1.0;
  double w = density(p);
  if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("density must be finite and >= 0");
  return w;
}

void validate_lloyd_sites(const Generator& gen, const std::vector<Vec>& sites) {
  if (sites.empty()) throw ConfigError("need at least one site");
  if (gen.dim != 2) throw DimensionMismatch("planar routine requires a 2D generator");
  for (const auto& s : sites) {
    require_dim(s, 2, "site");
    if (!gen.domain.contains(s)) throw DomainError("site outside the generator domain");
  }
}

// Per-site affine comparators: D(x || p_i) = F(x) + <a_i, x> + b_i.
struct AffineScores {
  std::vector<Vec> a;
  std::vector<double> b;

  AffineScores(const Generator& gen, const std::vector<Vec>& sites) {
    for (const auto& p : sites) {
      Vec g = gen.grad(p);
      b.push_back(-gen.f(p) + dot(g, p));
      a.push_back(scaled(g, -1.0));
    }
  }
  double score(int i, const P2& x) const {
    return a[i][0] * x[0] + a[i][1] * x[1] + b[i];
  }
};

}  // namespace

Vec region_centroid(const Generator& gen, const Rect& clip, const DensityFn& density,
                    int resolution) {
  if (gen.dim != 2) throw DimensionMismatch("region_centroid requires a 2D generator");
  PixelGrid grid = make_grid(clip, resolution);
  double mass = 0, mx = 0, my = 0;
  for (int r = 0; r < grid.res; ++r)
    for (int c = 0; c < grid.res; ++c) {
      P2 x = grid.center(r, c);
      if (!gen.domain.contains(vec2(x))) continue;
      double w = density_at(density, x);
      if (w <= 0.0) continue;
      mass += w;
      mx += w * x[0];
      my += w * x[1];
    }
  if (mass <= 0.0) throw EmptyRegion("region has no mass on the sampling grid");
  return Vec{mx / mass, my / mass};
}

LloydResult lloyd_quantization(const Generator& gen, std::vector<Vec> sites, const Rect& clip,
                               const DensityFn& density, int max_iters, int resolution) {
  validate_lloyd_sites(gen, sites);
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  PixelGrid grid = make_grid(clip, resolution);
  const int n = static_cast<int>(sites.size());
  const int total = grid.res * grid.res;

  LloydResult out;
  std::vector<double> pix_div(total);  // winner divergence per pixel, -1 masked

  for (int iter = 0; iter < max_iters; ++iter) {
    AffineScores sc(gen, sites);
    std::vector<double> mass(n, 0.0), mx(n, 0.0), my(n, 0.0);
    double obj = 0.0;
    bool any_pixel = false;
    for (int r = 0; r < grid.res; ++r)
      for (int c = 0; c < grid.res; ++c) {
        int idx = r * grid.res + c;
        pix_div[idx] = -1.0;
        P2 x = grid.center(r, c);
        Vec xv = vec2(x);
        if (!gen.domain.contains(xv)) continue;
        double w = density_at(density, x);
        if (w <= 0.0) continue;
        any_pixel = true;
        int best = 0;
        double bs = sc.score(0, x);
        for (int i = 1; i < n; ++i) {
          double s = sc.score(i, x);
          if (s < bs) bs = s, best = i;
        }
        double d = gen.f(xv) + bs;
        if (d < 0.0 && d > -kDivergenceClamp) d = 0.0;
        pix_div[idx] = d;
        obj += w * d * grid.area();
        mass[best] += w;
        mx[best] += w * x[0];
        my[best] += w * x[1];
      }
    if (!any_pixel) throw EmptyRegion("no raster pixel falls in clip ∩ domain");
    out.objective.push_back(obj);
    out.iterations = iter + 1;

    std::vector<int> empty;
    for (int i = 0; i < n; ++i)
      if (mass[i] <= 0.0) empty.push_back(i);

    if (empty.empty()) {
      bool moved = false;
      for (int i = 0; i < n; ++i) {
        Vec ns{mx[i] / mass[i], my[i] / mass[i]};
        if (dist2(ns, sites[i]) > 0.0) moved = true;
        sites[i] = ns;
      }
      size_t t = out.objective.size();
      if (t >= 2) {
        double prev = out.objective[t - 2], cur = out.objective[t - 1];
        if (std::fabs(prev - cur) <= 1e-9 * std::max(1.0, std::fabs(prev))) {
          out.converged = true;
          break;
        }
      }
      if (!moved) {
        out.converged = true;
        break;
      }
    } else {
      // Reseed empty cells at the worst-covered pixels (distinct argmaxes).
      std::vector<int> order(total);
      std::iota(order.begin(), order.end(), 0);
      std::partial_sort(order.begin(), order.begin() + std::min<size_t>(empty.size(), total),
                        order.end(),
                        [&](int a, int b) { return pix_div[a] > pix_div[b]; });
      size_t used = 0;
      for (int i : empty) {
        if (used >= order.size() || pix_div[order[used]] < 0) break;
        P2 x = grid.center(order[used] / grid.res, order[used] % grid.res);
        sites[i] = vec2(x);
        out.reseeded.push_back(i);
        ++used;
      }
      // Non-empty cells still move to their centroids.
      for (int i = 0; i < n; ++i)
        if (mass[i] > 0.0) sites[i] = Vec{mx[i] / mass[i], my[i] / mass[i]};
    }
  }
  out.sites = std::move(sites);
  return out;
}

KMeansResult bregman_kmeans(const Generator& gen, const std::vector<Vec>& data, int k,
                            uint64_t seed, int max_iters) {
  if (data.empty()) throw ConfigError("k-means needs data points");
  const int n = static_cast<int>(data.size());
  if (k < 1 || k > n) throw ConfigError("k must satisfy 1 <= k <= #points");
  for (const auto& x : data) {
    require_dim(x, gen.dim, "data point");
    if (!gen.domain.contains(x)) throw DomainError("data point outside the generator domain");
  }

  // k-means++ style seeding weighted by the current minimum divergence.
  Rng rng(seed ? seed : 0x9e3779b9u);
  std::vector<Vec> centers;
  std::vector<char> chosen(n, 0);
  int first = rng.below(n);
  centers.push_back(data[first]);
  chosen[first] = 1;
  std::vector<double> mind(n);
  while (static_cast<int>(centers.size()) < k) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = kInf;
      for (const auto& c : centers) d = std::min(d, eval_divergence(gen, data[i], c));
      mind[i] = chosen[i] ? 0.0 : d;
      sum += mind[i];
    }
    int pick = -1;
    if (sum > 0.0) {
      double u = rng.uniform01() * sum, acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += mind[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    if (pick < 0)  // duplicates everywhere: take the first unused point
      for (int i = 0; i < n && pick < 0; ++i)
        if (!chosen[i]) pick = i;
    if (pick < 0) pick = rng.below(n);
    chosen[pick] = 1;
    centers.push_back(data[pick]);
  }

  KMeansResult out;
  out.assignment.assign(n, -1);
  std::vector<int> prev_assign;
  for (int iter = 0; iter < max_iters; ++iter) {
    prev_assign = out.assignment;
    double obj = 0.0;
    std::vector<double> divs(n);
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = eval_divergence(gen, data[i], centers[0]);
      for (int c = 1; c < k; ++c) {
        double d = eval_divergence(gen, data[i], centers[c]);
        if (d < bd) bd = d, best = c;
      }
      out.assignment[i] = best;
      divs[i] = bd;
      obj += bd;
    }
    out.objective.push_back(obj);
    out.iterations = iter + 1;

    std::vector<int> count(k, 0);
    for (int a : out.assignment) ++count[a];
    std::vector<int> empty;
    for (int c = 0; c < k; ++c)
      if (count[c] == 0) empty.push_back(c);

    if (!empty.empty()) {
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return divs[a] > divs[b]; });
      size_t used = 0;
      for (int c : empty) {
        while (used < order.size() && count[out.assignment[order[used]]] <= 1) ++used;
        if (used >= order.size()) break;
        centers[c] = data[order[used]];
        --count[out.assignment[order[used]]];
        out.reseeded.push_back(c);
        ++used;
      }
      continue;  // reassign before any mean update
    }

    if (out.assignment == prev_assign) {
      out.converged = true;
      break;
    }
    for (int c = 0; c < k; ++c) {
      Vec mean(gen.dim, 0.0);
      for (int i = 0; i < n; ++i)
        if (out.assignment[i] == c) mean = add(mean, data[i]);
      centers[c] = scaled(mean, 1.0 / count[c]);
    }
  }
  out.centers = std::move(centers);
  return out;
}

CoverageReport coverage_error(const Generator& gen, const std::vector<Vec>& sites,
                              const Rect& clip) {
  validate_sites(gen, sites);
  if (!clip.valid()) throw ConfigError("clip rectangle is empty");
  for (const P2& c : clip.polygon())
    if (!gen.domain.contains(vec2(c)))
      throw DomainError("coverage_error: clip rectangle leaves the domain");

  PlanarDiagram dia = first_type_diagram_2d(gen, sites, clip);
  CoverageReport rep;
  for (const auto& cell : dia.cells) {
    if (cell.poly.empty()) continue;
    const Vec& p = sites[cell.sites[0]];
    for (const P2& v : cell.poly) {
      double d = eval_divergence(gen, vec2(v), p);
      if (d > rep.error) {
        rep.error = d;
        rep.worst_point = vec2(v);
        rep.worst_site = cell.sites[0];
      }
    }
  }
  if (rep.worst_point.empty()) rep.worst_point = sites[0];
  return rep;
}

double sample_error(const Generator& gen, const std::vector<Vec>& sites, const Rect& clip) {
  return coverage_error(gen, sites, clip).error;
}

EpsNetResult eps_net(const Generator& gen, const Rect& clip, double eps,
                     const std::vector<Vec>& seeds, size_t max_points) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
  EpsNetResult out;
  out.points = seeds;
  for (const auto& s : out.points) {
    require_dim(s, 2, "seed");
    if (!gen.domain.contains(s)) throw DomainError("seed outside the generator domain");
    if (!clip.contains(p2(s))) throw ConfigError("seed outside the clip rectangle");
  }
  if (out.points.empty()) {
    Vec c{(clip.x0 + clip.x1) / 2.0, (clip.y0 + clip.y1) / 2.0};
    if (!gen.domain.contains(c))
      throw DomainError("clip center outside the domain; provide seeds");
    out.points.push_back(c);
  }

  size_t inserted_from = out.points.size();
  for (;;) {
    CoverageReport rep = coverage_error(gen, out.points, clip);
    out.errors.push_back(rep.error);
    if (rep.error <= eps) {
      out.coverage_certified = true;
      break;
    }
    if (out.points.size() >= max_points)
      throw NonTermination("eps_net exceeded the insertion budget");
    out.points.push_back(rep.worst_point);
  }

  out.sparsity = kInf;
  for (size_t j = std::max<size_t>(inserted_from, 1); j < out.points.size(); ++j)
    for (size_t i = 0; i < j; ++i)
      out.sparsity =
          std::min(out.sparsity, eval_divergence(gen, out.points[j], out.points[i]));
  return out;
}

}  // namespace bvd
