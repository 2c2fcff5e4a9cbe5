#include "bvd/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace bvd {

void require_dim(const Vec& v, int dim, const char* what) {
  if (static_cast<int>(v.size()) != dim)
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(dim) +
                            ", got " + std::to_string(v.size()));
}

Vec mat_vec(const Mat& m, const Vec& x) {
  Vec r(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

std::optional<Vec> solve_linear(Mat m, Vec rhs, double* cond_estimate) {
  const int n = m.rows;
  double max_piv = 0.0, min_piv = std::numeric_limits<double>::infinity();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(m.at(r, col)) > std::fabs(m.at(piv, col))) piv = r;
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(m.at(piv, c), m.at(col, c));
      std::swap(rhs[piv], rhs[col]);
    }
    double p = m.at(col, col);
    double mag = std::fabs(p);
    max_piv = std::max(max_piv, mag);
    min_piv = std::min(min_piv, mag);
    if (mag == 0.0 || max_piv / mag > kConditionLimit) {
      if (cond_estimate) *cond_estimate = std::numeric_limits<double>::infinity();
      return std::nullopt;
    }
    for (int r = col + 1; r < n; ++r) {
      double f = m.at(r, col) / p;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
      rhs[r] -= f * rhs[col];
    }
  }
  if (cond_estimate) *cond_estimate = max_piv / min_piv;
  Vec x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < n; ++c) s -= m.at(r, c) * x[c];
    x[r] = s / m.at(r, r);
  }
  return x;
}

std::optional<Mat> invert(const Mat& m) {
  const int n = m.rows;
  Mat inv(n, n);
  for (int col = 0; col < n; ++col) {
    Vec e(n, 0.0);
    e[col] = 1.0;
    auto x = solve_linear(m, e);
    if (!x) return std::nullopt;
    for (int r = 0; r < n; ++r) inv.at(r, col) = (*x)[r];
  }
  return inv;
}

double determinant(Mat m) {
  const int n = m.rows;
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(m.at(r, col)) > std::fabs(m.at(piv, col))) piv = r;
    if (piv != col) {
      for (int c = col; c < n; ++c) std::swap(m.at(piv, c), m.at(col, c));
      det = -det;
    }
    double p = m.at(col, col);
    if (p == 0.0) return 0.0;
    det *= p;
    for (int r = col + 1; r < n; ++r) {
      double f = m.at(r, col) / p;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
    }
  }
  return det;
}

std::array<double, 2> sym2_eigenvalues(double a, double b, double c) {
  double tr = a + c;
  double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) / 4.0 + b * b));
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

DomainSpec DomainSpec::all_space(int dim) {
  DomainSpec d;
  d.dim = dim;
  d.box.assign(dim, Interval{});
  return d;
}

DomainSpec DomainSpec::positive_orthant(int dim) {
  DomainSpec d = all_space(dim);
  for (auto& iv : d.box) iv.lo = 0.0;
  return d;
}

DomainSpec DomainSpec::open_box(int dim, double lo, double hi) {
  DomainSpec d = all_space(dim);
  for (auto& iv : d.box) {
    iv.lo = lo;
    iv.hi = hi;
  }
  return d;
}

DomainSpec DomainSpec::open_simplex(int dim) {
  DomainSpec d;
  d.kind = Kind::simplex;
  d.dim = dim;
  d.box.assign(dim, Interval{0.0, 1.0});
  return d;
}

bool DomainSpec::contains(const Vec& x, double margin) const {
  if (static_cast<int>(x.size()) != dim) return false;
  if (!all_finite(x)) return false;
  for (int i = 0; i < dim; ++i)
    if (!box[i].contains(x[i], margin)) return false;
  if (kind == Kind::simplex) {
    double s = 0.0;
    for (double v : x) s += v;
    if (!(s < 1.0 - margin)) return false;
  }
  return true;
}

DomainSpec DomainSpec::intersect(const DomainSpec& a, const DomainSpec& b) {
  if (a.dim != b.dim)
    throw DimensionMismatch("domain intersection: dimensions differ");
  if (a.kind != Kind::box || b.kind != Kind::box)
    throw UnsupportedError("domain intersection: only box domains compose");
  DomainSpec r = all_space(a.dim);
  for (int i = 0; i < a.dim; ++i) {
    r.box[i].lo = std::max(a.box[i].lo, b.box[i].lo);
    r.box[i].hi = std::min(a.box[i].hi, b.box[i].hi);
    if (r.box[i].empty()) throw EmptyDomain("domain intersection is empty");
  }
  return r;
}

Polygon2 clip_halfplane(const Polygon2& poly, const Hyperplane& h, double eps) {
  Polygon2 out;
  const size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (size_t i = 0; i < n; ++i) {
    const P2& cur = poly[i];
    const P2& nxt = poly[(i + 1) % n];
    double dc = h.eval2(cur);
    double dn = h.eval2(nxt);
    bool cin = dc <= eps;
    bool nin = dn <= eps;
    if (cin) out.push_back(cur);
    if (cin != nin) {
      double t = dc / (dc - dn);  // dc, dn straddle zero
      out.push_back(P2{cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
    }
  }
  // Collapse consecutive duplicates the straddle logic can emit.
  Polygon2 dedup;
  dedup.reserve(out.size());
  for (const P2& p : out) {
    if (!dedup.empty()) {
      const P2& q = dedup.back();
      if (std::fabs(p[0] - q[0]) < 1e-14 && std::fabs(p[1] - q[1]) < 1e-14) continue;
    }
    dedup.push_back(p);
  }
  while (dedup.size() > 1) {
    const P2& f = dedup.front();
    const P2& l = dedup.back();
    if (std::fabs(f[0] - l[0]) < 1e-14 && std::fabs(f[1] - l[1]) < 1e-14)
      dedup.pop_back();
    else
      break;
  }
  if (dedup.size() < 3) dedup.clear();
  return dedup;
}

double polygon_area(const Polygon2& poly) {
  double s = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return s / 2.0;
}

P2 polygon_centroid(const Polygon2& poly) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const P2& p = poly[i];
    const P2& q = poly[(i + 1) % n];
    double w = p[0] * q[1] - q[0] * p[1];
    a += w;
    cx += (p[0] + q[0]) * w;
    cy += (p[1] + q[1]) * w;
  }
  if (std::fabs(a) < 1e-300) throw EmptyRegion("polygon centroid: zero area");
  return P2{cx / (3.0 * a), cy / (3.0 * a)};
}

bool polygon_contains(const Polygon2& poly, const P2& p) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    if (orient2d(poly[i], poly[(i + 1) % n], p) < 0.0) return false;
  }
  return true;
}

double orient2d(const P2& a, const P2& b, const P2& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

uint64_t Rng::next_u64() {
  // splitmix64; tiny, portable, and plenty for test/sampling use.
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

namespace {

double simpson_rule(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = (a + m) / 2.0, rm = (m + b) / 2.0;
  double flm = f(lm), frm = f(rm);
  double left = simpson_rule(a, fa, m, fm, flm);
  double right = simpson_rule(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  double m = (a + b) / 2.0;
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson_rule(a, fa, b, fb, fm);
  double r = simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
  if (!std::isfinite(r)) throw NonFiniteError("adaptive_simpson: integrand not finite");
  return r;
}

void parallel_for(int n, const std::function<void(int, int)>& fn) {
  if (n <= 0) return;
  int threads = 0;
  if (const char* env = std::getenv("BVD_THREADS")) threads = std::atoi(env);
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 1 || n < 2 * threads) {
    fn(0, n);
    return;
  }
  threads = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int begin = t * chunk;
    int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bvd
