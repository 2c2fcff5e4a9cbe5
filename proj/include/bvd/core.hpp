#pragma once

// Shared numeric/geometric plumbing: vectors, small dense matrices, open box
// domains, convex polygon clipping, and the error taxonomy used across the
// library. Everything here is dimension-agnostic; the 2D-only code lives in
// the diagram/triangulation modules.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvd {

using Vec = std::vector<double>;
using P2 = std::array<double, 2>;
using Polygon2 = std::vector<P2>;

inline constexpr double kDomainMargin = 1e-12;    // open-set membership margin
inline constexpr double kDivergenceClamp = 1e-10; // negatives above -this snap to 0
inline constexpr double kPredicateTol = 1e-9;     // normalized predicate dead band
inline constexpr double kInverseTol = 1e-12;      // grad inversion target
inline constexpr double kConditionLimit = 1e12;   // linear solves beyond this are degenerate

// ---------------------------------------------------------------------------
// Errors. kind() drives the CLI exit code: config/validation problems exit 2,
// numerical failures exit 3.

enum class ErrorKind { validation, numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define BVD_DEFINE_ERROR(Name, Kind)                                        \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  }

BVD_DEFINE_ERROR(DomainError, validation);
BVD_DEFINE_ERROR(DimensionMismatch, validation);
BVD_DEFINE_ERROR(EmptyDomain, validation);
BVD_DEFINE_ERROR(UnsupportedError, validation);
BVD_DEFINE_ERROR(ParseError, validation);
BVD_DEFINE_ERROR(ConfigError, validation);
BVD_DEFINE_ERROR(TooManySubsets, validation);
BVD_DEFINE_ERROR(EmptyRegion, validation);
BVD_DEFINE_ERROR(EmptyFeasibleSet, validation);
BVD_DEFINE_ERROR(NonFiniteError, numeric);
BVD_DEFINE_ERROR(DegenerateInput, numeric);
BVD_DEFINE_ERROR(DegenerateSimplex, numeric);
BVD_DEFINE_ERROR(DegenerateSites, numeric);
BVD_DEFINE_ERROR(NonTermination, numeric);

#undef BVD_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Vector helpers (free functions on Vec; no expression templates, call sites
// stay explicit).

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double s) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline Vec lerp(const Vec& a, const Vec& b, double t) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = (1.0 - t) * a[i] + t * b[i];
  return r;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline double dist2(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline Vec vec2(const P2& p) { return Vec{p[0], p[1]}; }
inline P2 p2(const Vec& v) { return P2{v[0], v[1]}; }

void require_dim(const Vec& v, int dim, const char* what);

// ---------------------------------------------------------------------------
// Small dense matrices, row-major. Sized for d <= ~8; no BLAS needed at desk
// scale.

struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

Vec mat_vec(const Mat& m, const Vec& x);

// Gaussian elimination with partial pivoting. Returns nullopt when the pivot
// ratio exceeds kConditionLimit (treat as singular). `cond_estimate`, when
// non-null, receives max|pivot|/min|pivot| as a cheap conditioning proxy.
std::optional<Vec> solve_linear(Mat m, Vec rhs, double* cond_estimate = nullptr);
std::optional<Mat> invert(const Mat& m);
double determinant(Mat m);

// Eigenvalues of a symmetric 2x2 [[a,b],[b,c]], ascending.
std::array<double, 2> sym2_eigenvalues(double a, double b, double c);

// ---------------------------------------------------------------------------
// Open interval / open box domains. Bounds may be +-inf; membership uses a
// strict margin so downstream log/1-x evaluations stay finite.

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x, double margin = kDomainMargin) const {
    if (!std::isfinite(x)) return false;
    if (std::isfinite(lo) && !(x > lo + margin)) return false;
    if (std::isfinite(hi) && !(x < hi - margin)) return false;
    return true;
  }
  bool empty(double margin = kDomainMargin) const { return !(lo + 2 * margin < hi); }
};

struct DomainSpec {
  enum class Kind { box, simplex };

  Kind kind = Kind::box;
  int dim = 1;
  std::vector<Interval> box;  // per-coordinate open bounds (box kind)

  static DomainSpec all_space(int dim);
  static DomainSpec positive_orthant(int dim);
  static DomainSpec open_box(int dim, double lo, double hi);
  static DomainSpec open_simplex(int dim);  // x_i > 0, sum x_i < 1

  bool contains(const Vec& x, double margin = kDomainMargin) const;
  // Intersection of two box domains; throws EmptyDomain if some coordinate
  // interval collapses, UnsupportedError when a simplex is involved.
  static DomainSpec intersect(const DomainSpec& a, const DomainSpec& b);
};

// ---------------------------------------------------------------------------
// Axis-aligned rectangle (clip windows, raster extents).

struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool valid() const { return x0 < x1 && y0 < y1; }
  bool contains(const P2& p) const {
    return p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1;
  }
  Polygon2 polygon() const {  // CCW
    return {P2{x0, y0}, P2{x1, y0}, P2{x1, y1}, P2{x0, y1}};
  }
};

// ---------------------------------------------------------------------------
// Hyperplane {x : <normal, x> + offset = 0}. The sign of eval() is the side;
// diagram code intersects the eval <= 0 halfspaces.

struct Hyperplane {
  Vec normal;
  double offset = 0.0;

  double eval(const Vec& x) const { return dot(normal, x) + offset; }
  double eval2(const P2& p) const { return normal[0] * p[0] + normal[1] * p[1] + offset; }
};

// Sutherland-Hodgman step: keep the eval <= eps side of `h`. Convex input,
// convex output. `eps` absorbs grazing vertices; pass a scale-aware value.
Polygon2 clip_halfplane(const Polygon2& poly, const Hyperplane& h, double eps = 1e-12);

double polygon_area(const Polygon2& poly);
P2 polygon_centroid(const Polygon2& poly);
bool polygon_contains(const Polygon2& poly, const P2& p);  // convex, CCW
double orient2d(const P2& a, const P2& b, const P2& c);

// ---------------------------------------------------------------------------
// Deterministic RNG. mt19937_64 bit stream with an explicit bits->double map
// so sequences are identical across standard libraries.

class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next_u64();
  double uniform01();  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  int below(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

 private:
  uint64_t state_;
};

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature to an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 40);

// Run fn(begin, end) over [0, n) chunks. Thread count: BVD_THREADS env var,
// 0/unset = hardware concurrency. Static partition, deterministic output.
void parallel_for(int n, const std::function<void(int, int)>& fn);

}  // namespace bvd
