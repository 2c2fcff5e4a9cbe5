#include "bvd/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bvd {

namespace {

// Safeguarded Newton/bisection for df(x) = y on an open interval with df
// strictly increasing. Brackets by geometric expansion from an interior
// start, then iterates Newton (when d2f is available) guarded by bisection.
double solve_inverse_1d(const Func1D& fac, double y) {
  const Interval& dom = fac.dom;
  // grad_image with lo >= hi marks "unknown"; only check when meaningful.
  if (fac.grad_image.lo < fac.grad_image.hi &&
      !(y > fac.grad_image.lo && y < fac.grad_image.hi))
    throw DomainError("inverse gradient: value outside gradient image");

  auto guarded = [&](double x) {
    double v = fac.df(x);
    if (!std::isfinite(v)) throw NonFiniteError("inverse gradient: df not finite");
    return v;
  };

  // Interior anchor to expand from.
  double lo = dom.lo, hi = dom.hi;
  double anchor;
  if (std::isfinite(lo) && std::isfinite(hi))
    anchor = (lo + hi) / 2.0;
  else if (std::isfinite(lo))
    anchor = lo + 1.0;
  else if (std::isfinite(hi))
    anchor = hi - 1.0;
  else
    anchor = 0.0;

  double a = anchor, b = anchor;
  double fa = guarded(a), fb = fa;
  // Grow the bracket toward whichever end is needed.
  for (int it = 0; fa > y && it < 400; ++it) {
    if (std::isfinite(lo)) {
      a = lo + (a - lo) * 0.5;
    } else {
      a = (a < 0 ? a * 2.0 : a - 1.0) - 1.0;
    }
    fa = guarded(a);
  }
  for (int it = 0; fb < y && it < 400; ++it) {
    if (std::isfinite(hi)) {
      b = hi - (hi - b) * 0.5;
    } else {
      b = (b > 0 ? b * 2.0 : b + 1.0) + 1.0;
    }
    fb = guarded(b);
  }
  if (fa > y || fb < y) throw DomainError("inverse gradient: bracketing failed");

  double x = (a + b) / 2.0;
  for (int it = 0; it < 200; ++it) {
    double fx = guarded(x);
    double err = fx - y;
    if (std::fabs(err) <= kInverseTol * (1.0 + std::fabs(y))) return x;
    if (err > 0)
      b = x;
    else
      a = x;
    double step_x = std::numeric_limits<double>::quiet_NaN();
    if (fac.d2f) {
      double d = fac.d2f(x);
      if (std::isfinite(d) && d > 0) step_x = x - err / d;
    }
    if (!(step_x > a && step_x < b)) step_x = (a + b) / 2.0;  // bisect fallback
    x = step_x;
    if (b - a <= 1e-16 * (1.0 + std::fabs(a) + std::fabs(b))) return x;
  }
  return x;
}

// Assembles a separable Generator from its univariate factors. Missing
// inverse gradients are synthesized numerically; the Hessian is diagonal and
// present only when every factor has a second derivative.
Generator from_factors(const std::string& name, std::vector<Func1D> factors) {
  Generator g;
  g.name = name;
  g.dim = static_cast<int>(factors.size());

  for (Func1D& fac : factors) {
    if (!fac.inv_df) {
      Func1D probe = fac;  // value copy for the closure; inv_df unused inside
      fac.inv_df = [probe](double y) { return solve_inverse_1d(probe, y); };
    }
  }
  g.factors = factors;

  g.domain = DomainSpec::all_space(g.dim);
  DomainSpec image = DomainSpec::all_space(g.dim);
  bool image_known = true;
  for (int i = 0; i < g.dim; ++i) {
    g.domain.box[i] = factors[i].dom;
    image.box[i] = factors[i].grad_image;
    if (!(factors[i].grad_image.lo < factors[i].grad_image.hi)) image_known = false;
  }
  if (image_known) g.grad_image = image;

  g.f = [factors](const Vec& x) {
    double s = 0.0;
    for (size_t i = 0; i < factors.size(); ++i) s += factors[i].f(x[i]);
    return s;
  };
  g.grad = [factors](const Vec& x) {
    Vec r(x.size());
    for (size_t i = 0; i < factors.size(); ++i) r[i] = factors[i].df(x[i]);
    return r;
  };
  g.inv_grad = [factors](const Vec& y) {
    Vec r(y.size());
    for (size_t i = 0; i < factors.size(); ++i) r[i] = factors[i].inv_df(y[i]);
    return r;
  };
  bool have_d2 = true;
  for (const Func1D& fac : factors)
    if (!fac.d2f) have_d2 = false;
  if (have_d2) {
    int dim = g.dim;
    g.hessian = [factors, dim](const Vec& x) {
      Mat h(dim, dim);
      for (int i = 0; i < dim; ++i) h.at(i, i) = factors[i].d2f(x[i]);
      return h;
    };
  }
  return g;
}

std::vector<Func1D> replicate(const Func1D& fac, int dim) {
  if (dim < 1) throw ConfigError("generator dimension must be >= 1");
  return std::vector<Func1D>(static_cast<size_t>(dim), fac);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

double stable_log1pexp(double x) {  // log(1 + e^x) without overflow
  if (x > 36.0) return x + std::exp(-x);
  if (x < -36.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

void check_point(const Generator& gen, const Vec& x, const char* role) {
  require_dim(x, gen.dim, gen.name.c_str());
  if (!gen.domain.contains(x)) {
    std::ostringstream os;
    os << gen.name << ": " << role << " point (";
    for (size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ") outside the open domain";
    throw DomainError(os.str());
  }
}

}  // namespace

// --- built-ins --------------------------------------------------------------

Generator squared_norm(int dim) {
  Func1D fac;
  fac.f = [](double x) { return x * x; };
  fac.df = [](double x) { return 2.0 * x; };
  fac.inv_df = [](double y) { return y / 2.0; };
  fac.d2f = [](double) { return 2.0; };
  fac.dom = Interval{-kInf, kInf};
  fac.grad_image = Interval{-kInf, kInf};
  return from_factors("squared_norm", replicate(fac, dim));
}

Generator squared_half_norm(int dim) {
  Func1D fac;
  fac.f = [](double x) { return 0.5 * x * x; };
  fac.df = [](double x) { return x; };
  fac.inv_df = [](double y) { return y; };
  fac.d2f = [](double) { return 1.0; };
  fac.dom = Interval{-kInf, kInf};
  fac.grad_image = Interval{-kInf, kInf};
  return from_factors("squared_half_norm", replicate(fac, dim));
}

Generator norm_like(int alpha, int dim) {
  if (alpha < 2) throw ConfigError("norm_like: alpha must be an integer >= 2");
  double a = alpha;
  Func1D fac;
  fac.f = [a](double x) { return std::pow(x, a); };
  fac.df = [a](double x) { return a * std::pow(x, a - 1.0); };
  fac.inv_df = [a](double y) { return std::pow(y / a, 1.0 / (a - 1.0)); };
  fac.d2f = [a](double x) { return a * (a - 1.0) * std::pow(x, a - 2.0); };
  fac.dom = Interval{0.0, kInf};
  fac.grad_image = Interval{0.0, kInf};
  return from_factors("norm_like", replicate(fac, dim));
}

Generator shannon(int dim) {
  Func1D fac;
  fac.f = [](double x) { return x * std::log(x) - x; };
  fac.df = [](double x) { return std::log(x); };
  fac.inv_df = [](double y) { return std::exp(y); };
  fac.d2f = [](double x) { return 1.0 / x; };
  fac.dom = Interval{0.0, kInf};
  fac.grad_image = Interval{-kInf, kInf};
  return from_factors("shannon", replicate(fac, dim));
}

Generator exponential(int dim) {
  Func1D fac;
  fac.f = [](double x) { return std::exp(x); };
  fac.df = [](double x) { return std::exp(x); };
  fac.inv_df = [](double y) { return std::log(y); };
  fac.d2f = [](double x) { return std::exp(x); };
  fac.dom = Interval{-kInf, kInf};
  fac.grad_image = Interval{0.0, kInf};
  return from_factors("exponential", replicate(fac, dim));
}

Generator burg(int dim) {
  Func1D fac;
  fac.f = [](double x) { return -std::log(x); };
  fac.df = [](double x) { return -1.0 / x; };
  fac.inv_df = [](double y) { return -1.0 / y; };
  fac.d2f = [](double x) { return 1.0 / (x * x); };
  fac.dom = Interval{0.0, kInf};
  fac.grad_image = Interval{-kInf, 0.0};
  return from_factors("burg", replicate(fac, dim));
}

Generator bit_entropy(int dim) {
  Func1D fac;
  fac.f = [](double x) { return x * std::log(x) + (1.0 - x) * std::log(1.0 - x); };
  fac.df = [](double x) { return std::log(x / (1.0 - x)); };
  fac.inv_df = [](double y) { return sigmoid(y); };
  fac.d2f = [](double x) { return 1.0 / (x * (1.0 - x)); };
  fac.dom = Interval{0.0, 1.0};
  fac.grad_image = Interval{-kInf, kInf};
  return from_factors("bit_entropy", replicate(fac, dim));
}

Generator dual_bit_entropy(int dim) {
  Func1D fac;
  fac.f = [](double x) { return stable_log1pexp(x); };
  fac.df = [](double x) { return sigmoid(x); };
  fac.inv_df = [](double y) { return std::log(y / (1.0 - y)); };
  fac.d2f = [](double x) {
    double s = sigmoid(x);
    return s * (1.0 - s);
  };
  fac.dom = Interval{-kInf, kInf};
  fac.grad_image = Interval{0.0, 1.0};
  return from_factors("dual_bit_entropy", replicate(fac, dim));
}

Generator hellinger_like(int dim) {
  Func1D fac;
  fac.f = [](double x) { return -std::sqrt(1.0 - x * x); };
  fac.df = [](double x) { return x / std::sqrt(1.0 - x * x); };
  fac.inv_df = [](double y) { return y / std::sqrt(1.0 + y * y); };
  fac.d2f = [](double x) { return std::pow(1.0 - x * x, -1.5); };
  fac.dom = Interval{-1.0, 1.0};
  fac.grad_image = Interval{-kInf, kInf};
  return from_factors("hellinger_like", replicate(fac, dim));
}

Generator mahalanobis(const Mat& q) {
  if (q.rows != q.cols || q.rows < 1) throw ConfigError("mahalanobis: Q must be square");
  const int dim = q.rows;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j)
      if (std::fabs(q.at(i, j) - q.at(j, i)) > 1e-12 * (1.0 + std::fabs(q.at(i, j))))
        throw ConfigError("mahalanobis: Q must be symmetric");
  auto qinv = invert(q);
  if (!qinv) throw ConfigError("mahalanobis: Q is singular");
  // SPD check via leading principal minors.
  for (int k = 1; k <= dim; ++k) {
    Mat sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub.at(i, j) = q.at(i, j);
    if (determinant(sub) <= 0.0) throw ConfigError("mahalanobis: Q must be positive definite");
  }

  Generator g;
  g.name = "mahalanobis";
  g.dim = dim;
  g.domain = DomainSpec::all_space(dim);
  g.grad_image = DomainSpec::all_space(dim);
  Mat qm = q, qi = *qinv;
  g.f = [qm](const Vec& x) { return dot(x, mat_vec(qm, x)); };
  g.grad = [qm](const Vec& x) { return scaled(mat_vec(qm, x), 2.0); };
  g.inv_grad = [qi](const Vec& y) { return scaled(mat_vec(qi, y), 0.5); };
  g.hessian = [qm](const Vec&) {
    Mat h = qm;
    for (double& v : h.a) v *= 2.0;
    return h;
  };
  return g;
}

const std::vector<std::string>& builtin_generator_names() {
  static const std::vector<std::string> names = {
      "squared_norm",     "squared_half_norm", "norm_like", "shannon",
      "exponential",      "burg",              "bit_entropy", "dual_bit_entropy",
      "hellinger_like",   "mahalanobis"};
  return names;
}

Generator make_generator(const GeneratorSpec& spec) {
  const std::string& n = spec.name;
  if (n == "squared_norm") return squared_norm(spec.dim);
  if (n == "squared_half_norm") return squared_half_norm(spec.dim);
  if (n == "norm_like") return norm_like(spec.alpha, spec.dim);
  if (n == "shannon") return shannon(spec.dim);
  if (n == "exponential") return exponential(spec.dim);
  if (n == "burg") return burg(spec.dim);
  if (n == "bit_entropy") return bit_entropy(spec.dim);
  if (n == "dual_bit_entropy") return dual_bit_entropy(spec.dim);
  if (n == "hellinger_like") return hellinger_like(spec.dim);
  if (n == "mahalanobis") {
    if (!spec.q) throw ConfigError("mahalanobis requires a Q matrix");
    return mahalanobis(*spec.q);
  }
  std::ostringstream os;
  os << "unknown generator '" << n << "'; valid names:";
  for (const auto& name : builtin_generator_names()) os << " " << name;
  throw ConfigError(os.str());
}

// --- operations -------------------------------------------------------------

double eval_divergence(const Generator& gen, const Vec& p, const Vec& q) {
  check_point(gen, p, "first");
  check_point(gen, q, "second");
  double fp = gen.f(p);
  double fq = gen.f(q);
  Vec gq = gen.grad(q);
  double d = fp - fq - dot(gq, sub(p, q));
  if (!std::isfinite(d))
    throw NonFiniteError(gen.name + ": divergence evaluation overflowed");
  if (d < 0.0 && d > -kDivergenceClamp) d = 0.0;
  return d;
}

double eval_conjugate(const Generator& gen, const Vec& y) {
  require_dim(y, gen.dim, gen.name.c_str());
  if (!gen.inv_grad)
    throw UnsupportedError(gen.name + ": no inverse gradient; conjugate unavailable");
  if (gen.grad_image && !gen.grad_image->contains(y))
    throw DomainError(gen.name + ": point outside the gradient image");
  Vec x = gen.inv_grad(y);
  if (!all_finite(x) || !gen.domain.contains(x, 0.0))
    throw DomainError(gen.name + ": inverse gradient left the domain");
  double v = dot(x, y) - gen.f(x);
  if (!std::isfinite(v)) throw NonFiniteError(gen.name + ": conjugate overflowed");
  return v;
}

double eval_dual_divergence(const Generator& gen, const Vec& y1, const Vec& y2) {
  // D_{F*}(y1||y2) = F*(y1) - F*(y2) - <grad F*(y2), y1-y2>, grad F* = inv_grad.
  if (!gen.inv_grad)
    throw UnsupportedError(gen.name + ": no inverse gradient; dual divergence unavailable");
  double c1 = eval_conjugate(gen, y1);
  double c2 = eval_conjugate(gen, y2);
  Vec x2 = gen.inv_grad(y2);
  double d = c1 - c2 - dot(x2, sub(y1, y2));
  if (!std::isfinite(d)) throw NonFiniteError(gen.name + ": dual divergence overflowed");
  if (d < 0.0 && d > -kDivergenceClamp) d = 0.0;
  return d;
}

Generator dual_generator(const Generator& gen) {
  if (!gen.inv_grad)
    throw UnsupportedError(gen.name + ": no inverse gradient; dual generator unavailable");
  if (!gen.grad_image)
    throw UnsupportedError(gen.name +
                           ": gradient image is not representable; dual generator unavailable");
  Generator d;
  d.name = gen.name + "*";
  d.dim = gen.dim;
  d.domain = *gen.grad_image;
  d.grad_image = gen.domain;
  if (gen.separable()) {
    std::vector<Func1D> dual_facs;
    dual_facs.reserve(gen.factors.size());
    for (const Func1D& fac : gen.factors) {
      Func1D df;
      Func1D base = fac;
      df.f = [base](double y) {
        double x = base.inv_df(y);
        return x * y - base.f(x);
      };
      df.df = fac.inv_df;
      df.inv_df = fac.df;
      if (fac.d2f) {
        df.d2f = [base](double y) { return 1.0 / base.d2f(base.inv_df(y)); };
      }
      df.dom = fac.grad_image;
      df.grad_image = fac.dom;
      dual_facs.push_back(df);
    }
    Generator sep = from_factors(d.name, dual_facs);
    sep.domain = d.domain;      // keep box identical to gen.grad_image
    sep.grad_image = d.grad_image;
    return sep;
  }
  Generator base = gen;
  d.f = [base](const Vec& y) { return eval_conjugate(base, y); };
  d.grad = gen.inv_grad;
  d.inv_grad = gen.grad;
  if (gen.hessian && gen.inv_grad) {
    d.hessian = [base](const Vec& y) {
      Vec x = base.inv_grad(y);
      auto inv = invert(base.hessian(x));
      if (!inv) throw DegenerateInput(base.name + ": Hessian not invertible");
      return *inv;
    };
  }
  return d;
}

double symmetrized_divergence(const Generator& gen, const Vec& p, const Vec& q) {
  return 0.5 * (eval_divergence(gen, p, q) + eval_divergence(gen, q, p));
}

Generator make_separable(const std::vector<Generator>& parts, const std::string& name) {
  if (parts.empty()) throw ConfigError("make_separable: no parts");
  std::vector<Func1D> factors;
  std::string auto_name = "sep(";
  for (size_t i = 0; i < parts.size(); ++i) {
    const Generator& g = parts[i];
    if (g.dim != 1) throw DimensionMismatch("make_separable: parts must be univariate");
    if (g.separable()) {
      factors.push_back(g.factors[0]);
    } else {
      // Wrap a generic univariate generator into factor form.
      Func1D fac;
      Generator base = g;
      fac.f = [base](double x) { return base.f(Vec{x}); };
      fac.df = [base](double x) { return base.grad(Vec{x})[0]; };
      if (g.inv_grad) fac.inv_df = [base](double y) { return base.inv_grad(Vec{y})[0]; };
      if (g.hessian) fac.d2f = [base](double x) { return base.hessian(Vec{x}).at(0, 0); };
      fac.dom = g.domain.box[0];
      if (g.grad_image)
        fac.grad_image = g.grad_image->box[0];
      else
        fac.grad_image = Interval{1.0, -1.0};  // marks "unknown"
      factors.push_back(fac);
    }
    auto_name += (i ? "," : "") + g.name;
  }
  auto_name += ")";
  return from_factors(name.empty() ? auto_name : name, factors);
}

namespace {

// Limit of df at an endpoint of a (possibly smaller) common domain: evaluate
// when the endpoint is interior to the factor's own domain, otherwise reuse
// the factor's known image bound.
double df_limit(const Func1D& fac, double endpoint, bool lower) {
  double own = lower ? fac.dom.lo : fac.dom.hi;
  if (endpoint == own) return lower ? fac.grad_image.lo : fac.grad_image.hi;
  return fac.df(endpoint);
}

}  // namespace

Generator linear_combination(const std::vector<Generator>& gens,
                             const std::vector<double>& weights) {
  if (gens.empty() || gens.size() != weights.size())
    throw ConfigError("linear_combination: need matching generators and weights");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw ConfigError("linear_combination: weights must be positive and finite");
  const int dim = gens[0].dim;
  for (const Generator& g : gens)
    if (g.dim != dim) throw DimensionMismatch("linear_combination: dimension mismatch");

  std::string name = "lincomb(";
  for (size_t i = 0; i < gens.size(); ++i) name += (i ? "," : "") + gens[i].name;
  name += ")";

  bool all_sep = true;
  for (const Generator& g : gens)
    if (!g.separable()) all_sep = false;

  if (all_sep) {
    std::vector<Func1D> combined(dim);
    for (int c = 0; c < dim; ++c) {
      std::vector<Func1D> facs;
      for (const Generator& g : gens) facs.push_back(g.factors[c]);
      std::vector<double> ws = weights;
      Interval dom = facs[0].dom;
      for (const Func1D& fac : facs) {
        dom.lo = std::max(dom.lo, fac.dom.lo);
        dom.hi = std::min(dom.hi, fac.dom.hi);
      }
      if (dom.empty()) throw EmptyDomain("linear_combination: empty domain");
      Func1D out;
      out.dom = dom;
      out.f = [facs, ws](double x) {
        double s = 0.0;
        for (size_t i = 0; i < facs.size(); ++i) s += ws[i] * facs[i].f(x);
        return s;
      };
      out.df = [facs, ws](double x) {
        double s = 0.0;
        for (size_t i = 0; i < facs.size(); ++i) s += ws[i] * facs[i].df(x);
        return s;
      };
      bool have_d2 = true;
      for (const Func1D& fac : facs)
        if (!fac.d2f) have_d2 = false;
      if (have_d2) {
        out.d2f = [facs, ws](double x) {
          double s = 0.0;
          for (size_t i = 0; i < facs.size(); ++i) s += ws[i] * facs[i].d2f(x);
          return s;
        };
      }
      // Image bounds: sum of per-factor limits at the common endpoints.
      double lo = 0.0, hi = 0.0;
      for (size_t i = 0; i < facs.size(); ++i) {
        double l = df_limit(facs[i], dom.lo, true);
        double h = df_limit(facs[i], dom.hi, false);
        lo = (std::isinf(lo) || std::isinf(l)) ? -kInf : lo + ws[i] * l;
        hi = (std::isinf(hi) || std::isinf(h)) ? kInf : hi + ws[i] * h;
      }
      out.grad_image = Interval{lo, hi};
      combined[c] = out;  // inv_df synthesized by from_factors
    }
    return from_factors(name, combined);
  }

  Generator g;
  g.name = name;
  g.dim = dim;
  g.domain = gens[0].domain;
  for (size_t i = 1; i < gens.size(); ++i)
    g.domain = DomainSpec::intersect(g.domain, gens[i].domain);
  std::vector<Generator> parts = gens;
  std::vector<double> ws = weights;
  g.f = [parts, ws](const Vec& x) {
    double s = 0.0;
    for (size_t i = 0; i < parts.size(); ++i) s += ws[i] * parts[i].f(x);
    return s;
  };
  g.grad = [parts, ws](const Vec& x) {
    Vec s(x.size(), 0.0);
    for (size_t i = 0; i < parts.size(); ++i) {
      Vec gi = parts[i].grad(x);
      for (size_t c = 0; c < s.size(); ++c) s[c] += ws[i] * gi[c];
    }
    return s;
  };
  bool have_h = true;
  for (const Generator& p : parts)
    if (!p.hessian) have_h = false;
  if (have_h) {
    g.hessian = [parts, ws, dim](const Vec& x) {
      Mat h(dim, dim);
      for (size_t i = 0; i < parts.size(); ++i) {
        Mat hi = parts[i].hessian(x);
        for (size_t k = 0; k < h.a.size(); ++k) h.a[k] += ws[i] * hi.a[k];
      }
      return h;
    };
  }
  // inv_grad/grad_image intentionally absent: inverting a sum of
  // non-separable gradients is out of scope.
  return g;
}

Generator with_linear_shift(const Generator& gen, const Vec& a, double b) {
  require_dim(a, gen.dim, "with_linear_shift");
  Generator g = gen;
  g.name = gen.name + "+affine";
  Generator base = gen;
  Vec av = a;
  g.f = [base, av, b](const Vec& x) { return base.f(x) + dot(av, x) + b; };
  g.grad = [base, av](const Vec& x) { return add(base.grad(x), av); };
  if (gen.inv_grad) g.inv_grad = [base, av](const Vec& y) { return base.inv_grad(sub(y, av)); };
  if (gen.grad_image) {
    DomainSpec img = *gen.grad_image;
    for (int i = 0; i < g.dim; ++i) {
      img.box[i].lo += a[i];
      img.box[i].hi += a[i];
    }
    g.grad_image = img;
  }
  if (gen.separable()) {
    for (int i = 0; i < g.dim; ++i) {
      Func1D fac = gen.factors[i];
      double ai = a[i], bi = (i == 0 ? b : 0.0);
      Func1D shifted = fac;
      shifted.f = [fac, ai, bi](double x) { return fac.f(x) + ai * x + bi; };
      shifted.df = [fac, ai](double x) { return fac.df(x) + ai; };
      shifted.inv_df = [fac, ai](double y) { return fac.inv_df(y - ai); };
      shifted.grad_image = Interval{fac.grad_image.lo + ai, fac.grad_image.hi + ai};
      g.factors[i] = shifted;
    }
  }
  return g;
}

Vec sample_domain_point(const DomainSpec& dom, Rng& rng) {
  Vec x(dom.dim);
  if (dom.kind == DomainSpec::Kind::simplex) {
    double total = 0.0;
    for (int i = 0; i < dom.dim; ++i) {
      x[i] = -std::log(1.0 - rng.uniform01() + 1e-300);
      total += x[i];
    }
    double mass = rng.uniform(0.2, 0.8);
    for (double& v : x) v = v / total * mass;
    return x;
  }
  for (int i = 0; i < dom.dim; ++i) {
    const Interval& iv = dom.box[i];
    bool lo_f = std::isfinite(iv.lo), hi_f = std::isfinite(iv.hi);
    if (lo_f && hi_f) {
      double pad = 0.05 * (iv.hi - iv.lo);
      x[i] = rng.uniform(iv.lo + pad, iv.hi - pad);
    } else if (lo_f) {
      x[i] = iv.lo + rng.uniform(0.1, 3.0);
    } else if (hi_f) {
      x[i] = iv.hi - rng.uniform(0.1, 3.0);
    } else {
      x[i] = rng.uniform(-3.0, 3.0);
    }
  }
  return x;
}

std::vector<std::string> validate_generator(const Generator& gen, Rng& rng, int trials) {
  std::vector<std::string> issues;
  auto complain = [&issues](const std::string& s) {
    if (issues.size() < 16) issues.push_back(s);
  };
  for (int t = 0; t < trials; ++t) {
    Vec p = sample_domain_point(gen.domain, rng);
    Vec q = sample_domain_point(gen.domain, rng);
    if (dist2(p, q) < 1e-18) continue;
    double d;
    try {
      d = eval_divergence(gen, p, q);
    } catch (const Error& e) {
      complain(std::string("divergence threw: ") + e.what());
      continue;
    }
    if (!(d > 0.0)) complain("divergence not positive on distinct points");
    if (eval_divergence(gen, p, p) != 0.0) complain("D(p||p) != 0");
    if (gen.inv_grad) {
      Vec g = gen.grad(p);
      Vec back = gen.inv_grad(g);
      double err = std::sqrt(dist2(back, p)) / (1.0 + norm(p));
      if (err > 1e-8) complain("inv_grad(grad(p)) missed p (rel " + std::to_string(err) + ")");
    }
    if (gen.hessian) {
      Mat h = gen.hessian(p);
      if (gen.dim == 2) {
        auto ev = sym2_eigenvalues(h.at(0, 0), h.at(0, 1), h.at(1, 1));
        if (!(ev[0] > 0.0)) complain("Hessian not positive definite");
      } else {
        for (int i = 0; i < gen.dim; ++i)
          if (!(h.at(i, i) > 0.0)) complain("Hessian diagonal not positive");
      }
    }
  }
  return issues;
}

}  // namespace bvd
