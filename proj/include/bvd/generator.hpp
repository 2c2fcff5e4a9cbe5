#pragma once

// Strictly convex generator functions F and the divergences they induce:
//
//   D_F(p || q) = F(p) - F(q) - <grad F(q), p - q>
//
// A Generator bundles F, its gradient, the inverse gradient (exact where a
// closed form exists, safeguarded Newton/bisection otherwise), an optional
// Hessian, and the open domain. Separable generators additionally carry their
// univariate factors so combinators can stay per-coordinate.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bvd/core.hpp"

namespace bvd {

// One univariate factor: F(x) = sum_i fac_i(x_i) for separable generators.
struct Func1D {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> inv_df;  // synthesized numerically if absent
  std::function<double(double)> d2f;     // optional
  Interval dom;                          // open
  Interval grad_image;                   // image of dom under df (open)
};

struct Generator {
  std::string name;
  int dim = 1;
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad;
  std::function<Vec(const Vec&)> inv_grad;  // may be empty -> UnsupportedError on use
  std::function<Mat(const Vec&)> hessian;   // may be empty
  DomainSpec domain;
  std::optional<DomainSpec> grad_image;  // needed by dual_generator / conjugates
  std::vector<Func1D> factors;           // nonempty iff separable

  bool separable() const { return !factors.empty(); }
};

// --- built-in generators (stable external names) ---------------------------
Generator squared_norm(int dim = 1);        // F = |x|^2
Generator squared_half_norm(int dim = 1);   // F = |x|^2 / 2 (self-dual)
Generator norm_like(int alpha, int dim = 1);  // F = sum x_i^alpha, alpha int >= 2, x > 0
Generator shannon(int dim = 1);             // F = sum x log x - x
Generator exponential(int dim = 1);         // F = sum e^x
Generator burg(int dim = 1);                // F = -sum log x
Generator bit_entropy(int dim = 1);         // F = sum x log x + (1-x) log(1-x)
Generator dual_bit_entropy(int dim = 1);    // F = sum log(1 + e^x)
Generator hellinger_like(int dim = 1);      // F = -sum sqrt(1 - x^2)
Generator mahalanobis(const Mat& q);        // F = x^T Q x, Q SPD

// Name-driven construction for CLI/JSON configs.
struct GeneratorSpec {
  std::string name;
  int dim = 2;
  int alpha = 3;          // norm_like only
  std::optional<Mat> q;   // mahalanobis only
};
Generator make_generator(const GeneratorSpec& spec);
const std::vector<std::string>& builtin_generator_names();

// --- divergence operations --------------------------------------------------

// D_F(p || q). Throws DomainError when either point leaves the open domain,
// NonFiniteError on overflow. Tiny negatives from cancellation (within
// kDivergenceClamp of zero) are snapped to 0.
double eval_divergence(const Generator& gen, const Vec& p, const Vec& q);

// Legendre conjugate F*(y) = <x, y> - F(x) at x = (grad F)^{-1}(y).
double eval_conjugate(const Generator& gen, const Vec& y);

// Divergence of the conjugate, D_{F*}(y1 || y2), computed directly from the
// primal data (grad F* = inverse gradient). Works even when the gradient
// image is not a box and so no dual Generator object can be formed.
double eval_dual_divergence(const Generator& gen, const Vec& y1, const Vec& y2);

// Full dual generator F*: swaps grad/inv_grad and domain/gradient-image.
// Requires inv_grad and a representable gradient image (UnsupportedError
// otherwise). dual(dual(F)) agrees with F pointwise.
Generator dual_generator(const Generator& gen);

// S_F(p, q) = (D_F(p||q) + D_F(q||p)) / 2; symmetric, generally NOT a
// Bregman divergence itself.
double symmetrized_divergence(const Generator& gen, const Vec& p, const Vec& q);

// Product generator F(x) = sum_i F_i(x_i) from univariate parts.
Generator make_separable(const std::vector<Generator>& parts, const std::string& name = "");

// F = sum_i w_i F_i with w_i > 0; divergence combines the same way. All
// operands must share the dimension; domains intersect (EmptyDomain if that
// collapses). inv_grad is solved per-coordinate when every operand is
// separable, and is unavailable otherwise.
Generator linear_combination(const std::vector<Generator>& gens, const std::vector<double>& weights);

// F + <a, x> + b: changes F but not D_F (divergence invariance under affine
// terms). Gradient data shifts accordingly.
Generator with_linear_shift(const Generator& gen, const Vec& a, double b);

// Random strictly-interior domain point; used by validation and tests.
Vec sample_domain_point(const DomainSpec& dom, Rng& rng);

// Numeric health check: positivity of D on random pairs, inv_grad o grad
// round-trips, Hessian SPD where available. Returns human-readable failures.
std::vector<std::string> validate_generator(const Generator& gen, Rng& rng, int trials = 64);

}  // namespace bvd
