#include "bvd/exp_family.hpp"

#include <cmath>

namespace bvd {

ExpFamily bernoulli_family() {
  ExpFamily fam;
  fam.name = "bernoulli";
  fam.order = 1;
  fam.cumulant = dual_bit_entropy(1);  // F(theta) = log(1 + e^theta)
  fam.source_param_names = {"p"};
  fam.closed_form_kl = [fam_name = fam.name](const Vec& a, const Vec& b) {
    double p = a[0], q = b[0];
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
      throw DomainError(fam_name + ": probabilities must lie in (0,1)");
    return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  };
  fam.source_to_natural = [name = fam.name](const Vec& s) {
    if (!(s[0] > 0.0 && s[0] < 1.0))
      throw DomainError(name + ": probability must lie in (0,1)");
    return Vec{std::log(s[0] / (1.0 - s[0]))};
  };
  fam.natural_to_source = [](const Vec& t) {
    double e = t[0] >= 0 ? 1.0 / (1.0 + std::exp(-t[0])) : std::exp(t[0]) / (1.0 + std::exp(t[0]));
    return Vec{e};
  };
  return fam;
}

ExpFamily poisson_family() {
  ExpFamily fam;
  fam.name = "poisson";
  fam.order = 1;
  fam.cumulant = exponential(1);  // F(theta) = e^theta
  fam.source_param_names = {"lambda"};
  fam.closed_form_kl = [name = fam.name](const Vec& a, const Vec& b) {
    double lp = a[0], lq = b[0];
    if (!(lp > 0.0 && lq > 0.0)) throw DomainError(name + ": rates must be positive");
    return lp * std::log(lp / lq) + lq - lp;
  };
  fam.source_to_natural = [name = fam.name](const Vec& s) {
    if (!(s[0] > 0.0)) throw DomainError(name + ": rate must be positive");
    return Vec{std::log(s[0])};
  };
  fam.natural_to_source = [](const Vec& t) { return Vec{std::exp(t[0])}; };
  return fam;
}

ExpFamily normal_family() {
  ExpFamily fam;
  fam.name = "normal";
  fam.order = 2;
  fam.source_param_names = {"mean", "variance"};

  // Natural parameters theta = (mu/sigma^2, -1/(2 sigma^2)); the log-
  // normalizer below is strictly convex on theta2 < 0. We keep theta2 away
  // from 0 by a fixed 1e-9 cushion so gradients stay well-scaled.
  Generator cum;
  cum.name = "normal_cumulant";
  cum.dim = 2;
  cum.domain = DomainSpec::all_space(2);
  cum.domain.box[1] = Interval{-std::numeric_limits<double>::infinity(), -1e-9};
  cum.f = [](const Vec& t) {
    return -t[0] * t[0] / (4.0 * t[1]) + 0.5 * std::log(-M_PI / t[1]);
  };
  cum.grad = [](const Vec& t) {
    double g0 = -t[0] / (2.0 * t[1]);
    double g1 = t[0] * t[0] / (4.0 * t[1] * t[1]) - 1.0 / (2.0 * t[1]);
    return Vec{g0, g1};
  };
  cum.inv_grad = [](const Vec& m) {
    // Expectation params (E[x], E[x^2]) = (mu, mu^2 + sigma^2).
    double var = m[1] - m[0] * m[0];
    if (!(var > 0.0))
      throw DomainError("normal: expectation point needs m2 > m1^2");
    return Vec{m[0] / var, -1.0 / (2.0 * var)};
  };
  cum.hessian = [](const Vec& t) {
    Mat h(2, 2);
    h.at(0, 0) = -1.0 / (2.0 * t[1]);
    h.at(0, 1) = h.at(1, 0) = t[0] / (2.0 * t[1] * t[1]);
    h.at(1, 1) = -t[0] * t[0] / (2.0 * t[1] * t[1] * t[1]) + 1.0 / (2.0 * t[1] * t[1]);
    return h;
  };
  // Gradient image {m2 > m1^2} is not a box; dual_generator stays unsupported
  // but eval_dual_divergence still works through inv_grad.
  fam.cumulant = cum;

  fam.closed_form_kl = [name = fam.name](const Vec& a, const Vec& b) {
    double mp = a[0], vp = a[1], mq = b[0], vq = b[1];
    if (!(vp > 0.0 && vq > 0.0)) throw DomainError(name + ": variances must be positive");
    return 0.5 * (std::log(vq / vp) + (vp + (mp - mq) * (mp - mq)) / vq - 1.0);
  };
  fam.source_to_natural = [name = fam.name](const Vec& s) {
    if (s.size() != 2) throw DimensionMismatch(name + ": source is (mean, variance)");
    if (!(s[1] > 0.0)) throw DomainError(name + ": variance must be positive");
    return Vec{s[0] / s[1], -1.0 / (2.0 * s[1])};
  };
  fam.natural_to_source = [name = fam.name](const Vec& t) {
    if (!(t[1] < 0.0)) throw DomainError(name + ": theta2 must be negative");
    double var = -1.0 / (2.0 * t[1]);
    return Vec{t[0] * var, var};
  };
  return fam;
}

ExpFamily laplacian_family() {
  ExpFamily fam;
  fam.name = "laplacian";
  fam.order = 1;
  // Cumulant as printed in the reference tables: F(theta) = -log theta on
  // theta > 0 (the Burg generator), i.e. the exponential-decay law with rate
  // theta. Source and natural parameters coincide.
  fam.cumulant = burg(1);
  fam.source_param_names = {"theta"};
  fam.closed_form_kl = [name = fam.name](const Vec& a, const Vec& b) {
    double tp = a[0], tq = b[0];
    if (!(tp > 0.0 && tq > 0.0)) throw DomainError(name + ": rates must be positive");
    return std::log(tp / tq) + tq / tp - 1.0;
  };
  fam.source_to_natural = [name = fam.name](const Vec& s) {
    if (!(s[0] > 0.0)) throw DomainError(name + ": rate must be positive");
    return s;
  };
  fam.natural_to_source = [](const Vec& t) { return t; };
  return fam;
}

ExpFamily make_family(const std::string& name) {
  if (name == "bernoulli") return bernoulli_family();
  if (name == "poisson") return poisson_family();
  if (name == "normal") return normal_family();
  if (name == "laplacian") return laplacian_family();
  std::string msg = "unknown family '" + name + "'; valid names:";
  for (const auto& n : family_names()) msg += " " + n;
  throw ConfigError(msg);
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {"bernoulli", "poisson", "normal", "laplacian"};
  return names;
}

double kl_divergence(const ExpFamily& fam, const Vec& theta_p, const Vec& theta_q) {
  // The swap is the whole point: KL(p||q) = D_F(theta_q || theta_p).
  return eval_divergence(fam.cumulant, theta_q, theta_p);
}

Vec to_expectation(const ExpFamily& fam, const Vec& theta) {
  require_dim(theta, fam.order, fam.name.c_str());
  if (!fam.cumulant.domain.contains(theta))
    throw DomainError(fam.name + ": natural parameter outside the family's domain");
  return fam.cumulant.grad(theta);
}

Vec to_natural(const ExpFamily& fam, const Vec& mu) {
  require_dim(mu, fam.order, fam.name.c_str());
  if (!fam.cumulant.inv_grad)
    throw UnsupportedError(fam.name + ": inverse gradient unavailable");
  Vec theta = fam.cumulant.inv_grad(mu);
  if (!all_finite(theta) || !fam.cumulant.domain.contains(theta, 0.0))
    throw DomainError(fam.name + ": expectation parameter outside the gradient image");
  return theta;
}

}  // namespace bvd
