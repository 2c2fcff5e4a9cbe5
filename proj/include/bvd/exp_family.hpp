#pragma once

// Exponential families in natural parameters and the KL <-> Bregman bridge:
// for densities p(x|theta) = exp(<t(x), theta> - F(theta)) with log-normalizer
// F, the Kullback-Leibler divergence is the Bregman divergence of F with the
// arguments swapped:
//
//   KL(theta_p || theta_q) = D_F(theta_q || theta_p)
//
// Expectation parameters are mu = grad F(theta); the inverse gradient maps
// back. Each built-in family also ships its textbook closed-form KL, which
// doubles as an independent cross-check of the bridge.

#include <string>
#include <vector>

#include "bvd/core.hpp"
#include "bvd/generator.hpp"

namespace bvd {

struct ExpFamily {
  std::string name;
  int order = 1;        // dimension of the natural parameter space
  Generator cumulant;   // log-normalizer F over natural parameters

  // Closed-form KL in SOURCE parameters (independent derivation, not routed
  // through the cumulant).
  std::function<double(const Vec&, const Vec&)> closed_form_kl;
  std::function<Vec(const Vec&)> source_to_natural;
  std::function<Vec(const Vec&)> natural_to_source;
  std::vector<std::string> source_param_names;
};

// Built-ins. Note on naming: `laplacian` follows its cumulant F(theta) =
// -log(theta), theta > 0 — the exponential-decay / rate parameterization —
// and its closed-form KL is the exponential-distribution formula
// log(a/b) + b/a - 1.
ExpFamily bernoulli_family();       // source: success probability in (0,1)
ExpFamily poisson_family();         // source: rate lambda > 0
ExpFamily normal_family();          // source: (mean, variance), variance > 0
ExpFamily laplacian_family();       // source: rate theta > 0

ExpFamily make_family(const std::string& name);
const std::vector<std::string>& family_names();

// KL between members given NATURAL parameters (argument-swapped Bregman
// divergence of the cumulant).
double kl_divergence(const ExpFamily& fam, const Vec& theta_p, const Vec& theta_q);

// Natural -> expectation parameters (mu = grad F) and back.
Vec to_expectation(const ExpFamily& fam, const Vec& theta);
Vec to_natural(const ExpFamily& fam, const Vec& mu);

}  // namespace bvd
