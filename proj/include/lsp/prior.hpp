#pragma once
// The LSP prior: per-feature inclusion probabilities
//   theta_j = s * w_j^eta / mean_k(w_k^eta),
// where s in (0,1) is the global sparsity level and eta >= 0 controls how
// strongly weight differences translate into inclusion-probability contrast.
// eta = 0 recovers the uniform theta_j = s baseline. Hyperpriors: s ~
// Beta(a_s, b_s); eta ~ pi0 * delta_0 + (1 - pi0) * DiscreteUniform(grid).

#include "lsp/types.hpp"

#include <optional>
#include <vector>

namespace lsp {

struct LspConfig {
  double a_s = 1.0;
  double b_s = 0.0;              // 0 means auto: set to p by finalize()
  double pi0 = 0.5;
  std::vector<double> eta_grid;  // strictly positive, strictly increasing; empty means auto
  std::optional<double> fixed_s;
  std::optional<double> fixed_eta;

  double s_reference() const { return a_s / (a_s + b_s); }

  void validate() const;

  // Resolves auto fields: b_s = p, and the eta grid becomes ten equally
  // spaced values on (0, eta_max] computed at the reference s. When eta is
  // unbounded for that s (in particular whenever s_ref * p < 1) or no
  // weights are supplied, the grid defaults to {1..10}. The grid is fixed
  // here once; samplers never re-grid when s moves.
  void finalize(std::size_t p, const WeightVector* w = nullptr);

  static LspConfig defaults_for(std::size_t p, const WeightVector* w = nullptr);
};

struct ThetaVector {
  Vector values;  // each strictly in (0, 1); mean equals s by construction
};

// Throws ThetaOverflow if any theta_j >= 1 (eta above its valid bound for
// this s and w). w_j^eta is evaluated as exp(eta * log w_j).
ThetaVector compute_theta(const WeightVector& w, double s, double eta);

struct EtaBound {
  bool unbounded = false;
  double value = 0.0;  // meaningful only when !unbounded
};

// Largest eta keeping every theta_j < 1. Unbounded iff s*p <= m where m is
// the multiplicity of max(w) (covers s*p < 1 and constant w). Otherwise the
// root of max_j theta_j = 1, located by bisection.
EtaBound eta_max(const WeightVector& w, double s, double tolerance = 1e-12);

// log((p-1)/(s*p-1)) / log(max w / min w); valid lower bound when s*p > 1.
double loose_eta_bound(const WeightVector& w, double s);

// sum_j [gamma_j log theta_j + (1 - gamma_j) log(1 - theta_j)]
double log_prior_gamma(const InclusionVector& gamma, const ThetaVector& theta);

// log pi0 at eta = 0, log((1 - pi0)/|grid|) on the grid, EtaNotOnGrid otherwise.
double log_hyperprior_eta(double eta, const LspConfig& config);

}  // namespace lsp
