#pragma once
// Collapsed posterior sampling for the discrete spike-and-slab regression
// model under the LSP prior. Coefficients and the noise variance are
// integrated out analytically (normal-inverse-gamma conjugacy), so the chain
// moves only over (gamma, s, eta): an add-delete-swap Metropolis-Hastings
// step for gamma, an exact categorical Gibbs draw for eta, and a logit-scale
// random-walk Metropolis update for s.

#include "lsp/prior.hpp"
#include "lsp/rng.hpp"
#include "lsp/types.hpp"

#include <cstddef>
#include <vector>

namespace lsp {

struct SsModelSpec {
  double tau = 1.0;       // slab scale: beta_j | gamma_j=1 ~ N(0, tau * sigma^2)
  double a_sigma = 0.01;  // inverse-gamma shape on sigma^2
  double b_sigma = 0.01;  // inverse-gamma scale on sigma^2
  LspConfig lsp;
};

struct ChainState {
  InclusionVector gamma;
  double s = 0.0;
  double eta = 0.0;
  double log_marginal = 0.0;  // cached log p(y | gamma)
};

struct PosteriorSummary {
  Vector mip;                     // marginal inclusion probabilities
  Vector bma_beta;                // model-averaged conditional posterior means
  InclusionVector mpm;            // mip_j > 0.5
  std::vector<double> s_trace;    // post burn-in
  std::vector<double> eta_trace;  // post burn-in
  std::size_t n_samples = 0;
  std::size_t burn_in = 0;
  double intercept = 0.0;
};

// Closed-form log p(y | gamma) with beta and sigma^2 integrated out. Expects
// centered data. The regularized Gram X_g' X_g + I/tau keeps the system
// nonsingular for any model size.
double log_marginal_likelihood(const RegressionData& centered, const InclusionVector& gamma,
                               const SsModelSpec& spec);

class SpikeSlabSampler {
 public:
  // Data must already be centered. The eta grid in spec.lsp must be set
  // (LspConfig::defaults_for) unless fixed_eta is given.
  SpikeSlabSampler(const RegressionData& centered, const WeightVector& w, const SsModelSpec& spec,
                   RngSeed seed);

  void ads_step();
  void update_eta();
  void update_s();

  // One full iteration: ADS move, then the eta draw, then the s update.
  void iterate() {
    ads_step();
    update_eta();
    update_s();
  }

  ChainState state() const;

  // E[beta | gamma, y] = (X_g' X_g + I/tau)^{-1} X_g' y embedded at zero for
  // excluded coordinates; the same ridge as the marginal likelihood.
  Vector conditional_beta_mean();

  // Fresh recomputation of log p(y | gamma); tests compare against the cache.
  double recompute_log_marginal() const;

 private:
  double marginal_of(const std::vector<Eigen::Index>& active) const;
  double log_gamma_given(double s, std::size_t eta_index) const;
  void move_probabilities(std::size_t k, double* add, double* del, double* swap) const;
  double logit_theta(Eigen::Index j) const;

  const SsModelSpec spec_;
  Rng rng_;
  Eigen::Index n_ = 0, p_ = 0;

  Matrix gram_;   // X'X
  Vector xty_;    // X'y
  double yty_ = 0.0;
  double const_term_ = 0.0;  // data-independent part of the marginal

  // Candidate eta values ({0} + grid, or the pinned value) with their
  // mean-one scaled weight powers; theta_j = s * what[c][j].
  std::vector<double> eta_values_;
  std::vector<Vector> what_;
  std::vector<Vector> log_what_;
  std::vector<double> max_what_;
  std::vector<double> eta_log_hyper_;
  bool eta_pinned_ = false;

  std::vector<std::uint8_t> gamma_;
  std::vector<Eigen::Index> active_;
  double s_ = 0.0;
  std::size_t eta_index_ = 0;
  double log_marginal_ = 0.0;

  Vector beta_cache_;
  bool beta_cache_valid_ = false;

  mutable Matrix scratch_;  // Cholesky workspace
  mutable Vector scratch_u_;
};

// End-to-end fit on raw (uncentered) data. Passing w = nullptr runs the
// uninformative baseline: unit weights with eta pinned to zero. Total
// iterations = n_samples, of which burn_in are discarded.
PosteriorSummary run_chain(const RegressionData& data, const WeightVector* w, SsModelSpec spec,
                           std::size_t n_samples, std::size_t burn_in, RngSeed seed);

}  // namespace lsp
