#pragma once
// Weighted l1-penalized least squares with inverse-importance penalty factors
// w_j^{-eta}, plus the sequential two-stage cross-validation that first picks
// eta and then lambda. eta = 0 recovers the standard Lasso.

#include "lsp/rng.hpp"
#include "lsp/types.hpp"

#include <cstddef>
#include <vector>

namespace lsp {

struct LassoCvSpec {
  std::size_t eta_count = 11;  // equally spaced on [eta_min, eta_max]
  double eta_min = 0.0;
  double eta_max = 10.0;
  std::size_t lambda_count = 100;  // equally spaced on log lambda
  double log_lambda_min = -2.27;
  double log_lambda_max = 2.34;
  std::size_t folds = 10;
  std::size_t max_iterations = 10000;
  double tol = 1e-10;  // max coefficient change per sweep

  std::vector<double> eta_grid() const;
  std::vector<double> lambda_grid() const;  // ascending
};

// argmin 0.5*sum_i (y_i - x_i'beta)^2 + lambda * sum_j w_j^{-eta} |beta_j|
// on centered data, by cyclic coordinate descent with per-feature thresholds.
Vector weighted_lasso_fit(const RegressionData& centered, const WeightVector& w, double eta,
                          double lambda, std::size_t max_iterations = 10000, double tol = 1e-10,
                          bool* converged = nullptr);

struct TwoStageCvResult {
  double eta = 0.0;
  double lambda = 0.0;
  Vector beta;  // refit on all data at (eta, lambda)
  double intercept = 0.0;
  std::vector<double> eta_grid;
  std::vector<double> lambda_grid;
  Matrix cv_error;  // eta x lambda mean held-out MSE
};

// Stage 1 scores each eta at its own best lambda over the grid; stage 2 fixes
// the chosen eta and picks lambda. Both stages share one fold split drawn
// from the seed. Requires n >= 2 * folds.
TwoStageCvResult two_stage_cv(const RegressionData& data, const WeightVector& w,
                              const LassoCvSpec& spec, RngSeed seed);

// Plain Lasso: unit penalty factors, lambda by the same CV machinery.
TwoStageCvResult lasso_cv(const RegressionData& data, const LassoCvSpec& spec, RngSeed seed);

// Per-feature fraction of fits with a nonzero coefficient.
Vector selection_frequency(const std::vector<Vector>& fits);

// Largest KKT residual of a solution: for active j the stationarity gap,
// for inactive j the amount |gradient| exceeds the penalty.
double max_kkt_violation(const RegressionData& centered, const WeightVector& w, double eta,
                         double lambda, const Vector& beta);

}  // namespace lsp
