#pragma once
// MAP estimation for the spike-and-slab Lasso under the LSP prior. The prior
// on each coefficient is a two-Laplace mixture with spike penalty lambda0 and
// slab penalty lambda1, mixed by theta_j. Coordinate descent applies adaptive
// soft-thresholding at lambda*_j = lambda1 p*_j + lambda0 (1 - p*_j), swept
// over an increasing lambda0 grid with warm starts; eta is selected per
// lambda0 by the log joint posterior and the final lambda0 by BIC.

#include "lsp/prior.hpp"
#include "lsp/rng.hpp"
#include "lsp/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lsp {

struct SslSpec {
  double lambda1 = 1.0;
  std::vector<double> lambda0_grid;  // empty: grid_size equally spaced on [1, n]
  std::size_t grid_size = 20;
  LspConfig lsp;

  enum class SMode { Fixed, Updated };
  SMode s_mode = SMode::Updated;  // Updated: s <- (a_s + |support|)/(a_s + b_s + p) between sweeps

  std::size_t max_iterations = 1000;  // full cycles per descent
  double tol = 1e-8;                  // max coefficient change declaring convergence
  bool check_monotone = false;        // debug: verify the objective never increases
};

struct SslPoint {
  Vector beta;
  double eta = 0.0;
  double s = 0.0;
  double bic = 0.0;
  std::vector<Eigen::Index> support;
  bool converged = true;
};

struct SslPath {
  std::vector<SslPoint> points;   // one per lambda0, in grid order
  std::size_t chosen_index = 0;   // BIC minimizer
  double intercept = 0.0;         // for the chosen point
};

// p*_j: posterior probability that beta_j came from the slab given theta_j.
double conditional_inclusion_prob(double beta_j, double theta_j, double lambda0, double lambda1);

// One coordinate descent solve at fixed (lambda0, eta, s) on centered data.
// Returns the MAP coefficients; sets *converged when provided (the best
// iterate is returned either way).
Vector ssl_coordinate_descent(const RegressionData& centered, const WeightVector& w,
                              const SslSpec& spec, double lambda0, double eta, double s,
                              Vector warm_start, bool* converged = nullptr);

// Penalized objective 0.5*RSS - sum_j log(mixture density); exposed for the
// monotonicity checks in tests.
double ssl_objective(const RegressionData& centered, const Vector& theta, const SslSpec& spec,
                     double lambda0, const Vector& beta);

struct EtaSelection {
  double eta = 0.0;
  Vector beta;
  double log_joint = 0.0;
  bool converged = true;
};

// Runs the descent once per admissible candidate eta (all from the same warm
// start) and returns the candidate maximizing the log joint posterior;
// ties break toward smaller eta.
EtaSelection select_eta_for_lambda0(const RegressionData& centered, const WeightVector& w,
                                    const SslSpec& spec, double lambda0,
                                    std::span<const double> candidates, const Vector& warm_start,
                                    double s);

// Full path on raw data. Passing w = nullptr runs the uninformative baseline
// (unit weights, eta pinned to zero). The path itself is deterministic; the
// seed parameter is accepted for interface uniformity.
SslPath run_path(const RegressionData& data, const WeightVector* w, SslSpec spec, RngSeed seed);

}  // namespace lsp
