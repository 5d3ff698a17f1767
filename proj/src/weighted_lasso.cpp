#include "lsp/weighted_lasso.hpp"

#include "lsp/standardize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsp {

namespace {

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

Vector penalty_factors(const WeightVector& w, double eta) {
  Vector f(w.values.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) f[j] = std::exp(-eta * std::log(w.values[j]));
  return f;
}

// Coordinate descent on precomputed Gram pieces; q = X'y - G beta maintained.
Vector descend(const Matrix& gram, const Vector& xty, const Vector& thresholds, Vector beta,
               std::size_t max_iterations, double tol, bool* converged) {
  const Eigen::Index p = xty.size();
  Vector q = xty - gram * beta;
  bool ok = false;
  for (std::size_t cycle = 0; cycle < max_iterations; ++cycle) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double gjj = gram(j, j);
      if (gjj <= 0.0) continue;
      const double z = q[j] + gjj * beta[j];
      const double updated = soft_threshold(z, thresholds[j]) / gjj;
      const double change = updated - beta[j];
      if (change != 0.0) {
        q -= gram.col(j) * change;
        beta[j] = updated;
        max_change = std::max(max_change, std::abs(change));
      }
    }
    if (max_change < tol) {
      ok = true;
      break;
    }
  }
  if (converged != nullptr) *converged = ok;
  return beta;
}

}  // namespace

std::vector<double> LassoCvSpec::eta_grid() const {
  std::vector<double> grid(eta_count);
  if (eta_count == 1) {
    grid[0] = eta_min;
    return grid;
  }
  for (std::size_t i = 0; i < eta_count; ++i)
    grid[i] = eta_min + (eta_max - eta_min) * static_cast<double>(i) /
                            static_cast<double>(eta_count - 1);
  return grid;
}

std::vector<double> LassoCvSpec::lambda_grid() const {
  std::vector<double> grid(lambda_count);
  if (lambda_count == 1) {
    grid[0] = std::exp(log_lambda_min);
    return grid;
  }
  for (std::size_t i = 0; i < lambda_count; ++i) {
    const double t = log_lambda_min + (log_lambda_max - log_lambda_min) * static_cast<double>(i) /
                                          static_cast<double>(lambda_count - 1);
    grid[i] = std::exp(t);
  }
  return grid;
}

Vector weighted_lasso_fit(const RegressionData& centered, const WeightVector& w, double eta,
                          double lambda, std::size_t max_iterations, double tol, bool* converged) {
  validate_dimensions(centered, w);
  if (eta < 0.0) throw Error(ErrorCode::OutOfRange, "eta must be nonnegative", "eta");
  if (!(lambda > 0.0)) throw Error(ErrorCode::OutOfRange, "lambda must be positive", "lambda");
  const Matrix gram = centered.X.transpose() * centered.X;
  const Vector xty = centered.X.transpose() * centered.y;
  const Vector thresholds = lambda * penalty_factors(w, eta);
  return descend(gram, xty, thresholds, Vector::Zero(xty.size()), max_iterations, tol, converged);
}

TwoStageCvResult two_stage_cv(const RegressionData& data, const WeightVector& w,
                              const LassoCvSpec& spec, RngSeed seed) {
  validate_dimensions(data, w);
  const auto n = static_cast<std::size_t>(data.n());
  const auto p = static_cast<Eigen::Index>(data.p());
  if (spec.folds < 2) throw Error(ErrorCode::ConfigError, "need at least two folds", "folds");
  if (spec.folds > n)
    throw Error(ErrorCode::InsufficientData, "more folds than rows", "folds");
  // leave-one-out (folds == n) is allowed; otherwise demand two rows per fold
  if (n < 2 * spec.folds && spec.folds != n)
    throw Error(ErrorCode::InsufficientData,
                "need n >= 2*folds (or folds == n); got n = " + std::to_string(n) + " with " +
                    std::to_string(spec.folds) + " folds");

  const std::vector<double> etas = spec.eta_grid();
  const std::vector<double> lambdas = spec.lambda_grid();

  // Deterministic fold split: shuffled indices dealt round-robin.
  Rng rng(seed);
  std::vector<std::size_t> perm = rng.permutation(n);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t i = 0; i < n; ++i) fold_of[perm[i]] = i % spec.folds;

  Matrix cv_error = Matrix::Zero(static_cast<Eigen::Index>(etas.size()),
                                 static_cast<Eigen::Index>(lambdas.size()));

  for (std::size_t fold = 0; fold < spec.folds; ++fold) {
    std::vector<Eigen::Index> train_rows, val_rows;
    for (std::size_t i = 0; i < n; ++i)
      (fold_of[i] == fold ? val_rows : train_rows).push_back(static_cast<Eigen::Index>(i));

    Matrix Xtr(train_rows.size(), p);
    Vector ytr(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      Xtr.row(static_cast<Eigen::Index>(i)) = data.X.row(train_rows[i]);
      ytr[static_cast<Eigen::Index>(i)] = data.y[train_rows[i]];
    }
    auto [ctr, record] = standardize(RegressionData{std::move(ytr), std::move(Xtr), {}});
    const Matrix gram = ctr.X.transpose() * ctr.X;
    const Vector xty = ctr.X.transpose() * ctr.y;

    for (std::size_t e = 0; e < etas.size(); ++e) {
      const Vector factors = penalty_factors(w, etas[e]);
      Vector beta = Vector::Zero(p);
      // Warm-started path from the largest lambda down.
      for (std::size_t li = lambdas.size(); li-- > 0;) {
        const Vector thresholds = lambdas[li] * factors;
        beta = descend(gram, xty, thresholds, std::move(beta), spec.max_iterations, spec.tol, nullptr);
        const double alpha = record.intercept_for(beta);
        double sse = 0.0;
        for (Eigen::Index row : val_rows) {
          const double pred = alpha + data.X.row(row).dot(beta);
          const double err = data.y[row] - pred;
          sse += err * err;
        }
        cv_error(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(li)) +=
            sse / static_cast<double>(val_rows.size());
      }
    }
  }
  cv_error /= static_cast<double>(spec.folds);

  // Stage 1: each eta scored at its own best lambda.
  std::size_t best_eta = 0;
  double best_eta_score = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < etas.size(); ++e) {
    const double score = cv_error.row(static_cast<Eigen::Index>(e)).minCoeff();
    if (score < best_eta_score) {
      best_eta_score = score;
      best_eta = e;
    }
  }
  // Stage 2: lambda along the chosen row; ties prefer the sparser (larger) lambda.
  std::size_t best_lambda = lambdas.size() - 1;
  for (std::size_t li = lambdas.size(); li-- > 0;) {
    if (cv_error(static_cast<Eigen::Index>(best_eta), static_cast<Eigen::Index>(li)) <
        cv_error(static_cast<Eigen::Index>(best_eta), static_cast<Eigen::Index>(best_lambda)))
      best_lambda = li;
  }

  auto [centered, record] = standardize(data);
  TwoStageCvResult result;
  result.eta = etas[best_eta];
  result.lambda = lambdas[best_lambda];
  result.beta = weighted_lasso_fit(centered, w, result.eta, result.lambda, spec.max_iterations,
                                   spec.tol, nullptr);
  result.intercept = record.intercept_for(result.beta);
  result.eta_grid = etas;
  result.lambda_grid = lambdas;
  result.cv_error = std::move(cv_error);
  return result;
}

TwoStageCvResult lasso_cv(const RegressionData& data, const LassoCvSpec& spec, RngSeed seed) {
  LassoCvSpec plain = spec;
  plain.eta_count = 1;
  plain.eta_min = 0.0;
  plain.eta_max = 0.0;
  return two_stage_cv(data, WeightVector::constant(data.p(), 1.0), plain, seed);
}

Vector selection_frequency(const std::vector<Vector>& fits) {
  if (fits.empty()) throw Error(ErrorCode::EmptyData, "no fits supplied");
  const Eigen::Index p = fits.front().size();
  Vector freq = Vector::Zero(p);
  for (const Vector& beta : fits) {
    if (beta.size() != p)
      throw Error(ErrorCode::DimensionMismatch, "fits have inconsistent lengths");
    for (Eigen::Index j = 0; j < p; ++j)
      if (beta[j] != 0.0) freq[j] += 1.0;
  }
  return freq / static_cast<double>(fits.size());
}

double max_kkt_violation(const RegressionData& centered, const WeightVector& w, double eta,
                         double lambda, const Vector& beta) {
  const Vector residual = centered.y - centered.X * beta;
  const Vector factors = penalty_factors(w, eta);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double gradient = -centered.X.col(j).dot(residual);
    if (beta[j] != 0.0) {
      worst = std::max(worst, std::abs(gradient + lambda * factors[j] * (beta[j] > 0 ? 1.0 : -1.0)));
    } else {
      worst = std::max(worst, std::abs(gradient) - lambda * factors[j]);
    }
  }
  return worst;
}

}  // namespace lsp
