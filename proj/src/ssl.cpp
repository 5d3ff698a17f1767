#include "lsp/ssl.hpp"

#include "lsp/standardize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

// log[theta*l1/2*exp(-l1|b|) + (1-theta)*l0/2*exp(-l0|b|)], stable in both tails.
double log_mixture_density(double beta, double theta, double lambda0, double lambda1) {
  const double slab = std::log(theta) + std::log(lambda1 / 2.0) - lambda1 * std::abs(beta);
  const double spike = std::log1p(-theta) + std::log(lambda0 / 2.0) - lambda0 * std::abs(beta);
  const double hi = std::max(slab, spike);
  return hi + std::log1p(std::exp(std::min(slab, spike) - hi));
}

double log_beta_pdf(double s, double a, double b) {
  const double log_beta_fn = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return (a - 1.0) * std::log(s) + (b - 1.0) * std::log1p(-s) - log_beta_fn;
}

// Shared state for one dataset: Gram matrix and X'y, reused across every
// descent in a path sweep.
struct GramWorkspace {
  Matrix gram;
  Vector xty;
  double yty = 0.0;
  Eigen::Index n = 0, p = 0;

  explicit GramWorkspace(const RegressionData& centered)
      : gram(centered.X.transpose() * centered.X),
        xty(centered.X.transpose() * centered.y),
        yty(centered.y.squaredNorm()),
        n(static_cast<Eigen::Index>(centered.n())),
        p(static_cast<Eigen::Index>(centered.p())) {}

  double rss(const Vector& beta, const Vector& q) const { return yty - beta.dot(xty + q); }
};

// Cyclic coordinate descent at fixed penalties. q = X'y - G beta is kept
// incrementally; updating one coordinate costs O(p) only when it moves.
Vector descend(const GramWorkspace& ws, const Vector& theta, const SslSpec& spec, double lambda0,
               Vector beta, bool* converged) {
  const double lambda1 = spec.lambda1;
  Vector q = ws.xty - ws.gram * beta;
  bool ok = false;
  double previous_objective = std::numeric_limits<double>::infinity();

  for (std::size_t cycle = 0; cycle < spec.max_iterations; ++cycle) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < ws.p; ++j) {
      const double gjj = ws.gram(j, j);
      if (gjj <= 0.0) continue;  // constant column: coefficient stays zero
      const double z = q[j] + gjj * beta[j];
      const double pstar = conditional_inclusion_prob(beta[j], theta[j], lambda0, lambda1);
      const double penalty = lambda1 * pstar + lambda0 * (1.0 - pstar);
      const double updated = soft_threshold(z, penalty) / gjj;
      const double change = updated - beta[j];
      if (change != 0.0) {
        q -= ws.gram.col(j) * change;
        beta[j] = updated;
        max_change = std::max(max_change, std::abs(change));
      }
    }
    if (spec.check_monotone) {
      double obj = 0.5 * ws.rss(beta, q);
      for (Eigen::Index j = 0; j < ws.p; ++j)
        obj -= log_mixture_density(beta[j], theta[j], lambda0, lambda1);
      if (obj > previous_objective + 1e-8 * std::max(1.0, std::abs(previous_objective)))
        throw Error(ErrorCode::NumericalFailure,
                    "penalized objective increased across a descent cycle");
      previous_objective = obj;
    }
    if (max_change < spec.tol) {
      ok = true;
      break;
    }
  }
  if (converged != nullptr) *converged = ok;
  return beta;
}

double log_joint_posterior(const GramWorkspace& ws, const Vector& beta, const Vector& q,
                           const Vector& theta, const SslSpec& spec, double lambda0, double eta,
                           double s) {
  double value = -0.5 * static_cast<double>(ws.n) * std::log(2.0 * std::numbers::pi) -
                 0.5 * ws.rss(beta, q);
  for (Eigen::Index j = 0; j < ws.p; ++j)
    value += log_mixture_density(beta[j], theta[j], lambda0, spec.lambda1);
  value += log_beta_pdf(s, spec.lsp.a_s, spec.lsp.b_s);
  value += log_hyperprior_eta(eta, spec.lsp);
  return value;
}

std::vector<double> lambda0_grid_for(const SslSpec& spec, Eigen::Index n) {
  if (!spec.lambda0_grid.empty()) {
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.lambda0_grid.size(); ++i) {
      if (!(spec.lambda0_grid[i] > prev))
        throw Error(ErrorCode::ConfigError, "lambda0 grid must be strictly increasing",
                    "ssl.lambda0_grid[" + std::to_string(i) + "]");
      prev = spec.lambda0_grid[i];
    }
    if (spec.lambda0_grid.front() < spec.lambda1)
      throw Error(ErrorCode::ConfigError, "lambda0 grid must start at or above lambda1",
                  "ssl.lambda0_grid[0]");
    return spec.lambda0_grid;
  }
  if (spec.grid_size < 2) throw Error(ErrorCode::ConfigError, "grid_size must be >= 2", "ssl.grid_size");
  std::vector<double> grid(spec.grid_size);
  const double hi = static_cast<double>(n);
  for (std::size_t i = 0; i < spec.grid_size; ++i)
    grid[i] = 1.0 + (hi - 1.0) * static_cast<double>(i) / static_cast<double>(spec.grid_size - 1);
  return grid;
}

}  // namespace

double conditional_inclusion_prob(double beta_j, double theta_j, double lambda0, double lambda1) {
  // 1 / (1 + ((1-theta) l0 / (theta l1)) exp(-(l0 - l1)|beta|)), in log space.
  const double log_odds = std::log1p(-theta_j) + std::log(lambda0) - std::log(theta_j) -
                          std::log(lambda1) - (lambda0 - lambda1) * std::abs(beta_j);
  if (log_odds > 500.0) return 0.0;
  if (log_odds < -500.0) return 1.0;
  return 1.0 / (1.0 + std::exp(log_odds));
}

Vector ssl_coordinate_descent(const RegressionData& centered, const WeightVector& w,
                              const SslSpec& spec, double lambda0, double eta, double s,
                              Vector warm_start, bool* converged) {
  validate_dimensions(centered, w);
  const ThetaVector theta = compute_theta(w, s, eta);
  GramWorkspace ws(centered);
  if (warm_start.size() == 0) warm_start = Vector::Zero(ws.p);
  return descend(ws, theta.values, spec, lambda0, std::move(warm_start), converged);
}

double ssl_objective(const RegressionData& centered, const Vector& theta, const SslSpec& spec,
                     double lambda0, const Vector& beta) {
  double obj = 0.5 * (centered.y - centered.X * beta).squaredNorm();
  for (Eigen::Index j = 0; j < theta.size(); ++j)
    obj -= log_mixture_density(beta[j], theta[j], lambda0, spec.lambda1);
  return obj;
}

EtaSelection select_eta_for_lambda0(const RegressionData& centered, const WeightVector& w,
                                    const SslSpec& spec, double lambda0,
                                    std::span<const double> candidates, const Vector& warm_start,
                                    double s) {
  GramWorkspace ws(centered);
  const Vector logw = w.values.array().log();

  EtaSelection best;
  best.log_joint = kNegInf;
  bool any = false;
  for (double eta : candidates) {
    if (log_hyperprior_eta(eta, spec.lsp) == kNegInf) continue;
    // Mean-one scaled weight powers; theta = s * what must stay below 1.
    const double shift = eta * logw.maxCoeff();
    Vector what(ws.p);
    for (Eigen::Index j = 0; j < ws.p; ++j) what[j] = std::exp(eta * logw[j] - shift);
    what /= what.mean();
    if (s * what.maxCoeff() >= 1.0) continue;
    const Vector theta = s * what;

    bool ok = true;
    Vector beta = descend(ws, theta, spec, lambda0, warm_start, &ok);
    Vector q = ws.xty - ws.gram * beta;
    const double lj = log_joint_posterior(ws, beta, q, theta, spec, lambda0, eta, s);
    if (!any || lj > best.log_joint) {
      best = EtaSelection{eta, std::move(beta), lj, ok};
      any = true;
    }
  }
  if (!any) {  // no admissible candidate: fall back to the uniform-theta baseline
    const Vector theta = Vector::Constant(ws.p, s);
    bool ok = true;
    Vector beta = descend(ws, theta, spec, lambda0, warm_start, &ok);
    Vector q = ws.xty - ws.gram * beta;
    const double lj = log_joint_posterior(ws, beta, q, theta, spec, lambda0, 0.0, s);
    best = EtaSelection{0.0, std::move(beta), lj, ok};
  }
  return best;
}

SslPath run_path(const RegressionData& data, const WeightVector* w, SslSpec spec, RngSeed /*seed*/) {
  const std::size_t p = data.p();
  WeightVector weights = (w != nullptr) ? *w : WeightVector::constant(p, 1.0);
  validate_dimensions(data, weights);
  if (w == nullptr) spec.lsp.fixed_eta = 0.0;
  spec.lsp.finalize(p, w != nullptr ? &weights : nullptr);
  spec.lsp.validate();

  auto [centered, record] = standardize(data);
  GramWorkspace ws(centered);
  const std::vector<double> grid = lambda0_grid_for(spec, ws.n);
  const Vector logw = weights.values.array().log();

  // Candidate etas with admissible hyperprior mass, plus their scaled powers.
  std::vector<double> cand_eta;
  std::vector<Vector> cand_what;
  auto push_candidate = [&](double eta) {
    const double shift = eta * logw.maxCoeff();
    Vector what(ws.p);
    for (Eigen::Index j = 0; j < ws.p; ++j) what[j] = std::exp(eta * logw[j] - shift);
    what /= what.mean();
    cand_eta.push_back(eta);
    cand_what.push_back(std::move(what));
  };
  if (spec.lsp.fixed_eta) {
    push_candidate(*spec.lsp.fixed_eta);
  } else {
    if (spec.lsp.pi0 > 0.0) push_candidate(0.0);
    if (spec.lsp.pi0 < 1.0)
      for (double eta : spec.lsp.eta_grid) push_candidate(eta);
  }
  if (cand_eta.empty()) push_candidate(0.0);

  std::vector<double> cand_hyper(cand_eta.size(), 0.0);
  if (!spec.lsp.fixed_eta)
    for (std::size_t c = 0; c < cand_eta.size(); ++c)
      cand_hyper[c] = log_hyperprior_eta(cand_eta[c], spec.lsp);

  double s = spec.lsp.fixed_s ? *spec.lsp.fixed_s : spec.lsp.s_reference();
  const bool update_s = spec.s_mode == SslSpec::SMode::Updated && !spec.lsp.fixed_s;

  SslPath path;
  Vector warm = Vector::Zero(ws.p);
  const double n_real = static_cast<double>(ws.n);
  const double log_beta_norm_a = spec.lsp.a_s, log_beta_norm_b = spec.lsp.b_s;

  for (double lambda0 : grid) {
    SslPoint point;
    double best_lj = kNegInf;
    bool any = false;
    for (std::size_t c = 0; c < cand_eta.size(); ++c) {
      if (s * cand_what[c].maxCoeff() >= 1.0) continue;
      const Vector theta = s * cand_what[c];
      bool ok = true;
      Vector beta = descend(ws, theta, spec, lambda0, warm, &ok);
      Vector q = ws.xty - ws.gram * beta;
      double lj = -0.5 * n_real * std::log(2.0 * std::numbers::pi) - 0.5 * ws.rss(beta, q) +
                  log_beta_pdf(s, log_beta_norm_a, log_beta_norm_b) + cand_hyper[c];
      for (Eigen::Index j = 0; j < ws.p; ++j)
        lj += log_mixture_density(beta[j], theta[j], lambda0, spec.lambda1);
      if (!any || lj > best_lj) {
        best_lj = lj;
        point.beta = std::move(beta);
        point.eta = cand_eta[c];
        point.converged = ok;
        any = true;
      }
    }
    if (!any)
      throw Error(ErrorCode::ThetaOverflow, "no admissible eta candidate at lambda0 = " +
                                                std::to_string(lambda0));
    point.s = s;
    for (Eigen::Index j = 0; j < ws.p; ++j)
      if (point.beta[j] != 0.0) point.support.push_back(j);
    const double rss = (centered.y - centered.X * point.beta).squaredNorm();
    const double df = static_cast<double>(point.support.size());
    point.bic = n_real * std::log(std::max(rss, 1e-300) / n_real) + df * std::log(n_real);

    warm = point.beta;
    if (update_s)
      s = (spec.lsp.a_s + df) / (spec.lsp.a_s + spec.lsp.b_s + static_cast<double>(ws.p));
    path.points.push_back(std::move(point));
  }

  path.chosen_index = 0;
  for (std::size_t i = 1; i < path.points.size(); ++i)
    if (path.points[i].bic < path.points[path.chosen_index].bic) path.chosen_index = i;
  path.intercept = record.intercept_for(path.points[path.chosen_index].beta);
  return path;
}

}  // namespace lsp
