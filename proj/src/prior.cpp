#include "lsp/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsp {

void LspConfig::validate() const {
  if (a_s <= 0.0 || b_s <= 0.0)
    throw Error(ErrorCode::ConfigError, "Beta shape parameters must be positive", "lsp.a_s");
  if (pi0 < 0.0 || pi0 > 1.0)
    throw Error(ErrorCode::ConfigError, "pi0 must lie in [0, 1]", "lsp.pi0");
  if (eta_grid.empty()) throw Error(ErrorCode::ConfigError, "eta grid is empty", "lsp.eta_grid");
  double prev = 0.0;
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!(eta_grid[i] > prev))
      throw Error(ErrorCode::ConfigError, "eta grid must be strictly positive and strictly increasing",
                  "lsp.eta_grid[" + std::to_string(i) + "]");
    prev = eta_grid[i];
  }
  if (fixed_s && !(*fixed_s > 0.0 && *fixed_s < 1.0))
    throw Error(ErrorCode::ConfigError, "fixed_s must lie in (0, 1)", "lsp.fixed_s");
  if (fixed_eta && *fixed_eta < 0.0)
    throw Error(ErrorCode::ConfigError, "fixed_eta must be nonnegative", "lsp.fixed_eta");
}

void LspConfig::finalize(std::size_t p, const WeightVector* w) {
  if (b_s <= 0.0) b_s = static_cast<double>(p);
  if (!eta_grid.empty()) return;
  if (w != nullptr && w->values.minCoeff() < w->values.maxCoeff()) {
    const EtaBound bound = eta_max(*w, s_reference());
    if (!bound.unbounded) {
      for (int k = 1; k <= 10; ++k) eta_grid.push_back(bound.value * static_cast<double>(k) / 10.0);
      return;
    }
  }
  for (int k = 1; k <= 10; ++k) eta_grid.push_back(static_cast<double>(k));
}

LspConfig LspConfig::defaults_for(std::size_t p, const WeightVector* w) {
  LspConfig config;
  config.finalize(p, w);
  return config;
}

ThetaVector compute_theta(const WeightVector& w, double s, double eta) {
  if (!(s > 0.0 && s < 1.0))
    throw Error(ErrorCode::OutOfRange, "s must lie in (0, 1); got " + std::to_string(s), "s");
  if (eta < 0.0)
    throw Error(ErrorCode::OutOfRange, "eta must be nonnegative; got " + std::to_string(eta), "eta");

  const auto p = static_cast<Eigen::Index>(w.size());
  // exp(eta * log w) shifted by the max exponent so large eta cannot overflow.
  Vector logs = w.values.array().log();
  const double shift = eta * logs.maxCoeff();
  Vector powers(p);
  for (Eigen::Index j = 0; j < p; ++j) powers[j] = std::exp(eta * logs[j] - shift);
  const double mean_power = powers.mean();

  ThetaVector theta{Vector(p)};
  for (Eigen::Index j = 0; j < p; ++j) {
    theta.values[j] = s * powers[j] / mean_power;
    if (theta.values[j] >= 1.0)
      throw Error(ErrorCode::ThetaOverflow,
                  "theta_" + std::to_string(j) + " = " + std::to_string(theta.values[j]) +
                      " >= 1; eta exceeds its valid bound for this (s, w)");
  }
  return theta;
}

double loose_eta_bound(const WeightVector& w, double s) {
  const double p = static_cast<double>(w.size());
  const double hi = w.values.maxCoeff();
  const double lo = w.values.minCoeff();
  if (s * p <= 1.0)
    throw Error(ErrorCode::OutOfRange, "loose bound requires s*p > 1");
  if (hi == lo) throw Error(ErrorCode::DegenerateWeights, "loose bound requires max(w) > min(w)");
  return std::log((p - 1.0) / (s * p - 1.0)) / std::log(hi / lo);
}

namespace {

// max_j theta_j at (w, s, eta), computed without the overflow guard.
double max_theta(const Vector& logs, double s, double eta) {
  const double shift = eta * logs.maxCoeff();
  double total = 0.0;
  for (Eigen::Index j = 0; j < logs.size(); ++j) total += std::exp(eta * logs[j] - shift);
  return s * static_cast<double>(logs.size()) / total;
}

}  // namespace

EtaBound eta_max(const WeightVector& w, double s, double tolerance) {
  if (!(s > 0.0 && s < 1.0))
    throw Error(ErrorCode::OutOfRange, "s must lie in (0, 1); got " + std::to_string(s), "s");
  const double p = static_cast<double>(w.size());
  const double hi = w.values.maxCoeff();

  // Multiplicity of the maximum weight: as eta grows, max theta approaches
  // s*p/m, so the constraint never binds when s*p <= m.
  std::size_t m = 0;
  for (Eigen::Index j = 0; j < w.values.size(); ++j)
    if (w.values[j] == hi) ++m;
  if (s * p <= static_cast<double>(m)) return EtaBound{true, 0.0};

  Vector logs = w.values.array().log();
  double lo_eta = 0.0;
  double hi_eta = 1.0;
  while (max_theta(logs, s, hi_eta) < 1.0) {
    lo_eta = hi_eta;
    hi_eta *= 2.0;
    if (hi_eta > 1e12)
      throw Error(ErrorCode::NumericalFailure, "eta_max bracketing failed to find the bound");
  }
  while (hi_eta - lo_eta > tolerance * std::max(1.0, hi_eta)) {
    const double mid = 0.5 * (lo_eta + hi_eta);
    (max_theta(logs, s, mid) < 1.0 ? lo_eta : hi_eta) = mid;
  }
  return EtaBound{false, 0.5 * (lo_eta + hi_eta)};
}

double log_prior_gamma(const InclusionVector& gamma, const ThetaVector& theta) {
  if (gamma.size() != static_cast<std::size_t>(theta.values.size()))
    throw Error(ErrorCode::DimensionMismatch,
                "gamma has length " + std::to_string(gamma.size()) + " but theta has length " +
                    std::to_string(theta.values.size()));
  double total = 0.0;
  for (Eigen::Index j = 0; j < theta.values.size(); ++j) {
    const double t = theta.values[j];
    total += gamma.flags[static_cast<std::size_t>(j)] ? std::log(t) : std::log1p(-t);
  }
  return total;
}

double log_hyperprior_eta(double eta, const LspConfig& config) {
  if (eta == 0.0)
    return config.pi0 > 0.0 ? std::log(config.pi0) : -std::numeric_limits<double>::infinity();
  for (double candidate : config.eta_grid) {
    if (eta == candidate || std::abs(eta - candidate) <= 1e-12 * std::max(1.0, candidate)) {
      if (config.pi0 >= 1.0) return -std::numeric_limits<double>::infinity();
      return std::log1p(-config.pi0) - std::log(static_cast<double>(config.eta_grid.size()));
    }
  }
  throw Error(ErrorCode::EtaNotOnGrid, "eta = " + std::to_string(eta) + " is neither 0 nor a grid member");
}

}  // namespace lsp
