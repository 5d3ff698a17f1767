#include "lsp/spike_slab.hpp"

#include "lsp/standardize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lsp {

namespace {

constexpr double kAddWeight = 0.4;
constexpr double kDeleteWeight = 0.4;
constexpr double kSwapWeight = 0.2;
constexpr double kLogitStep = 1.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// In-place lower Cholesky of the leading k x k block; A's lower triangle is
// overwritten by L. Returns log|A|.
double cholesky_in_place(Matrix& A, Eigen::Index k) {
  double log_det = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    double d = A(j, j);
    for (Eigen::Index l = 0; l < j; ++l) d -= A(j, l) * A(j, l);
    if (d <= 0.0)
      throw Error(ErrorCode::NumericalFailure, "regularized Gram factorization lost positivity");
    const double root = std::sqrt(d);
    A(j, j) = root;
    log_det += 2.0 * std::log(root);
    for (Eigen::Index i = j + 1; i < k; ++i) {
      double v = A(i, j);
      for (Eigen::Index l = 0; l < j; ++l) v -= A(i, l) * A(j, l);
      A(i, j) = v / root;
    }
  }
  return log_det;
}

void forward_solve(const Matrix& L, Vector& b, Eigen::Index k) {
  for (Eigen::Index i = 0; i < k; ++i) {
    double v = b[i];
    for (Eigen::Index l = 0; l < i; ++l) v -= L(i, l) * b[l];
    b[i] = v / L(i, i);
  }
}

void backward_solve(const Matrix& L, Vector& b, Eigen::Index k) {
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    double v = b[i];
    for (Eigen::Index l = i + 1; l < k; ++l) v -= L(l, i) * b[l];
    b[i] = v / L(i, i);
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double log_marginal_likelihood(const RegressionData& centered, const InclusionVector& gamma,
                               const SsModelSpec& spec) {
  const auto n = static_cast<Eigen::Index>(centered.n());
  const auto p = static_cast<Eigen::Index>(centered.p());
  if (gamma.size() != static_cast<std::size_t>(p))
    throw Error(ErrorCode::DimensionMismatch, "gamma length does not match design columns");

  const double a = spec.a_sigma, b = spec.b_sigma;
  const double c0 = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) +
                    a * std::log(b) - std::lgamma(a) + std::lgamma(a + 0.5 * static_cast<double>(n));
  const double yty = centered.y.squaredNorm();

  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < p; ++j)
    if (gamma.flags[static_cast<std::size_t>(j)]) active.push_back(j);
  const auto k = static_cast<Eigen::Index>(active.size());
  if (k == 0) return c0 - (a + 0.5 * static_cast<double>(n)) * std::log(b + 0.5 * yty);

  Matrix A(k, k);
  Vector u(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    u[i] = centered.X.col(active[static_cast<std::size_t>(i)]).dot(centered.y);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = centered.X.col(active[static_cast<std::size_t>(i)])
                           .dot(centered.X.col(active[static_cast<std::size_t>(j)]));
      A(i, j) = v + (i == j ? 1.0 / spec.tau : 0.0);
    }
  }
  const double log_det = cholesky_in_place(A, k);
  forward_solve(A, u, k);
  const double S = std::max(0.0, yty - u.squaredNorm());
  return c0 - 0.5 * static_cast<double>(k) * std::log(spec.tau) - 0.5 * log_det -
         (a + 0.5 * static_cast<double>(n)) * std::log(b + 0.5 * S);
}

SpikeSlabSampler::SpikeSlabSampler(const RegressionData& centered, const WeightVector& w,
                                   const SsModelSpec& spec, RngSeed seed)
    : spec_(spec), rng_(seed) {
  validate_dimensions(centered, w);
  spec_.lsp.validate();
  n_ = static_cast<Eigen::Index>(centered.n());
  p_ = static_cast<Eigen::Index>(centered.p());

  gram_ = centered.X.transpose() * centered.X;
  xty_ = centered.X.transpose() * centered.y;
  yty_ = centered.y.squaredNorm();
  const double a = spec_.a_sigma, b = spec_.b_sigma;
  const_term_ = -0.5 * static_cast<double>(n_) * std::log(2.0 * std::numbers::pi) + a * std::log(b) -
                std::lgamma(a) + std::lgamma(a + 0.5 * static_cast<double>(n_));

  // Candidate eta values and their scaled weight powers.
  if (spec_.lsp.fixed_eta) {
    eta_values_ = {*spec_.lsp.fixed_eta};
    eta_pinned_ = true;
  } else {
    eta_values_.push_back(0.0);
    for (double e : spec_.lsp.eta_grid) eta_values_.push_back(e);
    eta_pinned_ = spec_.lsp.pi0 >= 1.0;
  }
  const Vector logw = w.values.array().log();
  for (double eta : eta_values_) {
    const double shift = eta * logw.maxCoeff();
    Vector powers(p_);
    for (Eigen::Index j = 0; j < p_; ++j) powers[j] = std::exp(eta * logw[j] - shift);
    powers /= powers.mean();
    log_what_.push_back(powers.array().log());
    max_what_.push_back(powers.maxCoeff());
    what_.push_back(std::move(powers));
    if (spec_.lsp.fixed_eta) {
      eta_log_hyper_.push_back(0.0);
    } else if (eta == 0.0) {
      eta_log_hyper_.push_back(spec_.lsp.pi0 > 0.0 ? std::log(spec_.lsp.pi0) : kNegInf);
    } else {
      eta_log_hyper_.push_back(spec_.lsp.pi0 < 1.0
                                   ? std::log1p(-spec_.lsp.pi0) -
                                         std::log(static_cast<double>(spec_.lsp.eta_grid.size()))
                                   : kNegInf);
    }
  }

  s_ = spec_.lsp.fixed_s ? *spec_.lsp.fixed_s : spec_.lsp.s_reference();
  eta_index_ = 0;

  // Initial model: the top-k features by weight, k = max(1, round(p * prior
  // mean of s)). When eta is pinned to zero the prior cannot see the weights,
  // so the initializer ignores them too (ties by index); this keeps a pinned
  // run exactly identical to the uninformative baseline.
  const auto k0 = static_cast<std::size_t>(std::max<long long>(
      1, std::llround(static_cast<double>(p_) * spec_.lsp.s_reference())));
  const bool eta_zero_forever = eta_pinned_ && eta_values_[0] == 0.0;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p_));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  if (!eta_zero_forever) {
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index lhs, Eigen::Index rhs) { return w.values[lhs] > w.values[rhs]; });
  }
  gamma_.assign(static_cast<std::size_t>(p_), 0);
  for (std::size_t i = 0; i < std::min(k0, static_cast<std::size_t>(p_)); ++i) {
    gamma_[static_cast<std::size_t>(order[i])] = 1;
    active_.push_back(order[i]);
  }
  std::sort(active_.begin(), active_.end());

  if (s_ * max_what_[eta_index_] >= 1.0)
    throw Error(ErrorCode::ThetaOverflow, "initial (s, eta) makes some theta_j >= 1");

  scratch_.resize(p_, p_);
  scratch_u_.resize(p_);
  log_marginal_ = marginal_of(active_);
}

double SpikeSlabSampler::marginal_of(const std::vector<Eigen::Index>& active) const {
  const auto k = static_cast<Eigen::Index>(active.size());
  const double a = spec_.a_sigma, b = spec_.b_sigma;
  if (k == 0) return const_term_ - (a + 0.5 * static_cast<double>(n_)) * std::log(b + 0.5 * yty_);

  for (Eigen::Index i = 0; i < k; ++i) {
    scratch_u_[i] = xty_[active[static_cast<std::size_t>(i)]];
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = gram_(active[static_cast<std::size_t>(i)], active[static_cast<std::size_t>(j)]);
      scratch_(i, j) = v + (i == j ? 1.0 / spec_.tau : 0.0);
    }
  }
  const double log_det = cholesky_in_place(scratch_, k);
  forward_solve(scratch_, scratch_u_, k);
  double unorm = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) unorm += scratch_u_[i] * scratch_u_[i];
  const double S = std::max(0.0, yty_ - unorm);
  return const_term_ - 0.5 * static_cast<double>(k) * std::log(spec_.tau) - 0.5 * log_det -
         (a + 0.5 * static_cast<double>(n_)) * std::log(b + 0.5 * S);
}

double SpikeSlabSampler::recompute_log_marginal() const { return marginal_of(active_); }

double SpikeSlabSampler::logit_theta(Eigen::Index j) const {
  const double theta = s_ * what_[eta_index_][j];
  return std::log(theta) - std::log1p(-theta);
}

void SpikeSlabSampler::move_probabilities(std::size_t k, double* add, double* del, double* swap) const {
  const auto p = static_cast<std::size_t>(p_);
  double wa = (k < p) ? kAddWeight : 0.0;
  double wd = (k > 0) ? kDeleteWeight : 0.0;
  double ws = (k > 0 && k < p) ? kSwapWeight : 0.0;
  const double total = wa + wd + ws;
  *add = wa / total;
  *del = wd / total;
  *swap = ws / total;
}

void SpikeSlabSampler::ads_step() {
  const auto p = static_cast<std::size_t>(p_);
  const std::size_t k = active_.size();
  double p_add = 0.0, p_del = 0.0, p_swap = 0.0;
  move_probabilities(k, &p_add, &p_del, &p_swap);

  const double u = rng_.uniform();
  enum class Move { Add, Delete, Swap } move;
  if (u < p_add)
    move = Move::Add;
  else if (u < p_add + p_del)
    move = Move::Delete;
  else
    move = Move::Swap;

  // Uniform draw over the currently excluded features (r-th zero of gamma).
  auto pick_zero = [&]() {
    std::size_t r = static_cast<std::size_t>(rng_.below(p - k));
    for (std::size_t j = 0;; ++j) {
      if (!gamma_[j]) {
        if (r == 0) return static_cast<Eigen::Index>(j);
        --r;
      }
    }
  };

  std::vector<Eigen::Index> proposed = active_;
  double log_prior_delta = 0.0, log_hastings = 0.0;
  Eigen::Index add_j = -1, del_j = -1;

  if (move == Move::Add) {
    add_j = pick_zero();
    proposed.insert(std::lower_bound(proposed.begin(), proposed.end(), add_j), add_j);
    log_prior_delta = logit_theta(add_j);
    double ra = 0.0, rd = 0.0, rs = 0.0;
    move_probabilities(k + 1, &ra, &rd, &rs);
    log_hastings = std::log(rd) - std::log(static_cast<double>(k + 1)) -
                   (std::log(p_add) - std::log(static_cast<double>(p - k)));
  } else if (move == Move::Delete) {
    del_j = active_[static_cast<std::size_t>(rng_.below(k))];
    proposed.erase(std::find(proposed.begin(), proposed.end(), del_j));
    log_prior_delta = -logit_theta(del_j);
    double ra = 0.0, rd = 0.0, rs = 0.0;
    move_probabilities(k - 1, &ra, &rd, &rs);
    log_hastings = std::log(ra) - std::log(static_cast<double>(p - k + 1)) -
                   (std::log(p_del) - std::log(static_cast<double>(k)));
  } else {
    del_j = active_[static_cast<std::size_t>(rng_.below(k))];
    add_j = pick_zero();
    proposed.erase(std::find(proposed.begin(), proposed.end(), del_j));
    proposed.insert(std::lower_bound(proposed.begin(), proposed.end(), add_j), add_j);
    log_prior_delta = logit_theta(add_j) - logit_theta(del_j);
    // Swap keeps |gamma| fixed, so the proposal is symmetric.
  }

  const double proposed_lm = marginal_of(proposed);
  const double log_alpha = proposed_lm - log_marginal_ + log_prior_delta + log_hastings;
  if (log_alpha >= 0.0 || std::log(rng_.uniform_pos()) <= log_alpha) {
    if (add_j >= 0) gamma_[static_cast<std::size_t>(add_j)] = 1;
    if (del_j >= 0) gamma_[static_cast<std::size_t>(del_j)] = 0;
    active_ = std::move(proposed);
    log_marginal_ = proposed_lm;
    beta_cache_valid_ = false;
  }
}

double SpikeSlabSampler::log_gamma_given(double s, std::size_t eta_index) const {
  const std::size_t k = active_.size();
  if (eta_values_[eta_index] == 0.0) {
    return static_cast<double>(k) * std::log(s) +
           static_cast<double>(static_cast<std::size_t>(p_) - k) * std::log1p(-s);
  }
  const Vector& what = what_[eta_index];
  const Vector& log_what = log_what_[eta_index];
  double total = 0.0;
  for (Eigen::Index j = 0; j < p_; ++j) total += std::log1p(-s * what[j]);
  const double log_s = std::log(s);
  for (Eigen::Index j : active_) total += log_s + log_what[j] - std::log1p(-s * what[j]);
  return total;
}

void SpikeSlabSampler::update_eta() {
  if (spec_.lsp.fixed_eta) return;
  if (spec_.lsp.pi0 >= 1.0) {  // all mass at zero; no randomness to consume
    eta_index_ = 0;
    return;
  }

  const std::size_t count = eta_values_.size();
  std::vector<double> logw(count, kNegInf);
  double best = kNegInf;
  for (std::size_t c = 0; c < count; ++c) {
    if (eta_log_hyper_[c] == kNegInf) continue;
    if (s_ * max_what_[c] >= 1.0) continue;  // theta would leave (0,1): zero mass
    logw[c] = eta_log_hyper_[c] + log_gamma_given(s_, c);
    best = std::max(best, logw[c]);
  }
  if (best == kNegInf) {  // no admissible candidate; fall back to the baseline
    eta_index_ = 0;
    return;
  }
  double total = 0.0;
  for (std::size_t c = 0; c < count; ++c)
    if (logw[c] != kNegInf) total += std::exp(logw[c] - best);
  double target = rng_.uniform() * total;
  for (std::size_t c = 0; c < count; ++c) {
    if (logw[c] == kNegInf) continue;
    target -= std::exp(logw[c] - best);
    if (target <= 0.0) {
      eta_index_ = c;
      return;
    }
  }
  eta_index_ = count - 1;
}

void SpikeSlabSampler::update_s() {
  if (spec_.lsp.fixed_s) return;
  const double logit_s = std::log(s_) - std::log1p(-s_);
  const double proposal_logit = logit_s + kLogitStep * rng_.normal();
  const double proposal = sigmoid(proposal_logit);
  if (proposal <= 0.0 || proposal >= 1.0) return;
  if (proposal * max_what_[eta_index_] >= 1.0) return;  // hard theta constraint

  // Beta(a_s, b_s) prior plus the logit-transform Jacobian collapses to
  // a_s log s + b_s log(1 - s) up to a constant.
  const double log_target_new = spec_.lsp.a_s * std::log(proposal) +
                                spec_.lsp.b_s * std::log1p(-proposal) +
                                log_gamma_given(proposal, eta_index_);
  const double log_target_old =
      spec_.lsp.a_s * std::log(s_) + spec_.lsp.b_s * std::log1p(-s_) + log_gamma_given(s_, eta_index_);
  const double log_alpha = log_target_new - log_target_old;
  if (log_alpha >= 0.0 || std::log(rng_.uniform_pos()) <= log_alpha) s_ = proposal;
}

ChainState SpikeSlabSampler::state() const {
  ChainState st;
  st.gamma = InclusionVector{gamma_};
  st.s = s_;
  st.eta = eta_values_[eta_index_];
  st.log_marginal = log_marginal_;
  return st;
}

Vector SpikeSlabSampler::conditional_beta_mean() {
  if (beta_cache_valid_) return beta_cache_;
  const auto k = static_cast<Eigen::Index>(active_.size());
  Vector beta = Vector::Zero(p_);
  if (k > 0) {
    for (Eigen::Index i = 0; i < k; ++i) {
      scratch_u_[i] = xty_[active_[static_cast<std::size_t>(i)]];
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double v =
            gram_(active_[static_cast<std::size_t>(i)], active_[static_cast<std::size_t>(j)]);
        scratch_(i, j) = v + (i == j ? 1.0 / spec_.tau : 0.0);
      }
    }
    cholesky_in_place(scratch_, k);
    forward_solve(scratch_, scratch_u_, k);
    backward_solve(scratch_, scratch_u_, k);
    for (Eigen::Index i = 0; i < k; ++i) beta[active_[static_cast<std::size_t>(i)]] = scratch_u_[i];
  }
  beta_cache_ = std::move(beta);
  beta_cache_valid_ = true;
  return beta_cache_;
}

PosteriorSummary run_chain(const RegressionData& data, const WeightVector* w, SsModelSpec spec,
                           std::size_t n_samples, std::size_t burn_in, RngSeed seed) {
  if (n_samples == 0 || n_samples <= burn_in)
    throw Error(ErrorCode::InvalidBudget, "n_samples must exceed burn_in");
  const std::size_t p = data.p();
  WeightVector weights = (w != nullptr) ? *w : WeightVector::constant(p, 1.0);
  validate_dimensions(data, weights);
  if (w == nullptr) spec.lsp.fixed_eta = 0.0;  // uninformative baseline
  spec.lsp.finalize(p, w != nullptr ? &weights : nullptr);

  auto [centered, record] = standardize(data);
  SpikeSlabSampler sampler(centered, weights, spec, seed);

  const std::size_t retained = n_samples - burn_in;
  Vector mip = Vector::Zero(static_cast<Eigen::Index>(p));
  Vector bma = Vector::Zero(static_cast<Eigen::Index>(p));
  PosteriorSummary summary;
  summary.s_trace.reserve(retained);
  summary.eta_trace.reserve(retained);

  for (std::size_t iter = 0; iter < n_samples; ++iter) {
    sampler.iterate();
    if (iter < burn_in) continue;
    const ChainState st = sampler.state();
    for (std::size_t j = 0; j < p; ++j) mip[static_cast<Eigen::Index>(j)] += st.gamma.flags[j];
    bma += sampler.conditional_beta_mean();
    summary.s_trace.push_back(st.s);
    summary.eta_trace.push_back(st.eta);
  }

  mip /= static_cast<double>(retained);
  bma /= static_cast<double>(retained);
  std::vector<std::uint8_t> mpm(p, 0);
  for (std::size_t j = 0; j < p; ++j) mpm[j] = mip[static_cast<Eigen::Index>(j)] > 0.5 ? 1 : 0;

  summary.mip = std::move(mip);
  summary.bma_beta = std::move(bma);
  summary.mpm = InclusionVector{std::move(mpm)};
  summary.n_samples = n_samples;
  summary.burn_in = burn_in;
  summary.intercept = record.intercept_for(summary.bma_beta);
  return summary;
}

}  // namespace lsp
