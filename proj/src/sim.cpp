#include "lsp/sim.hpp"

#include "lsp/weight_metrics.hpp"
#include "lsp/weight_synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

namespace lsp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream-id tags for deriving independent substreams per cell.
enum StreamTag : std::uint64_t { kDgpStream = 1, kWeightStream = 2, kFitStream = 3 };

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_over(std::size_t n_items, std::size_t threads, const std::function<void(std::size_t)>& work) {
  threads = std::min(resolve_threads(threads), std::max<std::size_t>(n_items, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n_items; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_items) return;
        try {
          work(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double mean_of(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double se_of(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

// Result of one method fit, normalized across method families.
struct FitOutput {
  Vector beta;
  InclusionVector support;
  Vector inclusion_values;  // MIPs for MCMC methods, 0/1 indicators otherwise
  double chosen_eta = kNaN;
  double chosen_lambda = kNaN;
};

FitOutput fit_method(Method method, const RegressionData& data, const WeightVector* w,
                     const MethodSettings& settings, RngSeed seed) {
  FitOutput out;
  const std::size_t p = data.p();
  switch (method) {
    case Method::LspSs:
    case Method::Ss: {
      const WeightVector* used = method == Method::LspSs ? w : nullptr;
      PosteriorSummary summary = run_chain(data, used, settings.ss_spec(), settings.mcmc_samples,
                                           settings.mcmc_burn_in, seed);
      out.beta = summary.bma_beta;
      out.support = summary.mpm;
      out.inclusion_values = summary.mip;
      if (!summary.eta_trace.empty()) out.chosen_eta = mean_of(summary.eta_trace);
      break;
    }
    case Method::LspSsl:
    case Method::Ssl: {
      const WeightVector* used = method == Method::LspSsl ? w : nullptr;
      SslPath path = run_path(data, used, settings.ssl_spec(), seed);
      const SslPoint& point = path.points[path.chosen_index];
      out.beta = point.beta;
      std::vector<std::uint8_t> flags(p, 0);
      Vector indicator = Vector::Zero(static_cast<Eigen::Index>(p));
      for (Eigen::Index j : point.support) {
        flags[static_cast<std::size_t>(j)] = 1;
        indicator[j] = 1.0;
      }
      out.support = InclusionVector{std::move(flags)};
      out.inclusion_values = std::move(indicator);
      out.chosen_eta = point.eta;
      out.chosen_lambda = 0.0;
      {
        // report the BIC-chosen lambda0
        SslSpec spec = settings.ssl_spec();
        std::vector<double> grid = spec.lambda0_grid;
        if (grid.empty()) {
          const double hi = static_cast<double>(data.n());
          for (std::size_t i = 0; i < spec.grid_size; ++i)
            grid.push_back(1.0 + (hi - 1.0) * static_cast<double>(i) /
                                     static_cast<double>(spec.grid_size - 1));
        }
        out.chosen_lambda = grid[path.chosen_index];
      }
      break;
    }
    case Method::LlmLasso:
    case Method::Lasso: {
      TwoStageCvResult cv = method == Method::LlmLasso
                                ? two_stage_cv(data, *w, settings.lasso_cv, seed)
                                : lasso_cv(data, settings.lasso_cv, seed);
      out.beta = cv.beta;
      std::vector<std::uint8_t> flags(p, 0);
      Vector indicator = Vector::Zero(static_cast<Eigen::Index>(p));
      for (Eigen::Index j = 0; j < cv.beta.size(); ++j) {
        if (cv.beta[j] != 0.0) {
          flags[static_cast<std::size_t>(j)] = 1;
          indicator[j] = 1.0;
        }
      }
      out.support = InclusionVector{std::move(flags)};
      out.inclusion_values = std::move(indicator);
      out.chosen_eta = cv.eta;
      out.chosen_lambda = cv.lambda;
      break;
    }
  }
  return out;
}

}  // namespace

void DgpSpec::validate() const {
  if (n < 2) throw Error(ErrorCode::ConfigError, "need n >= 2", "dgp.n");
  if (p == 0) throw Error(ErrorCode::ConfigError, "need p >= 1", "dgp.p");
  if (n_active > p) throw Error(ErrorCode::ConfigError, "n_active cannot exceed p", "dgp.n_active");
  if (rho < 0.0 || rho >= 1.0)
    throw Error(ErrorCode::ConfigError, "equicorrelation must lie in [0, 1)", "dgp.rho");
  if (noise_variance <= 0.0)
    throw Error(ErrorCode::ConfigError, "noise variance must be positive", "dgp.noise_variance");
}

DgpDraw generate_dgp(const DgpSpec& spec, RngSeed seed) {
  spec.validate();
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto p = static_cast<Eigen::Index>(spec.p);

  const double factor_load = std::sqrt(spec.rho);
  const double noise_load = std::sqrt(1.0 - spec.rho);
  Matrix X(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = rng.normal();
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = factor_load * z + noise_load * rng.normal();
  }

  std::vector<std::size_t> perm = rng.permutation(spec.p);
  std::vector<std::uint8_t> flags(spec.p, 0);
  Vector beta_star = Vector::Zero(p);
  for (std::size_t i = 0; i < spec.n_active; ++i) {
    flags[perm[i]] = 1;
    beta_star[static_cast<Eigen::Index>(perm[i])] = spec.coefficient;
  }

  const double noise_sd = std::sqrt(spec.noise_variance);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y[i] = X.row(i).dot(beta_star) + spec.intercept + noise_sd * rng.normal();

  return DgpDraw{RegressionData{std::move(y), std::move(X), {}}, InclusionVector{std::move(flags)},
                 std::move(beta_star)};
}

EvalMetrics evaluate_fit(const Vector& beta_hat, const InclusionVector& support_hat,
                         const InclusionVector& gamma_star, const Vector& beta_star) {
  const std::size_t p = gamma_star.size();
  if (support_hat.size() != p || static_cast<std::size_t>(beta_hat.size()) != p ||
      static_cast<std::size_t>(beta_star.size()) != p)
    throw Error(ErrorCode::DimensionMismatch, "evaluation inputs differ in length");

  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t j = 0; j < p; ++j) {
    const bool truth = gamma_star.flags[j] != 0;
    const bool picked = support_hat.flags[j] != 0;
    tp += (truth && picked) ? 1 : 0;
    fp += (!truth && picked) ? 1 : 0;
    fn += (truth && !picked) ? 1 : 0;
  }
  EvalMetrics metrics;
  const std::size_t denom = 2 * tp + fp + fn;
  metrics.f1 = denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  metrics.l1_error = (beta_hat - beta_star).lpNorm<1>();
  return metrics;
}

const char* method_name(Method method) {
  switch (method) {
    case Method::LspSs: return "lsp-ss";
    case Method::Ss: return "ss";
    case Method::LspSsl: return "lsp-ssl";
    case Method::Ssl: return "ssl";
    case Method::LlmLasso: return "llm-lasso";
    case Method::Lasso: return "lasso";
  }
  return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
  for (Method m : {Method::LspSs, Method::Ss, Method::LspSsl, Method::Ssl, Method::LlmLasso,
                   Method::Lasso})
    if (name == method_name(m)) return m;
  return std::nullopt;
}

bool method_uses_weights(Method method) {
  return method == Method::LspSs || method == Method::LspSsl || method == Method::LlmLasso;
}

SsModelSpec MethodSettings::ss_spec() const {
  SsModelSpec spec;
  spec.tau = tau;
  spec.a_sigma = a_sigma;
  spec.b_sigma = b_sigma;
  spec.lsp.pi0 = pi0;
  return spec;
}

SslSpec MethodSettings::ssl_spec() const {
  SslSpec spec;
  spec.lambda1 = ssl_lambda1;
  spec.grid_size = ssl_grid_size;
  spec.s_mode = ssl_s_mode;
  spec.lsp.pi0 = pi0;
  return spec;
}

std::vector<EvalRecord> run_sweep(const SweepConfig& config) {
  config.dgp.validate();
  if (config.replications == 0)
    throw Error(ErrorCode::ConfigError, "need at least one replication", "replications");
  if (config.methods.empty())
    throw Error(ErrorCode::ConfigError, "no methods requested", "methods");
  const std::vector<double> phis = config.phi_grid.empty() ? default_phi_grid() : config.phi_grid;

  const std::size_t cells_per_rep = phis.size() * config.methods.size();
  std::vector<EvalRecord> records(config.replications * cells_per_rep);
  const RngSeed root{config.seed, 0};

  parallel_over(config.replications, config.threads, [&](std::size_t rep) {
    const DgpDraw draw = generate_dgp(config.dgp, root.derive({kDgpStream, rep}));

    // Weight-blind baselines see the same data at every phi: fit once.
    std::map<Method, FitOutput> baseline_fits;
    std::map<Method, std::string> baseline_errors;
    for (Method method : config.methods) {
      if (method_uses_weights(method)) continue;
      try {
        baseline_fits[method] = fit_method(method, draw.data, nullptr, config.settings,
                                           root.derive({kFitStream, static_cast<std::uint64_t>(method), rep}));
      } catch (const std::exception& e) {
        baseline_errors[method] = e.what();
      }
    }

    for (std::size_t pi = 0; pi < phis.size(); ++pi) {
      WeightVector weights = generate_weights(draw.gamma_star, phis[pi],
                                              root.derive({kWeightStream, rep, pi}));
      const double realized = phi_l1(draw.gamma_star, weights).value;

      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        const Method method = config.methods[mi];
        EvalRecord& record = records[rep * cells_per_rep + pi * config.methods.size() + mi];
        record.method = method;
        record.phi_target = phis[pi];
        record.phi_realized = realized;
        record.replication = rep;
        record.seed = config.seed;
        try {
          const FitOutput* fit = nullptr;
          FitOutput fresh;
          if (method_uses_weights(method)) {
            fresh = fit_method(method, draw.data, &weights, config.settings,
                               root.derive({kFitStream, static_cast<std::uint64_t>(method), rep, pi}));
            fit = &fresh;
          } else {
            if (auto it = baseline_errors.find(method); it != baseline_errors.end())
              throw Error(ErrorCode::NumericalFailure, it->second);
            fit = &baseline_fits.at(method);
          }
          const EvalMetrics metrics = evaluate_fit(fit->beta, fit->support, draw.gamma_star,
                                                   draw.beta_star);
          record.f1 = metrics.f1;
          record.l1_error = metrics.l1_error;
          record.chosen_eta = fit->chosen_eta;
          record.chosen_lambda = fit->chosen_lambda;
        } catch (const std::exception& e) {
          record.failed = true;
          record.error = e.what();
          record.f1 = kNaN;
          record.l1_error = kNaN;
        }
      }
    }
  });

  return records;
}

std::vector<SummaryRow> summarize_records(const std::vector<EvalRecord>& records) {
  std::map<std::pair<int, double>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const EvalRecord& record : records) {
    if (record.failed) continue;
    auto& bucket = groups[{static_cast<int>(record.method), record.phi_target}];
    bucket.first.push_back(record.f1);
    bucket.second.push_back(record.l1_error);
  }
  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, values] : groups) {
    SummaryRow row;
    row.method = static_cast<Method>(key.first);
    row.phi = key.second;
    row.count = values.first.size();
    row.f1_mean = mean_of(values.first);
    row.f1_se = se_of(values.first, row.f1_mean);
    row.l1_mean = mean_of(values.second);
    row.l1_se = se_of(values.second, row.l1_mean);
    rows.push_back(row);
  }
  return rows;
}

void MipGroupAccumulator::add(const Vector& inclusion, const WeightVector& w,
                              const InclusionVector& gamma_star) {
  const std::size_t p = gamma_star.size();
  if (w.size() != p || static_cast<std::size_t>(inclusion.size()) != p)
    throw Error(ErrorCode::DimensionMismatch, "grouped-table inputs differ in length");
  for (std::size_t j = 0; j < p; ++j) {
    const long long key = std::llround(w.values[static_cast<Eigen::Index>(j)]);
    const int truth = gamma_star.flags[j] ? 1 : 0;
    sums_[key][truth] += inclusion[static_cast<Eigen::Index>(j)];
    counts_[key][truth] += 1;
  }
}

GroupTable MipGroupAccumulator::table() const {
  GroupTable table;
  for (const auto& [key, sums] : sums_) {
    const auto& counts = counts_.at(key);
    table.weight_values.push_back(key);
    table.cell_mean.push_back({counts[0] ? sums[0] / static_cast<double>(counts[0]) : kNaN,
                               counts[1] ? sums[1] / static_cast<double>(counts[1]) : kNaN});
    table.cell_count.push_back({counts[0], counts[1]});
  }
  return table;
}

GroupTable mip_by_group(const Vector& inclusion, const WeightVector& w,
                        const InclusionVector& gamma_star) {
  MipGroupAccumulator acc;
  acc.add(inclusion, w, gamma_star);
  return acc.table();
}

std::map<Method, GroupTable> run_mip_study(const MipStudyConfig& config) {
  config.dgp.validate();
  if (config.replications == 0)
    throw Error(ErrorCode::ConfigError, "need at least one replication", "replications");
  const RngSeed root{config.seed, 0};

  struct RepResult {
    WeightVector weights;
    InclusionVector gamma_star;
    std::map<Method, Vector> inclusion;
  };
  std::vector<RepResult> results(config.replications);

  parallel_over(config.replications, config.threads, [&](std::size_t rep) {
    const DgpDraw draw = generate_dgp(config.dgp, root.derive({kDgpStream, rep}));
    WeightVector weights = generate_weights(draw.gamma_star, config.phi,
                                            root.derive({kWeightStream, rep}));
    RepResult& result = results[rep];
    for (Method method : config.methods) {
      const WeightVector* used = method_uses_weights(method) ? &weights : nullptr;
      const FitOutput fit =
          fit_method(method, draw.data, used, config.settings,
                     root.derive({kFitStream, static_cast<std::uint64_t>(method), rep}));
      result.inclusion[method] = fit.inclusion_values;
    }
    result.weights = std::move(weights);
    result.gamma_star = draw.gamma_star;
  });

  std::map<Method, GroupTable> tables;
  for (Method method : config.methods) {
    MipGroupAccumulator acc;
    for (const RepResult& result : results)
      acc.add(result.inclusion.at(method), result.weights, result.gamma_star);
    tables[method] = acc.table();
  }
  return tables;
}

std::vector<EtaSweepRow> run_eta_sweep(const EtaSweepConfig& config) {
  config.dgp.validate();
  if (config.replications == 0)
    throw Error(ErrorCode::ConfigError, "need at least one replication", "replications");
  std::vector<double> etas = config.eta_values;
  if (etas.empty())
    for (int k = 0; k <= 10; ++k) etas.push_back(static_cast<double>(k));

  const RngSeed root{config.seed, 0};
  const std::size_t variants = etas.size() + 1;  // fixed values plus the hyperprior run
  const std::vector<Method> methods = {Method::LspSs, Method::LspSsl};

  // errors[method][variant][rep]
  std::vector<std::vector<std::vector<double>>> errors(
      methods.size(), std::vector<std::vector<double>>(variants,
                                                       std::vector<double>(config.replications)));

  parallel_over(config.replications, config.threads, [&](std::size_t rep) {
    const DgpDraw draw = generate_dgp(config.dgp, root.derive({kDgpStream, rep}));
    const WeightVector weights = generate_weights(draw.gamma_star, config.phi,
                                                  root.derive({kWeightStream, rep}));

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const Method method = methods[mi];
      for (std::size_t v = 0; v < variants; ++v) {
        MethodSettings settings = config.settings;
        const bool prior_variant = v == etas.size();
        const RngSeed fit_seed =
            root.derive({kFitStream, static_cast<std::uint64_t>(method), rep, v});

        EvalMetrics metrics;
        if (method == Method::LspSs) {
          SsModelSpec spec = settings.ss_spec();
          if (!prior_variant) spec.lsp.fixed_eta = etas[v];
          PosteriorSummary summary = run_chain(draw.data, &weights, spec, settings.mcmc_samples,
                                               settings.mcmc_burn_in, fit_seed);
          metrics = evaluate_fit(summary.bma_beta, summary.mpm, draw.gamma_star, draw.beta_star);
        } else {
          SslSpec spec = settings.ssl_spec();
          if (!prior_variant) spec.lsp.fixed_eta = etas[v];
          SslPath path = run_path(draw.data, &weights, spec, fit_seed);
          const SslPoint& point = path.points[path.chosen_index];
          std::vector<std::uint8_t> flags(draw.gamma_star.size(), 0);
          for (Eigen::Index j : point.support) flags[static_cast<std::size_t>(j)] = 1;
          metrics = evaluate_fit(point.beta, InclusionVector{std::move(flags)}, draw.gamma_star,
                                 draw.beta_star);
        }
        errors[mi][v][rep] = metrics.l1_error;
      }
    }
  });

  std::vector<EtaSweepRow> rows;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t v = 0; v < variants; ++v) {
      EtaSweepRow row;
      row.method = methods[mi];
      row.prior_row = v == etas.size();
      row.eta = row.prior_row ? kNaN : etas[v];
      row.count = config.replications;
      row.l1_mean = mean_of(errors[mi][v]);
      row.l1_se = se_of(errors[mi][v], row.l1_mean);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace lsp
