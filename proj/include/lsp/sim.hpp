#pragma once
// Simulation harness: equicorrelated Gaussian data generation, method
// evaluation (F1 and l1 error), the weight-quality sweep, grouped inclusion
// tables, and the fixed-eta sensitivity sweep. Replications parallelize over
// a work queue with per-cell RNG streams, so results are independent of
// thread scheduling.

#include "lsp/rng.hpp"
#include "lsp/spike_slab.hpp"
#include "lsp/ssl.hpp"
#include "lsp/types.hpp"
#include "lsp/weighted_lasso.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lsp {

struct DgpSpec {
  std::size_t n = 100;
  std::size_t p = 1000;
  std::size_t n_active = 20;
  double coefficient = 1.0;
  double intercept = 1.0;
  double rho = 0.5;  // equicorrelation
  double noise_variance = 1.0;

  void validate() const;
};

struct DgpDraw {
  RegressionData data;
  InclusionVector gamma_star;
  Vector beta_star;
};

// X = sqrt(rho) z 1' + sqrt(1-rho) E (one shared factor per row), active set
// = first n_active indices of a seeded permutation, y = X beta* + alpha* + eps.
DgpDraw generate_dgp(const DgpSpec& spec, RngSeed seed);

struct EvalMetrics {
  double f1 = 0.0;
  double l1_error = 0.0;
};

// F1 over the selected support vs the true one (1 when both are empty) and
// the l1 distance between coefficient vectors.
EvalMetrics evaluate_fit(const Vector& beta_hat, const InclusionVector& support_hat,
                         const InclusionVector& gamma_star, const Vector& beta_star);

enum class Method { LspSs, Ss, LspSsl, Ssl, LlmLasso, Lasso };

const char* method_name(Method method);
std::optional<Method> method_from_name(const std::string& name);
bool method_uses_weights(Method method);

struct MethodSettings {
  std::size_t mcmc_samples = 5000;
  std::size_t mcmc_burn_in = 1000;
  double tau = 1.0;
  double a_sigma = 0.01;
  double b_sigma = 0.01;
  double pi0 = 0.5;
  double ssl_lambda1 = 1.0;
  std::size_t ssl_grid_size = 20;
  SslSpec::SMode ssl_s_mode = SslSpec::SMode::Updated;
  LassoCvSpec lasso_cv;

  SsModelSpec ss_spec() const;
  SslSpec ssl_spec() const;
};

struct SweepConfig {
  DgpSpec dgp;
  std::vector<Method> methods = {Method::LspSs,    Method::Ss,    Method::LspSsl,
                                 Method::Ssl,      Method::LlmLasso, Method::Lasso};
  std::vector<double> phi_grid;  // empty: the default 25-point grid
  std::size_t replications = 50;
  std::uint64_t seed = 1;
  MethodSettings settings;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct EvalRecord {
  Method method = Method::Lasso;
  double phi_target = 0.0;
  double phi_realized = 0.0;
  std::size_t replication = 0;
  double f1 = 0.0;
  double l1_error = 0.0;
  double chosen_eta = 0.0;     // posterior mean eta for MCMC, selected eta otherwise
  double chosen_lambda = 0.0;  // lambda for CV fits, lambda0 for SSL paths; NaN if n/a
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
};

// One record per method x phi x replication. Data are fresh per replication
// and shared across the phi grid within it, so weight-blind baselines are
// exactly flat in phi; weights are fresh per (replication, phi).
std::vector<EvalRecord> run_sweep(const SweepConfig& config);

struct SummaryRow {
  Method method = Method::Lasso;
  double phi = 0.0;
  std::size_t count = 0;
  double f1_mean = 0.0, f1_se = 0.0;
  double l1_mean = 0.0, l1_se = 0.0;
};

std::vector<SummaryRow> summarize_records(const std::vector<EvalRecord>& records);

// Mean inclusion value per (weight value, true status) cell; weights are
// grouped by their rounded integer value.
struct GroupTable {
  std::vector<long long> weight_values;          // sorted distinct values
  std::vector<std::array<double, 2>> cell_mean;  // [w index][gamma*], NaN when empty
  std::vector<std::array<std::size_t, 2>> cell_count;
};

class MipGroupAccumulator {
 public:
  void add(const Vector& inclusion, const WeightVector& w, const InclusionVector& gamma_star);
  GroupTable table() const;

 private:
  std::map<long long, std::array<double, 2>> sums_;
  std::map<long long, std::array<std::size_t, 2>> counts_;
};

GroupTable mip_by_group(const Vector& inclusion, const WeightVector& w,
                        const InclusionVector& gamma_star);

struct MipStudyConfig {
  DgpSpec dgp;
  double phi = 0.7;
  std::vector<Method> methods = {Method::LspSs, Method::Ss, Method::LlmLasso, Method::Lasso};
  std::size_t replications = 500;
  std::uint64_t seed = 1;
  MethodSettings settings;
  std::size_t threads = 0;
};

// Grouped inclusion tables accumulated over replications at one weight
// quality. SS methods contribute marginal inclusion probabilities; the
// penalized methods contribute 0/1 selection indicators.
std::map<Method, GroupTable> run_mip_study(const MipStudyConfig& config);

struct EtaSweepConfig {
  DgpSpec dgp;
  double phi = 0.8;
  std::vector<double> eta_values;  // empty: {0, 1, ..., 10}
  std::size_t replications = 50;
  std::uint64_t seed = 1;
  MethodSettings settings;
  std::size_t threads = 0;
};

struct EtaSweepRow {
  Method method = Method::LspSs;
  bool prior_row = false;  // the zero-inflated hyperprior instead of a fixed eta
  double eta = 0.0;        // meaningful when !prior_row
  std::size_t count = 0;
  double l1_mean = 0.0, l1_se = 0.0;
};

// LSP (SS) and LSP (SSL) at each fixed eta plus the zero-inflated prior.
std::vector<EtaSweepRow> run_eta_sweep(const EtaSweepConfig& config);

}  // namespace lsp
