// Command-line front end: weight evaluation/synthesis/ingestion/aggregation,
// model fitting, simulation sweeps, and SVG report emission. Failures exit
// nonzero with a machine-readable error JSON on stderr.

#include "lsp/dataset_io.hpp"
#include "lsp/prior.hpp"
#include "lsp/scores_io.hpp"
#include "lsp/serialize.hpp"
#include "lsp/sim.hpp"
#include "lsp/spike_slab.hpp"
#include "lsp/ssl.hpp"
#include "lsp/standardize.hpp"
#include "lsp/svg_report.hpp"
#include "lsp/weight_metrics.hpp"
#include "lsp/weight_synth.hpp"
#include "lsp/weighted_lasso.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string default_output_dir() {
  const char* dir = std::getenv("LSP_OUTPUT_DIR");
  return dir != nullptr ? std::string(dir) : std::string();
}

std::string resolve_output(const std::string& path) {
  const std::string dir = default_output_dir();
  if (dir.empty() || path.empty() || path.front() == '/') return path;
  return dir + "/" + path;
}

void emit(const ordered_json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::ofstream out(resolve_output(out_path));
    if (!out) throw lsp::Error(lsp::ErrorCode::IoError, "cannot write " + out_path);
    out << doc.dump(2) << '\n';
  }
}

lsp::RegressionData load_dataset(const std::string& path, const std::string& response) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return lsp::load_dataset_json(path);
  return lsp::load_dataset_csv(path, response);
}

lsp::WeightVector load_weights(const std::string& path) {
  const lsp::ScoresFile file = lsp::read_scores_file(path);
  if (file.scores.empty()) throw lsp::Error(lsp::ErrorCode::EmptyData, "no scores in " + path);
  lsp::Vector values(static_cast<Eigen::Index>(file.scores.size()));
  for (std::size_t i = 0; i < file.scores.size(); ++i)
    values[static_cast<Eigen::Index>(i)] = file.scores[i].importance;
  return lsp::WeightVector::make(std::move(values));
}

lsp::InclusionVector load_inclusion(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lsp::Error(lsp::ErrorCode::IoError, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw lsp::Error(lsp::ErrorCode::ParseError, std::string("invalid JSON: ") + e.what(), path);
  }
  if (!doc.contains("flags") || !doc["flags"].is_array())
    throw lsp::Error(lsp::ErrorCode::ParseError, "expected {\"flags\": [...]}", "flags");
  std::vector<std::uint8_t> flags;
  for (const auto& v : doc["flags"]) {
    if (!v.is_number_integer())
      throw lsp::Error(lsp::ErrorCode::ParseError, "flags must be integers 0/1", "flags");
    const long long x = v.get<long long>();
    if (x != 0 && x != 1)
      throw lsp::Error(lsp::ErrorCode::OutOfRange, "flags must be 0 or 1", "flags");
    flags.push_back(static_cast<std::uint8_t>(x));
  }
  return lsp::InclusionVector::make(std::move(flags));
}

std::vector<double> parse_double_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    try {
      out.push_back(std::stod(text.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw lsp::Error(lsp::ErrorCode::ConfigError, "invalid number in list '" + text + "'", field);
    }
    pos = comma + 1;
  }
  return out;
}

// --- config-file helpers -------------------------------------------------

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lsp::Error(lsp::ErrorCode::IoError, "cannot open " + path);
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw lsp::Error(lsp::ErrorCode::ParseError, std::string("invalid JSON: ") + e.what(), path);
  }
}

template <typename T>
T field_or(const json& obj, const std::string& key, T fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw lsp::Error(lsp::ErrorCode::ConfigError, "field has the wrong type",
                     path.empty() ? key : path + "." + key);
  }
}

lsp::DgpSpec parse_dgp(const json& cfg) {
  lsp::DgpSpec spec;
  if (!cfg.contains("dgp")) return spec;
  const json& d = cfg.at("dgp");
  if (!d.is_object()) throw lsp::Error(lsp::ErrorCode::ConfigError, "dgp must be an object", "dgp");
  spec.n = field_or<std::size_t>(d, "n", spec.n, "dgp");
  spec.p = field_or<std::size_t>(d, "p", spec.p, "dgp");
  spec.n_active = field_or<std::size_t>(d, "n_active", spec.n_active, "dgp");
  spec.coefficient = field_or<double>(d, "coefficient", spec.coefficient, "dgp");
  spec.intercept = field_or<double>(d, "intercept", spec.intercept, "dgp");
  spec.rho = field_or<double>(d, "rho", spec.rho, "dgp");
  spec.noise_variance = field_or<double>(d, "noise_variance", spec.noise_variance, "dgp");
  return spec;
}

lsp::MethodSettings parse_settings(const json& cfg) {
  lsp::MethodSettings s;
  if (!cfg.contains("settings")) return s;
  const json& j = cfg.at("settings");
  if (!j.is_object())
    throw lsp::Error(lsp::ErrorCode::ConfigError, "settings must be an object", "settings");
  s.mcmc_samples = field_or<std::size_t>(j, "mcmc_samples", s.mcmc_samples, "settings");
  s.mcmc_burn_in = field_or<std::size_t>(j, "mcmc_burn_in", s.mcmc_burn_in, "settings");
  s.tau = field_or<double>(j, "tau", s.tau, "settings");
  s.a_sigma = field_or<double>(j, "a_sigma", s.a_sigma, "settings");
  s.b_sigma = field_or<double>(j, "b_sigma", s.b_sigma, "settings");
  s.pi0 = field_or<double>(j, "pi0", s.pi0, "settings");
  s.ssl_lambda1 = field_or<double>(j, "ssl_lambda1", s.ssl_lambda1, "settings");
  s.ssl_grid_size = field_or<std::size_t>(j, "ssl_grid_size", s.ssl_grid_size, "settings");
  const std::string mode = field_or<std::string>(j, "ssl_s_mode", "updated", "settings");
  if (mode == "updated")
    s.ssl_s_mode = lsp::SslSpec::SMode::Updated;
  else if (mode == "fixed")
    s.ssl_s_mode = lsp::SslSpec::SMode::Fixed;
  else
    throw lsp::Error(lsp::ErrorCode::ConfigError, "ssl_s_mode must be 'updated' or 'fixed'",
                     "settings.ssl_s_mode");
  s.lasso_cv.folds = field_or<std::size_t>(j, "cv_folds", s.lasso_cv.folds, "settings");
  s.lasso_cv.eta_count = field_or<std::size_t>(j, "cv_eta_count", s.lasso_cv.eta_count, "settings");
  s.lasso_cv.eta_max = field_or<double>(j, "cv_eta_max", s.lasso_cv.eta_max, "settings");
  s.lasso_cv.lambda_count =
      field_or<std::size_t>(j, "cv_lambda_count", s.lasso_cv.lambda_count, "settings");
  s.lasso_cv.log_lambda_min =
      field_or<double>(j, "cv_log_lambda_min", s.lasso_cv.log_lambda_min, "settings");
  s.lasso_cv.log_lambda_max =
      field_or<double>(j, "cv_log_lambda_max", s.lasso_cv.log_lambda_max, "settings");
  return s;
}

std::vector<lsp::Method> parse_methods(const json& cfg, std::vector<lsp::Method> fallback) {
  if (!cfg.contains("methods")) return fallback;
  if (!cfg.at("methods").is_array())
    throw lsp::Error(lsp::ErrorCode::ConfigError, "methods must be an array", "methods");
  std::vector<lsp::Method> methods;
  for (std::size_t i = 0; i < cfg.at("methods").size(); ++i) {
    const auto& entry = cfg.at("methods")[i];
    if (!entry.is_string())
      throw lsp::Error(lsp::ErrorCode::ConfigError, "method entries must be strings",
                       "methods[" + std::to_string(i) + "]");
    const auto method = lsp::method_from_name(entry.get<std::string>());
    if (!method)
      throw lsp::Error(lsp::ErrorCode::ConfigError,
                       "unknown method '" + entry.get<std::string>() + "'",
                       "methods[" + std::to_string(i) + "]");
    methods.push_back(*method);
  }
  if (methods.empty())
    throw lsp::Error(lsp::ErrorCode::ConfigError, "methods list is empty", "methods");
  return methods;
}

// --- subcommand payloads --------------------------------------------------

struct FitCommonOptions {
  std::string data_path, response = "y", weights_path, out_path;
  std::uint64_t seed = 1;
  bool scale = false;
  double pi0 = 0.5, a_s = 1.0, b_s = 0.0;
  std::string eta_grid_text;
  double fixed_eta = -1.0, fixed_s = -1.0;  // negatives mean unset

  void apply_lsp(lsp::LspConfig& lsp_cfg) const {
    lsp_cfg.pi0 = pi0;
    lsp_cfg.a_s = a_s;
    lsp_cfg.b_s = b_s;
    if (!eta_grid_text.empty()) lsp_cfg.eta_grid = parse_double_list(eta_grid_text, "eta-grid");
    if (fixed_eta >= 0.0) lsp_cfg.fixed_eta = fixed_eta;
    if (fixed_s >= 0.0) lsp_cfg.fixed_s = fixed_s;
  }
};

int run_fit_ss(const FitCommonOptions& opt, std::size_t samples, std::size_t burn_in, double tau,
               double a_sigma, double b_sigma, bool traces) {
  lsp::RegressionData data = load_dataset(opt.data_path, opt.response);
  std::optional<lsp::WeightVector> weights;
  if (!opt.weights_path.empty()) {
    weights = load_weights(opt.weights_path);
    lsp::validate_dimensions(data, *weights);
  }

  lsp::CenteringRecord scaling;
  if (opt.scale) {
    auto [scaled, record] = lsp::standardize(data, true);
    data = std::move(scaled);
    scaling = std::move(record);
  }

  lsp::SsModelSpec spec;
  spec.tau = tau;
  spec.a_sigma = a_sigma;
  spec.b_sigma = b_sigma;
  opt.apply_lsp(spec.lsp);

  lsp::PosteriorSummary summary = lsp::run_chain(data, weights ? &*weights : nullptr, spec,
                                                 samples, burn_in, lsp::RngSeed{opt.seed, 0});
  if (opt.scale) {
    summary.bma_beta = scaling.unscale_beta(summary.bma_beta);
    summary.intercept = scaling.intercept_for(summary.bma_beta);
  }
  emit(lsp::posterior_summary_to_json(summary, traces), opt.out_path);
  return 0;
}

int run_fit_ssl(const FitCommonOptions& opt, double lambda1, std::size_t grid_size,
                const std::string& lambda0_text, const std::string& s_mode,
                const std::string& coef_csv) {
  lsp::RegressionData data = load_dataset(opt.data_path, opt.response);
  std::optional<lsp::WeightVector> weights;
  if (!opt.weights_path.empty()) {
    weights = load_weights(opt.weights_path);
    lsp::validate_dimensions(data, *weights);
  }

  lsp::CenteringRecord scaling;
  if (opt.scale) {
    auto [scaled, record] = lsp::standardize(data, true);
    data = std::move(scaled);
    scaling = std::move(record);
  }

  lsp::SslSpec spec;
  spec.lambda1 = lambda1;
  spec.grid_size = grid_size;
  if (!lambda0_text.empty()) spec.lambda0_grid = parse_double_list(lambda0_text, "lambda0-grid");
  spec.s_mode = s_mode == "fixed" ? lsp::SslSpec::SMode::Fixed : lsp::SslSpec::SMode::Updated;
  opt.apply_lsp(spec.lsp);

  lsp::SslPath path =
      lsp::run_path(data, weights ? &*weights : nullptr, spec, lsp::RngSeed{opt.seed, 0});

  std::vector<double> grid = spec.lambda0_grid;
  if (grid.empty()) {
    const double hi = static_cast<double>(data.n());
    for (std::size_t i = 0; i < spec.grid_size; ++i)
      grid.push_back(1.0 + (hi - 1.0) * static_cast<double>(i) /
                               static_cast<double>(spec.grid_size - 1));
  }

  lsp::Vector beta = path.points[path.chosen_index].beta;
  double intercept = path.intercept;
  ordered_json doc = lsp::ssl_path_to_json(path, grid);
  if (opt.scale) {
    beta = scaling.unscale_beta(beta);
    intercept = scaling.intercept_for(beta);
    doc["beta"] = ordered_json::array();
    for (Eigen::Index j = 0; j < beta.size(); ++j) doc["beta"].push_back(beta[j]);
    doc["intercept"] = intercept;
  }
  emit(doc, opt.out_path);
  if (!coef_csv.empty())
    lsp::write_beta_csv(resolve_output(coef_csv), beta, intercept, data.feature_names);
  return 0;
}

int run_fit_lasso(const FitCommonOptions& opt, std::size_t folds, bool include_table, bool weighted,
                  const std::string& coef_csv) {
  lsp::RegressionData data = load_dataset(opt.data_path, opt.response);
  lsp::LassoCvSpec spec;
  spec.folds = folds;

  lsp::TwoStageCvResult result;
  if (weighted) {
    if (opt.weights_path.empty())
      throw lsp::Error(lsp::ErrorCode::ConfigError, "llm-lasso requires --weights", "weights");
    const lsp::WeightVector weights = load_weights(opt.weights_path);
    lsp::validate_dimensions(data, weights);
    result = lsp::two_stage_cv(data, weights, spec, lsp::RngSeed{opt.seed, 0});
  } else {
    result = lsp::lasso_cv(data, spec, lsp::RngSeed{opt.seed, 0});
  }
  emit(lsp::cv_result_to_json(result, include_table), opt.out_path);
  if (!coef_csv.empty())
    lsp::write_beta_csv(resolve_output(coef_csv), result.beta, result.intercept,
                        data.feature_names);
  return 0;
}

int run_simulate(const std::string& config_path) {
  const json cfg = load_config(config_path);
  const std::string study = field_or<std::string>(cfg, "study", "sweep", "");

  if (study == "sweep") {
    lsp::SweepConfig sweep;
    sweep.dgp = parse_dgp(cfg);
    sweep.methods = parse_methods(cfg, sweep.methods);
    if (cfg.contains("phi_grid"))
      sweep.phi_grid = field_or<std::vector<double>>(cfg, "phi_grid", {}, "");
    sweep.replications = field_or<std::size_t>(cfg, "replications", sweep.replications, "");
    sweep.seed = field_or<std::uint64_t>(cfg, "seed", sweep.seed, "");
    sweep.threads = field_or<std::size_t>(cfg, "threads", sweep.threads, "");
    sweep.settings = parse_settings(cfg);

    const auto records = lsp::run_sweep(sweep);
    const auto summary = lsp::summarize_records(records);
    const std::string out_records =
        resolve_output(field_or<std::string>(cfg, "out_records", "records.csv", ""));
    const std::string out_summary =
        resolve_output(field_or<std::string>(cfg, "out_summary", "summary.csv", ""));
    lsp::write_records_csv(out_records, records);
    lsp::write_summary_csv(out_summary, summary);

    std::size_t failures = 0;
    for (const auto& record : records) failures += record.failed ? 1 : 0;
    ordered_json status;
    status["records"] = records.size();
    status["failed_cells"] = failures;
    status["out_records"] = out_records;
    status["out_summary"] = out_summary;
    std::cout << status.dump(2) << '\n';
    return 0;
  }
  if (study == "mip-groups") {
    lsp::MipStudyConfig mip;
    mip.dgp = parse_dgp(cfg);
    mip.methods = parse_methods(cfg, mip.methods);
    mip.phi = field_or<double>(cfg, "phi", mip.phi, "");
    mip.replications = field_or<std::size_t>(cfg, "replications", mip.replications, "");
    mip.seed = field_or<std::uint64_t>(cfg, "seed", mip.seed, "");
    mip.threads = field_or<std::size_t>(cfg, "threads", mip.threads, "");
    mip.settings = parse_settings(cfg);

    const auto tables = lsp::run_mip_study(mip);
    const std::string out_table =
        resolve_output(field_or<std::string>(cfg, "out_table", "mip_groups.csv", ""));
    lsp::write_group_tables_csv(out_table, tables);
    ordered_json status;
    status["out_table"] = out_table;
    std::cout << status.dump(2) << '\n';
    return 0;
  }
  throw lsp::Error(lsp::ErrorCode::ConfigError, "study must be 'sweep' or 'mip-groups'", "study");
}

int run_eta_sweep_cmd(const std::string& config_path) {
  const json cfg = load_config(config_path);
  lsp::EtaSweepConfig sweep;
  sweep.dgp = parse_dgp(cfg);
  sweep.phi = field_or<double>(cfg, "phi", sweep.phi, "");
  if (cfg.contains("eta_values"))
    sweep.eta_values = field_or<std::vector<double>>(cfg, "eta_values", {}, "");
  sweep.replications = field_or<std::size_t>(cfg, "replications", sweep.replications, "");
  sweep.seed = field_or<std::uint64_t>(cfg, "seed", sweep.seed, "");
  sweep.threads = field_or<std::size_t>(cfg, "threads", sweep.threads, "");
  sweep.settings = parse_settings(cfg);

  const auto rows = lsp::run_eta_sweep(sweep);
  const std::string out_table =
      resolve_output(field_or<std::string>(cfg, "out_table", "eta_sweep.csv", ""));
  lsp::write_eta_sweep_csv(out_table, rows);
  ordered_json status;
  status["out_table"] = out_table;
  std::cout << status.dump(2) << '\n';
  return 0;
}

int run_report(const std::string& in_path, const std::string& out_path, const std::string& metric,
               std::string title) {
  const auto rows = lsp::read_summary_csv(in_path);
  const bool use_f1 = metric == "f1";
  if (title.empty())
    title = use_f1 ? "Feature recovery vs weight quality" : "Coefficient error vs weight quality";

  std::map<int, lsp::ChartSeries> by_method;
  for (const auto& row : rows) {
    auto& series = by_method[static_cast<int>(row.method)];
    series.name = lsp::method_name(row.method);
    series.points.push_back(
        {row.phi, use_f1 ? row.f1_mean : row.l1_mean, use_f1 ? row.f1_se : row.l1_se});
  }
  std::vector<lsp::ChartSeries> series;
  for (auto& [key, value] : by_method) {
    std::sort(value.points.begin(), value.points.end(),
              [](const lsp::SeriesPoint& a, const lsp::SeriesPoint& b) { return a.x < b.x; });
    series.push_back(std::move(value));
  }
  lsp::write_line_chart_svg(resolve_output(out_path), title, "phi_l1 weight agreement",
                            use_f1 ? "mean F1" : "mean l1 error", series);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSP variable selection toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- weights ----
  auto* weights_cmd = app.add_subcommand("weights", "weight-vector utilities");
  weights_cmd->require_subcommand(1);

  {
    auto* eval = weights_cmd->add_subcommand("eval", "score agreement between weights and a support");
    auto gamma_path = std::make_shared<std::string>();
    auto weights_path = std::make_shared<std::string>();
    auto metric = std::make_shared<std::string>("l1");
    auto plugin = std::make_shared<bool>(false);
    eval->add_option("--gamma", *gamma_path, "inclusion JSON {\"flags\": [...]}")->required();
    eval->add_option("--weights", *weights_path, "scores JSON file")->required();
    eval->add_option("--metric", *metric, "l1 or pairwise")->check(CLI::IsMember({"l1", "pairwise"}));
    eval->add_flag("--plugin", *plugin, "gamma is an estimate (empirical alignment)");
    eval->callback([=]() {
      const lsp::InclusionVector gamma = load_inclusion(*gamma_path);
      const lsp::WeightVector w = load_weights(*weights_path);
      ordered_json doc;
      std::vector<std::string> warnings;
      lsp::AgreementScore score{};
      if (*metric == "l1") {
        score = lsp::phi_plugin(gamma, w, lsp::MetricKind::L1);
      } else {
        score = lsp::phi_plugin(gamma, w, lsp::MetricKind::Pairwise);
        const std::size_t active = gamma.count_active();
        if (active == 0 || active == gamma.size())
          warnings.push_back("gamma is constant: the score only reflects orderings within w");
      }
      doc["metric"] = *metric;
      doc["value"] = score.value;
      doc["plugin"] = *plugin;
      if (!warnings.empty()) doc["warnings"] = warnings;
      emit(doc, "");
    });
  }

  {
    auto* synth = weights_cmd->add_subcommand("synth", "generate calibrated synthetic weights");
    auto p = std::make_shared<std::size_t>(0);
    auto active_path = std::make_shared<std::string>();
    auto phi = std::make_shared<double>(1.0);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto out = std::make_shared<std::string>("weights.json");
    synth->add_option("--p", *p, "number of features")->required();
    synth->add_option("--active-file", *active_path, "ground-truth inclusion JSON")->required();
    synth->add_option("--phi", *phi, "target l1 agreement in [0.5, 1]")->required();
    synth->add_option("--seed", *seed, "random seed");
    synth->add_option("--out", *out, "output scores file");
    synth->callback([=]() {
      const lsp::InclusionVector active = load_inclusion(*active_path);
      if (active.size() != *p)
        throw lsp::Error(lsp::ErrorCode::DimensionMismatch,
                         "--p is " + std::to_string(*p) + " but active file has length " +
                             std::to_string(active.size()));
      const lsp::WeightVector w = lsp::generate_weights(active, *phi, lsp::RngSeed{*seed, 0});
      char reason[64];
      std::snprintf(reason, sizeof(reason), "synthetic draw targeting phi_l1 = %g", *phi);
      lsp::write_scores_file(resolve_output(*out), w, {}, reason);
      ordered_json doc;
      doc["out"] = *out;
      doc["target_phi"] = *phi;
      doc["realized_phi_l1"] = lsp::phi_l1(active, w).value;
      emit(doc, "");
    });
  }

  {
    auto* ingest = weights_cmd->add_subcommand("ingest", "align a scores file to a dataset");
    auto scores_path = std::make_shared<std::string>();
    auto data_path = std::make_shared<std::string>();
    auto response = std::make_shared<std::string>("y");
    auto range_min = std::make_shared<double>(1.0);
    auto range_max = std::make_shared<double>(5.0);
    auto fill_missing = std::make_shared<bool>(false);
    auto by_order = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    ingest->add_option("--scores", *scores_path, "scores JSON file")->required();
    ingest->add_option("--data", *data_path, "dataset CSV/JSON")->required();
    ingest->add_option("--response", *response, "response column name");
    ingest->add_option("--range-min", *range_min, "declared importance minimum");
    ingest->add_option("--range-max", *range_max, "declared importance maximum");
    ingest->add_flag("--fill-missing", *fill_missing, "assign range minimum to unscored features");
    ingest->add_flag("--by-order", *by_order, "positional matching instead of names");
    ingest->add_option("--out", *out, "write the aligned weights as a scores file");
    ingest->callback([=]() {
      const lsp::RegressionData data = load_dataset(*data_path, *response);
      const lsp::ScoresFile file = lsp::read_scores_file(*scores_path);
      lsp::IngestOptions options;
      options.range_min = *range_min;
      options.range_max = *range_max;
      options.fill_missing = *fill_missing;
      options.by_order = *by_order;
      std::vector<std::string> names = data.feature_names;
      if (names.empty())
        for (std::size_t j = 0; j < data.p(); ++j) names.push_back("x" + std::to_string(j + 1));
      const lsp::IngestResult result = lsp::ingest_scores(file, names, options);
      if (!out->empty())
        lsp::write_scores_file(resolve_output(*out), result.weights, names, "ingested");
      ordered_json doc;
      doc["features"] = names.size();
      doc["filled_features"] = result.filled_features;
      doc["unmatched_scores"] = result.unmatched_scores;
      if (!result.warnings.empty()) doc["warnings"] = result.warnings;
      if (!out->empty()) doc["out"] = *out;
      emit(doc, "");
    });
  }

  {
    auto* aggregate = weights_cmd->add_subcommand("aggregate", "combine several weight draws");
    auto inputs = std::make_shared<std::vector<std::string>>();
    auto mode = std::make_shared<std::string>("mean");
    auto out = std::make_shared<std::string>();
    aggregate->add_option("--in", *inputs, "input scores files")->required()->expected(-1);
    aggregate->add_option("--mode", *mode, "mean or median")->check(CLI::IsMember({"mean", "median"}));
    aggregate->add_option("--out", *out, "output scores file")->required();
    aggregate->callback([=]() {
      std::vector<lsp::WeightVector> draws;
      std::vector<std::string> names;
      for (const std::string& path : *inputs) {
        const lsp::ScoresFile file = lsp::read_scores_file(path);
        if (names.empty())
          for (const auto& record : file.scores) names.push_back(record.name);
        lsp::Vector values(static_cast<Eigen::Index>(file.scores.size()));
        for (std::size_t i = 0; i < file.scores.size(); ++i)
          values[static_cast<Eigen::Index>(i)] = file.scores[i].importance;
        draws.push_back(lsp::WeightVector::make(std::move(values)));
      }
      const lsp::WeightVector combined = lsp::aggregate_weight_draws(
          draws, *mode == "mean" ? lsp::AggregateMode::Mean : lsp::AggregateMode::Median);
      lsp::write_scores_file(resolve_output(*out), combined, names,
                             "aggregate (" + *mode + ") of " + std::to_string(draws.size()) +
                                 " draws");
      ordered_json doc;
      doc["out"] = *out;
      doc["draws"] = draws.size();
      doc["mode"] = *mode;
      emit(doc, "");
    });
  }

  // ---- fit ----
  auto* fit_cmd = app.add_subcommand("fit", "model fitting");
  fit_cmd->require_subcommand(1);

  auto add_common = [](CLI::App* cmd, const std::shared_ptr<FitCommonOptions>& opt,
                       bool with_weights) {
    cmd->add_option("--data", opt->data_path, "dataset CSV/JSON")->required();
    cmd->add_option("--response", opt->response, "response column name");
    if (with_weights) cmd->add_option("--weights", opt->weights_path, "scores JSON file");
    cmd->add_option("--seed", opt->seed, "random seed");
    cmd->add_option("--out", opt->out_path, "output JSON path (default stdout)");
    cmd->add_flag("--scale", opt->scale, "unit-variance scaling of features");
  };
  auto add_lsp_options = [](CLI::App* cmd, const std::shared_ptr<FitCommonOptions>& opt) {
    cmd->add_option("--pi0", opt->pi0, "zero-inflation mass on eta = 0");
    cmd->add_option("--a-s", opt->a_s, "Beta shape a for s");
    cmd->add_option("--b-s", opt->b_s, "Beta shape b for s (0 = number of features)");
    cmd->add_option("--eta-grid", opt->eta_grid_text, "comma-separated eta grid");
    cmd->add_option("--fixed-eta", opt->fixed_eta, "pin eta to this value");
    cmd->add_option("--fixed-s", opt->fixed_s, "pin s to this value");
  };

  {
    auto* ss = fit_cmd->add_subcommand("ss", "spike-and-slab posterior sampling");
    auto opt = std::make_shared<FitCommonOptions>();
    auto samples = std::make_shared<std::size_t>(5000);
    auto burn_in = std::make_shared<std::size_t>(1000);
    auto tau = std::make_shared<double>(1.0);
    auto a_sigma = std::make_shared<double>(0.01);
    auto b_sigma = std::make_shared<double>(0.01);
    auto traces = std::make_shared<bool>(false);
    add_common(ss, opt, true);
    add_lsp_options(ss, opt);
    ss->add_option("--samples", *samples, "total MCMC iterations");
    ss->add_option("--burn-in", *burn_in, "iterations to discard");
    ss->add_option("--tau", *tau, "slab scale");
    ss->add_option("--a-sigma", *a_sigma, "inverse-gamma shape");
    ss->add_option("--b-sigma", *b_sigma, "inverse-gamma scale");
    ss->add_flag("--traces", *traces, "include full s and eta traces");
    ss->callback([=, &exit_code]() {
      exit_code = run_fit_ss(*opt, *samples, *burn_in, *tau, *a_sigma, *b_sigma, *traces);
    });
  }

  {
    auto* ssl = fit_cmd->add_subcommand("ssl", "spike-and-slab Lasso MAP path");
    auto opt = std::make_shared<FitCommonOptions>();
    auto lambda1 = std::make_shared<double>(1.0);
    auto grid_size = std::make_shared<std::size_t>(20);
    auto lambda0_text = std::make_shared<std::string>();
    auto s_mode = std::make_shared<std::string>("updated");
    auto coef_csv = std::make_shared<std::string>();
    add_common(ssl, opt, true);
    add_lsp_options(ssl, opt);
    ssl->add_option("--lambda1", *lambda1, "slab penalty");
    ssl->add_option("--grid-size", *grid_size, "lambda0 grid size on [1, n]");
    ssl->add_option("--lambda0-grid", *lambda0_text, "explicit comma-separated lambda0 grid");
    ssl->add_option("--s-mode", *s_mode, "fixed or updated")
        ->check(CLI::IsMember({"fixed", "updated"}));
    ssl->add_option("--coef-csv", *coef_csv, "write final coefficients as CSV");
    ssl->callback([=, &exit_code]() {
      exit_code = run_fit_ssl(*opt, *lambda1, *grid_size, *lambda0_text, *s_mode, *coef_csv);
    });
  }

  {
    auto* lasso = fit_cmd->add_subcommand("lasso", "cross-validated Lasso baseline");
    auto opt = std::make_shared<FitCommonOptions>();
    auto folds = std::make_shared<std::size_t>(10);
    auto table = std::make_shared<bool>(false);
    auto coef_csv = std::make_shared<std::string>();
    add_common(lasso, opt, false);
    lasso->add_option("--folds", *folds, "cross-validation folds");
    lasso->add_flag("--cv-table", *table, "include the CV error table");
    lasso->add_option("--coef-csv", *coef_csv, "write coefficients as CSV");
    lasso->callback(
        [=, &exit_code]() { exit_code = run_fit_lasso(*opt, *folds, *table, false, *coef_csv); });
  }

  {
    auto* llm = fit_cmd->add_subcommand("llm-lasso", "weighted Lasso with two-stage CV");
    auto opt = std::make_shared<FitCommonOptions>();
    auto folds = std::make_shared<std::size_t>(10);
    auto table = std::make_shared<bool>(false);
    auto coef_csv = std::make_shared<std::string>();
    add_common(llm, opt, true);
    llm->add_option("--folds", *folds, "cross-validation folds");
    llm->add_flag("--cv-table", *table, "include the CV error table");
    llm->add_option("--coef-csv", *coef_csv, "write coefficients as CSV");
    llm->callback(
        [=, &exit_code]() { exit_code = run_fit_lasso(*opt, *folds, *table, true, *coef_csv); });
  }

  // ---- simulate / eta-sweep / report ----
  {
    auto* simulate = app.add_subcommand("simulate", "run a weight-quality sweep from a config file");
    auto config_path = std::make_shared<std::string>();
    simulate->add_option("--config", *config_path, "JSON config")->required();
    simulate->callback([=, &exit_code]() { exit_code = run_simulate(*config_path); });
  }
  {
    auto* eta = app.add_subcommand("eta-sweep", "fixed-eta sensitivity study");
    auto config_path = std::make_shared<std::string>();
    eta->add_option("--config", *config_path, "JSON config")->required();
    eta->callback([=, &exit_code]() { exit_code = run_eta_sweep_cmd(*config_path); });
  }
  {
    auto* report = app.add_subcommand("report", "render an SVG chart from a summary CSV");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>("figure.svg");
    auto metric = std::make_shared<std::string>("f1");
    auto title = std::make_shared<std::string>();
    report->add_option("--in", *in_path, "summary CSV")->required();
    report->add_option("--out", *out_path, "output SVG");
    report->add_option("--metric", *metric, "f1 or l1")->check(CLI::IsMember({"f1", "l1"}));
    report->add_option("--title", *title, "chart title");
    report->callback(
        [=, &exit_code]() { exit_code = run_report(*in_path, *out_path, *metric, *title); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    ordered_json err;
    err["error"]["code"] = "UnknownCommand";
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << '\n';
    return 2;
  } catch (const lsp::Error& e) {
    ordered_json err;
    err["error"]["code"] = e.code_name();
    err["error"]["message"] = e.what();
    if (!e.field().empty()) err["error"]["field"] = e.field();
    std::cerr << err.dump(2) << '\n';
    return 1;
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"]["code"] = "Internal";
    err["error"]["message"] = e.what();
    std::cerr << err.dump(2) << '\n';
    return 1;
  }
  return exit_code;
}
