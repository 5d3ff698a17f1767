#include "lsp/serialize.hpp"

#include "lsp/io_util.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lsp {

namespace {

nlohmann::ordered_json vector_to_json(const Vector& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

std::string csv_number(double v) { return std::isnan(v) ? "" : format_double(v); }

}  // namespace

nlohmann::ordered_json posterior_summary_to_json(const PosteriorSummary& summary,
                                                 bool include_traces) {
  nlohmann::ordered_json doc;
  doc["mip"] = vector_to_json(summary.mip);
  doc["bma_beta"] = vector_to_json(summary.bma_beta);
  doc["mpm"] = nlohmann::ordered_json::array();
  for (std::uint8_t flag : summary.mpm.flags) doc["mpm"].push_back(static_cast<int>(flag));
  doc["intercept"] = summary.intercept;
  doc["n_samples"] = summary.n_samples;
  doc["burn_in"] = summary.burn_in;
  if (include_traces) {
    doc["s_trace"] = summary.s_trace;
    doc["eta_trace"] = summary.eta_trace;
  } else {
    double s_mean = 0.0, eta_mean = 0.0;
    for (double v : summary.s_trace) s_mean += v;
    for (double v : summary.eta_trace) eta_mean += v;
    const double count = static_cast<double>(summary.s_trace.size());
    doc["s_posterior_mean"] = count > 0 ? s_mean / count : 0.0;
    doc["eta_posterior_mean"] = count > 0 ? eta_mean / count : 0.0;
  }
  return doc;
}

nlohmann::ordered_json ssl_path_to_json(const SslPath& path,
                                        const std::vector<double>& lambda0_grid) {
  nlohmann::ordered_json doc;
  doc["chosen_index"] = path.chosen_index;
  doc["intercept"] = path.intercept;
  doc["path"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const SslPoint& point = path.points[i];
    nlohmann::ordered_json item;
    if (i < lambda0_grid.size()) item["lambda0"] = lambda0_grid[i];
    item["eta"] = point.eta;
    item["s"] = point.s;
    item["bic"] = point.bic;
    item["support_size"] = point.support.size();
    item["converged"] = point.converged;
    doc["path"].push_back(std::move(item));
  }
  doc["beta"] = vector_to_json(path.points[path.chosen_index].beta);
  nlohmann::ordered_json support = nlohmann::ordered_json::array();
  for (Eigen::Index j : path.points[path.chosen_index].support) support.push_back(j);
  doc["support"] = std::move(support);
  return doc;
}

nlohmann::ordered_json cv_result_to_json(const TwoStageCvResult& result, bool include_table) {
  nlohmann::ordered_json doc;
  doc["eta"] = result.eta;
  doc["lambda"] = result.lambda;
  doc["intercept"] = result.intercept;
  doc["beta"] = vector_to_json(result.beta);
  if (include_table) {
    doc["eta_grid"] = result.eta_grid;
    doc["lambda_grid"] = result.lambda_grid;
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (Eigen::Index e = 0; e < result.cv_error.rows(); ++e) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index l = 0; l < result.cv_error.cols(); ++l) row.push_back(result.cv_error(e, l));
      table.push_back(std::move(row));
    }
    doc["cv_error"] = std::move(table);
  }
  return doc;
}

void write_records_csv(const std::string& path, const std::vector<EvalRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "method,phi_target,phi_realized,replication,f1,l1_error,chosen_eta,chosen_lambda,seed,"
         "failed,error\n";
  for (const EvalRecord& r : records) {
    out << method_name(r.method) << ',' << format_double(r.phi_target) << ','
        << csv_number(r.phi_realized) << ',' << r.replication << ',' << csv_number(r.f1) << ','
        << csv_number(r.l1_error) << ',' << csv_number(r.chosen_eta) << ','
        << csv_number(r.chosen_lambda) << ',' << r.seed << ',' << (r.failed ? 1 : 0) << ','
        << r.error << '\n';
  }
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "method,phi,count,f1_mean,f1_se,l1_mean,l1_se\n";
  for (const SummaryRow& r : rows) {
    out << method_name(r.method) << ',' << format_double(r.phi) << ',' << r.count << ','
        << format_double(r.f1_mean) << ',' << format_double(r.f1_se) << ','
        << format_double(r.l1_mean) << ',' << format_double(r.l1_se) << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty summary file", path);

  std::vector<SummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string token;
    std::vector<std::string> fields;
    while (std::getline(ss, token, ',')) fields.push_back(token);
    if (fields.size() < 7)
      throw Error(ErrorCode::ParseError, "summary line " + std::to_string(line_no) + " is short");
    SummaryRow row;
    const auto method = method_from_name(fields[0]);
    if (!method)
      throw Error(ErrorCode::ParseError, "unknown method '" + fields[0] + "'",
                  "line " + std::to_string(line_no));
    row.method = *method;
    row.phi = std::stod(fields[1]);
    row.count = static_cast<std::size_t>(std::stoull(fields[2]));
    row.f1_mean = std::stod(fields[3]);
    row.f1_se = std::stod(fields[4]);
    row.l1_mean = std::stod(fields[5]);
    row.l1_se = std::stod(fields[6]);
    rows.push_back(row);
  }
  return rows;
}

void write_group_tables_csv(const std::string& path, const std::map<Method, GroupTable>& tables) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "method,gamma_star,weight,mean_inclusion,count\n";
  for (const auto& [method, table] : tables) {
    for (int truth = 0; truth <= 1; ++truth) {
      for (std::size_t i = 0; i < table.weight_values.size(); ++i) {
        out << method_name(method) << ',' << truth << ',' << table.weight_values[i] << ','
            << csv_number(table.cell_mean[i][static_cast<std::size_t>(truth)]) << ','
            << table.cell_count[i][static_cast<std::size_t>(truth)] << '\n';
      }
    }
  }
}

void write_eta_sweep_csv(const std::string& path, const std::vector<EtaSweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "method,variant,eta,count,l1_mean,l1_se\n";
  for (const EtaSweepRow& r : rows) {
    out << method_name(r.method) << ',' << (r.prior_row ? "prior" : "fixed") << ','
        << csv_number(r.eta) << ',' << r.count << ',' << format_double(r.l1_mean) << ','
        << format_double(r.l1_se) << '\n';
  }
}

void write_beta_csv(const std::string& path, const Vector& beta, double intercept,
                    const std::vector<std::string>& feature_names) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "feature,coefficient\n";
  out << "(intercept)," << format_double(intercept) << '\n';
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out << (feature_names.empty() ? "x" + std::to_string(idx + 1) : feature_names[idx]) << ','
        << format_double(beta[j]) << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << contents;
}

}  // namespace lsp
