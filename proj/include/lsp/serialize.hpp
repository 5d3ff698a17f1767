#pragma once
// Result serialization shared by the CLI and tests: JSON for fit outputs,
// long-format CSV for sweep records, and summary/table CSVs. Numeric output
// is full-precision and byte-stable across runs.

#include "lsp/sim.hpp"
#include "lsp/spike_slab.hpp"
#include "lsp/ssl.hpp"
#include "lsp/weighted_lasso.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace lsp {

nlohmann::ordered_json posterior_summary_to_json(const PosteriorSummary& summary,
                                                 bool include_traces);
nlohmann::ordered_json ssl_path_to_json(const SslPath& path, const std::vector<double>& lambda0_grid);
nlohmann::ordered_json cv_result_to_json(const TwoStageCvResult& result, bool include_table);

void write_records_csv(const std::string& path, const std::vector<EvalRecord>& records);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

void write_group_tables_csv(const std::string& path,
                            const std::map<Method, GroupTable>& tables);
void write_eta_sweep_csv(const std::string& path, const std::vector<EtaSweepRow>& rows);

void write_beta_csv(const std::string& path, const Vector& beta, double intercept,
                    const std::vector<std::string>& feature_names);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace lsp
