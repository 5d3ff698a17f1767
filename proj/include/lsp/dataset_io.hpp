#pragma once
// Dataset loading: CSV with a header row (one column is the response, the
// rest are features) and a columnar JSON variant. All numeric parsing rejects
// NaN/Inf. Inputs are assumed numeric; there is no categorical encoding.

#include "lsp/types.hpp"

#include <string>

namespace lsp {

RegressionData load_dataset_csv(const std::string& path, const std::string& response_column);

// Columnar JSON: {"y": [...], "features": [{"name": "...", "values": [...]}, ...]}
RegressionData load_dataset_json(const std::string& path);

void save_dataset_csv(const std::string& path, const RegressionData& data,
                      const std::string& response_column);

}  // namespace lsp
