#pragma once
// Importance-score files: {"scores": [{"id", "name", "importance", "reason"}]}.
// This matches the output contract used when querying scores from a language
// model, so real responses are drop-in. Alignment to a dataset is by exact
// feature name unless order-based matching is requested.

#include "lsp/types.hpp"

#include <string>
#include <vector>

namespace lsp {

struct ScoreRecord {
  std::string id;
  std::string name;
  double importance = 0.0;
  std::string reason;
};

struct ScoresFile {
  std::vector<ScoreRecord> scores;
};

ScoresFile read_scores_file(const std::string& path);

void write_scores_file(const std::string& path, const WeightVector& w,
                       const std::vector<std::string>& feature_names, const std::string& reason);

struct IngestOptions {
  double range_min = 1.0;
  double range_max = 5.0;
  bool fill_missing = false;  // assign range_min to unscored features instead of failing
  bool by_order = false;      // positional matching instead of name matching
};

struct IngestResult {
  WeightVector weights;
  std::vector<std::string> filled_features;   // dataset features given the range minimum
  std::vector<std::string> unmatched_scores;  // score names with no dataset feature
  std::vector<std::string> warnings;
};

// Validates ids (unique) and importances (inside the declared range), then
// aligns records to feature_names. A dataset feature without a score is an
// error unless fill_missing is set.
IngestResult ingest_scores(const ScoresFile& file, const std::vector<std::string>& feature_names,
                           const IngestOptions& options);

enum class AggregateMode { Mean, Median };

// Elementwise mean or median across draws; output stays strictly positive.
WeightVector aggregate_weight_draws(const std::vector<WeightVector>& draws, AggregateMode mode);

}  // namespace lsp
