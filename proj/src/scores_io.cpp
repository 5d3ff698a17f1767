#include "lsp/scores_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace lsp {

ScoresFile read_scores_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what(), path);
  }
  if (!doc.is_object() || !doc.contains("scores") || !doc["scores"].is_array())
    throw Error(ErrorCode::ParseError, "expected a JSON object with key \"scores\"", "scores");

  ScoresFile file;
  std::unordered_set<std::string> seen_ids;
  for (std::size_t i = 0; i < doc["scores"].size(); ++i) {
    const auto& item = doc["scores"][i];
    const std::string field = "scores[" + std::to_string(i) + "]";
    if (!item.is_object())
      throw Error(ErrorCode::ParseError, "score entries must be objects", field);
    ScoreRecord record;
    if (!item.contains("id"))
      throw Error(ErrorCode::ParseError, "score entry missing 'id'", field);
    record.id = item["id"].is_string() ? item["id"].get<std::string>() : item["id"].dump();
    if (!item.contains("name") || !item["name"].is_string())
      throw Error(ErrorCode::ParseError, "score entry missing string 'name'", field);
    record.name = item["name"].get<std::string>();
    if (!item.contains("importance") || !item["importance"].is_number())
      throw Error(ErrorCode::ParseError, "score entry missing numeric 'importance'", field);
    record.importance = item["importance"].get<double>();
    if (item.contains("reason") && item["reason"].is_string())
      record.reason = item["reason"].get<std::string>();
    if (!seen_ids.insert(record.id).second)
      throw Error(ErrorCode::ParseError, "duplicate score id '" + record.id + "'", field);
    file.scores.push_back(std::move(record));
  }
  return file;
}

void write_scores_file(const std::string& path, const WeightVector& w,
                       const std::vector<std::string>& feature_names, const std::string& reason) {
  if (!feature_names.empty() && feature_names.size() != w.size())
    throw Error(ErrorCode::DimensionMismatch, "feature names and weights differ in length");
  nlohmann::ordered_json doc;
  doc["scores"] = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < w.size(); ++j) {
    nlohmann::ordered_json item;
    item["id"] = j + 1;
    item["name"] = feature_names.empty() ? "x" + std::to_string(j + 1) : feature_names[j];
    const double value = w.values[static_cast<Eigen::Index>(j)];
    if (value == std::floor(value) && std::abs(value) < 1e15)
      item["importance"] = static_cast<long long>(value);
    else
      item["importance"] = value;
    item["reason"] = reason;
    doc["scores"].push_back(std::move(item));
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << doc.dump(2) << '\n';
}

IngestResult ingest_scores(const ScoresFile& file, const std::vector<std::string>& feature_names,
                           const IngestOptions& options) {
  for (const ScoreRecord& record : file.scores) {
    if (record.importance < options.range_min || record.importance > options.range_max)
      throw Error(ErrorCode::RangeViolation,
                  "score id '" + record.id + "' has importance " + std::to_string(record.importance) +
                      " outside declared range [" + std::to_string(options.range_min) + ", " +
                      std::to_string(options.range_max) + "]",
                  record.id);
  }

  IngestResult result;
  const std::size_t p = feature_names.size();
  Vector values(static_cast<Eigen::Index>(p));

  if (options.by_order) {
    if (file.scores.size() != p)
      throw Error(ErrorCode::DimensionMismatch,
                  "order-based ingest needs exactly one score per feature; got " +
                      std::to_string(file.scores.size()) + " scores for " + std::to_string(p) +
                      " features");
    for (std::size_t j = 0; j < p; ++j) values[static_cast<Eigen::Index>(j)] = file.scores[j].importance;
  } else {
    std::unordered_map<std::string, const ScoreRecord*> by_name;
    for (const ScoreRecord& record : file.scores) {
      if (!by_name.emplace(record.name, &record).second)
        throw Error(ErrorCode::ParseError, "duplicate score name '" + record.name + "'", record.id);
    }
    std::unordered_set<std::string> used;
    for (std::size_t j = 0; j < p; ++j) {
      const auto it = by_name.find(feature_names[j]);
      if (it != by_name.end()) {
        values[static_cast<Eigen::Index>(j)] = it->second->importance;
        used.insert(feature_names[j]);
      } else if (options.fill_missing) {
        values[static_cast<Eigen::Index>(j)] = options.range_min;
        result.filled_features.push_back(feature_names[j]);
        result.warnings.push_back("feature '" + feature_names[j] + "' had no score; assigned " +
                                  std::to_string(options.range_min));
      } else {
        throw Error(ErrorCode::MissingFeature,
                    "dataset feature '" + feature_names[j] + "' has no score record (use the "
                    "fill-missing option to assign the range minimum)",
                    feature_names[j]);
      }
    }
    for (const ScoreRecord& record : file.scores)
      if (!used.count(record.name)) result.unmatched_scores.push_back(record.name);
  }

  result.weights = WeightVector::make(std::move(values));
  return result;
}

WeightVector aggregate_weight_draws(const std::vector<WeightVector>& draws, AggregateMode mode) {
  if (draws.empty()) throw Error(ErrorCode::EmptyData, "no weight vectors to aggregate");
  const std::size_t p = draws.front().size();
  for (const WeightVector& w : draws)
    if (w.size() != p)
      throw Error(ErrorCode::DimensionMismatch, "weight vectors differ in length");

  Vector out(static_cast<Eigen::Index>(p));
  if (mode == AggregateMode::Mean) {
    out.setZero();
    for (const WeightVector& w : draws) out += w.values;
    out /= static_cast<double>(draws.size());
  } else {
    std::vector<double> column(draws.size());
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < draws.size(); ++i)
        column[i] = draws[i].values[static_cast<Eigen::Index>(j)];
      std::sort(column.begin(), column.end());
      const std::size_t mid = column.size() / 2;
      out[static_cast<Eigen::Index>(j)] =
          (column.size() % 2 == 1) ? column[mid] : 0.5 * (column[mid - 1] + column[mid]);
    }
  }
  return WeightVector::make(std::move(out));
}

}  // namespace lsp
