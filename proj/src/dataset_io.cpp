#include "lsp/dataset_io.hpp"

#include "lsp/io_util.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace lsp {

namespace {

// Minimal CSV splitter: handles double-quoted fields with embedded commas and
// doubled quotes; no multi-line fields.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  if (in_quotes)
    throw Error(ErrorCode::ParseError, "unterminated quote on line " + std::to_string(line_no));
  fields.push_back(current);
  return fields;
}

double parse_strict_double(const std::string& token, std::size_t line_no, const std::string& column) {
  std::size_t begin = token.find_first_not_of(" \t");
  if (begin == std::string::npos)
    throw Error(ErrorCode::ParseError, "empty numeric field on line " + std::to_string(line_no), column);
  std::size_t end = token.find_last_not_of(" \t") + 1;
  double value = 0.0;
  const char* first = token.data() + begin;
  const char* last = token.data() + end;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw Error(ErrorCode::ParseError,
                "invalid numeric field '" + token + "' on line " + std::to_string(line_no), column);
  if (!std::isfinite(value))
    throw Error(ErrorCode::NonFinite,
                "non-finite value '" + token + "' on line " + std::to_string(line_no), column);
  return value;
}

}  // namespace

RegressionData load_dataset_csv(const std::string& path, const std::string& response_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "missing header row", path);
  const std::vector<std::string> header = split_csv_line(line, 1);

  std::ptrdiff_t response_idx = -1;
  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == response_column) {
      if (response_idx >= 0)
        throw Error(ErrorCode::ParseError, "duplicate response column '" + response_column + "'");
      response_idx = static_cast<std::ptrdiff_t>(j);
    } else {
      feature_names.push_back(header[j]);
    }
  }
  if (response_idx < 0)
    throw Error(ErrorCode::ParseError, "response column '" + response_column + "' not found in header");
  if (feature_names.empty()) throw Error(ErrorCode::ParseError, "no feature columns in header");

  std::vector<double> ys;
  std::vector<double> xs;  // row-major
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != header.size())
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + " has " +
                                             std::to_string(fields.size()) + " fields, expected " +
                                             std::to_string(header.size()));
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const double v = parse_strict_double(fields[j], line_no, header[j]);
      if (static_cast<std::ptrdiff_t>(j) == response_idx)
        ys.push_back(v);
      else
        xs.push_back(v);
    }
  }
  if (ys.empty()) throw Error(ErrorCode::EmptyData, "dataset has no rows", path);

  const auto n = static_cast<Eigen::Index>(ys.size());
  const auto p = static_cast<Eigen::Index>(feature_names.size());
  Vector y = Eigen::Map<Vector>(ys.data(), n);
  Matrix X(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = xs[static_cast<std::size_t>(i * p + j)];

  return RegressionData::make(std::move(y), std::move(X), std::move(feature_names));
}

RegressionData load_dataset_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what(), path);
  }
  if (!doc.contains("y") || !doc["y"].is_array())
    throw Error(ErrorCode::ParseError, "missing array field 'y'", "y");
  if (!doc.contains("features") || !doc["features"].is_array())
    throw Error(ErrorCode::ParseError, "missing array field 'features'", "features");

  const auto& jy = doc["y"];
  const auto n = static_cast<Eigen::Index>(jy.size());
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!jy[static_cast<std::size_t>(i)].is_number())
      throw Error(ErrorCode::ParseError, "y entries must be numbers", "y[" + std::to_string(i) + "]");
    y[i] = jy[static_cast<std::size_t>(i)].get<double>();
  }

  const auto& jf = doc["features"];
  const auto p = static_cast<Eigen::Index>(jf.size());
  if (p == 0) throw Error(ErrorCode::ParseError, "no feature columns", "features");
  Matrix X(n, p);
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto& col = jf[static_cast<std::size_t>(j)];
    const std::string field = "features[" + std::to_string(j) + "]";
    if (!col.is_object() || !col.contains("name") || !col.contains("values"))
      throw Error(ErrorCode::ParseError, "feature entries need 'name' and 'values'", field);
    names.push_back(col["name"].get<std::string>());
    const auto& vals = col["values"];
    if (static_cast<Eigen::Index>(vals.size()) != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "feature '" + names.back() + "' has " + std::to_string(vals.size()) +
                      " values, expected " + std::to_string(n),
                  field);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!vals[static_cast<std::size_t>(i)].is_number())
        throw Error(ErrorCode::ParseError, "feature values must be numbers", field);
      X(i, j) = vals[static_cast<std::size_t>(i)].get<double>();
    }
  }

  return RegressionData::make(std::move(y), std::move(X), std::move(names));
}

void save_dataset_csv(const std::string& path, const RegressionData& data,
                      const std::string& response_column) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << response_column;
  for (std::size_t j = 0; j < data.p(); ++j) {
    out << ',' << (data.feature_names.empty() ? "x" + std::to_string(j + 1) : data.feature_names[j]);
  }
  out << '\n';
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << format_double(data.y[static_cast<Eigen::Index>(i)]);
    for (std::size_t j = 0; j < data.p(); ++j)
      out << ',' << format_double(data.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out << '\n';
  }
}

}  // namespace lsp
