#include "lsp/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lsp {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DegenerateWeights: return "DegenerateWeights";
    case ErrorCode::PTooSmall: return "PTooSmall";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ThetaOverflow: return "ThetaOverflow";
    case ErrorCode::EtaNotOnGrid: return "EtaNotOnGrid";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidBudget: return "InvalidBudget";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

WeightVector WeightVector::make(Vector v) {
  if (v.size() == 0) throw Error(ErrorCode::EmptyData, "weight vector is empty");
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v[j]) || v[j] <= 0.0)
      throw Error(ErrorCode::OutOfRange,
                  "weights must be strictly positive and finite; offending index " + std::to_string(j),
                  "values[" + std::to_string(j) + "]");
  }
  return WeightVector{std::move(v)};
}

WeightVector WeightVector::constant(std::size_t p, double value) {
  return make(Vector::Constant(static_cast<Eigen::Index>(p), value));
}

std::size_t InclusionVector::count_active() const {
  return static_cast<std::size_t>(std::accumulate(flags.begin(), flags.end(), std::size_t{0}));
}

InclusionVector InclusionVector::make(std::vector<std::uint8_t> flags) {
  for (std::size_t j = 0; j < flags.size(); ++j) {
    if (flags[j] > 1)
      throw Error(ErrorCode::OutOfRange, "inclusion flags must be 0 or 1; offending index " + std::to_string(j),
                  "flags[" + std::to_string(j) + "]");
  }
  return InclusionVector{std::move(flags)};
}

InclusionVector InclusionVector::zeros(std::size_t p) {
  return InclusionVector{std::vector<std::uint8_t>(p, 0)};
}

RegressionData RegressionData::make(Vector y, Matrix X, std::vector<std::string> names) {
  if (y.size() == 0 || X.rows() == 0) throw Error(ErrorCode::EmptyData, "dataset has no rows");
  if (X.rows() != y.size())
    throw Error(ErrorCode::DimensionMismatch,
                "X has " + std::to_string(X.rows()) + " rows but y has " + std::to_string(y.size()));
  if (!y.allFinite() || !X.allFinite())
    throw Error(ErrorCode::NonFinite, "dataset contains NaN or infinite entries");
  if (!names.empty() && names.size() != static_cast<std::size_t>(X.cols()))
    throw Error(ErrorCode::DimensionMismatch,
                "feature_names has " + std::to_string(names.size()) + " entries for " +
                    std::to_string(X.cols()) + " columns");
  return RegressionData{std::move(y), std::move(X), std::move(names)};
}

void validate_dimensions(const RegressionData& data, const WeightVector& w) {
  if (data.n() == 0) throw Error(ErrorCode::EmptyData, "dataset has no rows");
  if (data.p() != w.size())
    throw Error(ErrorCode::DimensionMismatch, "design matrix has " + std::to_string(data.p()) +
                                                  " columns but weight vector has length " +
                                                  std::to_string(w.size()));
}

}  // namespace lsp
