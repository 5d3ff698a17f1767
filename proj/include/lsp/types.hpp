#pragma once
// Shared domain types and the error taxonomy used across the toolkit.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lsp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  DimensionMismatch,
  EmptyData,
  NonFinite,
  DegenerateWeights,
  PTooSmall,
  OutOfRange,
  ThetaOverflow,
  EtaNotOnGrid,
  NonConvergence,
  InvalidBudget,
  InsufficientData,
  NumericalFailure,
  ParseError,
  RangeViolation,
  MissingFeature,
  ConfigError,
  UnknownCommand,
  IoError,
};

const char* error_code_name(ErrorCode code);

// All library failures surface as Error; `code()` is stable and machine
// readable, `field()` names the offending input/record when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string field = {})
      : std::runtime_error(std::move(message)), code_(code), field_(std::move(field)) {}

  ErrorCode code() const { return code_; }
  const std::string& field() const { return field_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
  std::string field_;
};

// Positive importance weights, one per feature. Ordinal integer scores in
// practice, but any positive reals are accepted.
struct WeightVector {
  Vector values;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }

  static WeightVector make(Vector v);
  static WeightVector constant(std::size_t p, double value);
};

// Binary inclusion flags: ground truth gamma* or an estimate gamma-hat.
struct InclusionVector {
  std::vector<std::uint8_t> flags;

  std::size_t size() const { return flags.size(); }
  std::size_t count_active() const;

  static InclusionVector make(std::vector<std::uint8_t> flags);
  static InclusionVector zeros(std::size_t p);
};

// Response y and n x p design matrix; feature names optional (empty or length p).
struct RegressionData {
  Vector y;
  Matrix X;
  std::vector<std::string> feature_names;

  std::size_t n() const { return static_cast<std::size_t>(y.size()); }
  std::size_t p() const { return static_cast<std::size_t>(X.cols()); }

  static RegressionData make(Vector y, Matrix X, std::vector<std::string> names = {});
};

void validate_dimensions(const RegressionData& data, const WeightVector& w);

}  // namespace lsp
