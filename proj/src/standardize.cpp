#include "lsp/standardize.hpp"

#include <cmath>

namespace lsp {

std::pair<RegressionData, CenteringRecord> standardize(const RegressionData& data, bool unit_variance) {
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto p = static_cast<Eigen::Index>(data.p());
  if (n < 2) throw Error(ErrorCode::EmptyData, "standardize requires at least two rows");

  CenteringRecord record;
  record.scaled = unit_variance;
  record.y_mean = data.y.mean();
  record.x_means = data.X.colwise().mean();
  record.x_scales = Vector::Ones(p);

  Vector y = data.y.array() - record.y_mean;
  Matrix X = data.X.rowwise() - record.x_means.transpose();

  for (Eigen::Index j = 0; j < p; ++j) {
    const double ss = X.col(j).squaredNorm();
    if (ss == 0.0) {
      record.constant_columns.push_back(static_cast<std::size_t>(j));
      continue;
    }
    if (unit_variance) {
      const double sd = std::sqrt(ss / static_cast<double>(n - 1));
      record.x_scales[j] = sd;
      X.col(j) /= sd;
    }
  }

  return {RegressionData{std::move(y), std::move(X), data.feature_names}, std::move(record)};
}

}  // namespace lsp
