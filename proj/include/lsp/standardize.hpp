#pragma once
// Centering (and optional unit-variance scaling) of regression data. The
// intercept is never penalized anywhere in the toolkit: it is removed here by
// centering and reconstructed from the record after fitting.

#include "lsp/types.hpp"

#include <utility>
#include <vector>

namespace lsp {

struct CenteringRecord {
  double y_mean = 0.0;
  Vector x_means;
  Vector x_scales;                     // all ones unless unit_variance was requested
  std::vector<std::size_t> constant_columns;  // zero-variance columns, retained but flagged
  bool scaled = false;

  // Intercept for coefficients expressed on the original feature scale.
  double intercept_for(const Vector& beta_original) const {
    return y_mean - x_means.dot(beta_original);
  }

  // Maps coefficients fitted on the standardized design back to the original scale.
  Vector unscale_beta(const Vector& beta_standardized) const {
    return beta_standardized.cwiseQuotient(x_scales);
  }
};

// Returns data with zero-mean y and zero-mean columns of X. With
// unit_variance, non-constant columns are additionally divided by their
// sample standard deviation. Requires n >= 2.
std::pair<RegressionData, CenteringRecord> standardize(const RegressionData& data,
                                                       bool unit_variance = false);

}  // namespace lsp
