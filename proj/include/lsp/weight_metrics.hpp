#pragma once
// Agreement metrics between a weight vector and an inclusion vector, plus the
// plug-in variant that substitutes an estimated inclusion vector.

#include "lsp/types.hpp"

namespace lsp {

enum class MetricKind { L1, Pairwise };

struct AgreementScore {
  double value = 0.0;  // in [0, 1]
  MetricKind kind = MetricKind::L1;
};

// 1 - (1/p) * || minmax(w) - gamma ||_1. Requires max(w) > min(w).
AgreementScore phi_l1(const InclusionVector& gamma, const WeightVector& w);

// 1 - sum_{i != j} |1(gamma_i > gamma_j) - 1(w_i > w_j)| / (p(p-1)).
// Ties contribute zero to both indicator matrices. Requires p >= 2. When
// gamma is constant the gamma matrix is all-zero and the score only measures
// spurious orderings in w; the value is still returned (callers may warn).
AgreementScore phi_pairwise(const InclusionVector& gamma, const WeightVector& w);

// Same computations with gamma-hat in place of the ground truth; the result
// is an empirical-alignment measure, not alignment with the true support.
AgreementScore phi_plugin(const InclusionVector& gamma_hat, const WeightVector& w, MetricKind kind);

}  // namespace lsp
