#include "lsp/weight_metrics.hpp"

#include <cmath>

namespace lsp {

namespace {

void check_lengths(const InclusionVector& gamma, const WeightVector& w) {
  if (gamma.size() != w.size())
    throw Error(ErrorCode::DimensionMismatch, "gamma has length " + std::to_string(gamma.size()) +
                                                  " but weights have length " + std::to_string(w.size()));
}

}  // namespace

AgreementScore phi_l1(const InclusionVector& gamma, const WeightVector& w) {
  check_lengths(gamma, w);
  const double lo = w.values.minCoeff();
  const double hi = w.values.maxCoeff();
  if (hi == lo)
    throw Error(ErrorCode::DegenerateWeights, "phi_l1 requires max(w) > min(w); all weights equal " +
                                                  std::to_string(lo));
  const double range = hi - lo;
  const auto p = static_cast<Eigen::Index>(w.size());
  double dist = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double scaled = (w.values[j] - lo) / range;
    dist += std::abs(scaled - static_cast<double>(gamma.flags[static_cast<std::size_t>(j)]));
  }
  return AgreementScore{1.0 - dist / static_cast<double>(p), MetricKind::L1};
}

AgreementScore phi_pairwise(const InclusionVector& gamma, const WeightVector& w) {
  check_lengths(gamma, w);
  const auto p = static_cast<Eigen::Index>(w.size());
  if (p < 2) throw Error(ErrorCode::PTooSmall, "phi_pairwise requires p >= 2");
  // Disagreements over ordered pairs; both loops stay O(p^2), which is fine
  // for the sizes this metric is evaluated at.
  std::size_t disagreements = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i == j) continue;
      const bool mg = gamma.flags[static_cast<std::size_t>(i)] > gamma.flags[static_cast<std::size_t>(j)];
      const bool mw = w.values[i] > w.values[j];
      disagreements += (mg != mw) ? 1 : 0;
    }
  }
  const double denom = static_cast<double>(p) * static_cast<double>(p - 1);
  return AgreementScore{1.0 - static_cast<double>(disagreements) / denom, MetricKind::Pairwise};
}

AgreementScore phi_plugin(const InclusionVector& gamma_hat, const WeightVector& w, MetricKind kind) {
  return kind == MetricKind::L1 ? phi_l1(gamma_hat, w) : phi_pairwise(gamma_hat, w);
}

}  // namespace lsp
