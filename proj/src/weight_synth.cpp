#include "lsp/weight_synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lsp {

namespace {

double quartic(double mu, double r) {
  return (((4.0 - mu) * r + (3.0 - mu)) * r + (2.0 - mu)) * r * r + (1.0 - mu) * r - mu;
}

void check_phi_range(double target_phi) {
  if (!(target_phi >= 0.5 && target_phi <= 1.0))
    throw Error(ErrorCode::OutOfRange,
                "target phi must lie in [0.5, 1]; got " + std::to_string(target_phi), "target_phi");
}

}  // namespace

double solve_ratio(double target_phi) {
  check_phi_range(target_phi);
  const double mu = 4.0 * (1.0 - target_phi);
  if (mu == 0.0) return 0.0;  // all deviations zero
  if (mu == 2.0) return 1.0;  // uniform deviations
  // One sign change on [0, 1]: f(0) = -mu < 0, f(1) = 10 - 5 mu > 0.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (quartic(mu, mid) < 0.0 ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  // Newton polish to push the residual to rounding level.
  for (int it = 0; it < 4; ++it) {
    const double f = quartic(mu, r);
    const double df = ((4.0 * (4.0 - mu) * r + 3.0 * (3.0 - mu)) * r + 2.0 * (2.0 - mu)) * r + (1.0 - mu);
    if (df == 0.0) break;
    const double next = r - f / df;
    if (next >= 0.0 && next <= 1.0) r = next;
  }
  return r;
}

DeviationModel DeviationModel::from_phi(double target_phi) {
  DeviationModel m;
  m.target_phi = target_phi;
  m.mu = 4.0 * (1.0 - target_phi);
  m.ratio = solve_ratio(target_phi);
  double power = 1.0, total = 0.0;
  for (std::size_t d = 0; d < 5; ++d) {
    m.pmf[d] = power;
    total += power;
    power *= m.ratio;
  }
  for (double& v : m.pmf) v /= total;
  return m;
}

std::vector<std::size_t> largest_remainder_counts(std::span<const double> shares, std::size_t total) {
  const std::size_t k = shares.size();
  std::vector<std::size_t> counts(k, 0);
  std::vector<double> remainders(k, 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = shares[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainders[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < total; ++i) {
    counts[order[i % k]] += 1;
    ++assigned;
  }
  return counts;
}

WeightVector generate_weights(const InclusionVector& active, double target_phi, RngSeed seed) {
  check_phi_range(target_phi);
  const std::size_t p = active.size();
  if (p == 0) throw Error(ErrorCode::EmptyData, "inclusion vector is empty");

  const DeviationModel model = DeviationModel::from_phi(target_phi);
  Rng rng(seed);

  Vector w(static_cast<Eigen::Index>(p));
  std::vector<std::size_t> group[2];
  for (std::size_t j = 0; j < p; ++j) group[active.flags[j]].push_back(j);

  for (int g = 0; g < 2; ++g) {
    auto& members = group[g];
    if (members.empty()) continue;
    rng.shuffle(members);
    const auto counts = largest_remainder_counts(model.pmf, members.size());
    std::size_t pos = 0;
    for (std::size_t d = 0; d < 5; ++d) {
      const double weight = (g == 1) ? 5.0 - static_cast<double>(d) : 1.0 + static_cast<double>(d);
      for (std::size_t c = 0; c < counts[d]; ++c) w[static_cast<Eigen::Index>(members[pos++])] = weight;
    }
  }

  if (w.minCoeff() == w.maxCoeff())
    throw Error(ErrorCode::DegenerateWeights,
                "generated weights are constant (" + std::to_string(w.minCoeff()) + ")");
  return WeightVector{std::move(w)};
}

std::vector<WeightVector> generate_grid(const InclusionVector& active,
                                        std::span<const double> phi_grid, RngSeed seed) {
  std::vector<WeightVector> out;
  out.reserve(phi_grid.size());
  for (std::size_t i = 0; i < phi_grid.size(); ++i)
    out.push_back(generate_weights(active, phi_grid[i], seed.derive(i)));
  return out;
}

std::vector<double> default_phi_grid() {
  std::vector<double> grid = {0.50, 0.60, 0.70, 0.75};
  for (int k = 80; k <= 100; ++k) grid.push_back(static_cast<double>(k) / 100.0);
  return grid;
}

}  // namespace lsp
