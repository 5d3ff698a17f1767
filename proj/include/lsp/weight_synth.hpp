#pragma once
// Synthetic integer weight vectors in {1..5}^p calibrated to a target l1
// agreement. Deviations d from the ideal weight (5 for active features, 1 for
// inactive) follow a geometric-decay pmf proportional to r^d; r is the root
// of a quartic chosen so that E[D] = 4(1 - target_phi).

#include "lsp/rng.hpp"
#include "lsp/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace lsp {

struct DeviationModel {
  double target_phi = 1.0;
  double mu = 0.0;                    // 4 * (1 - target_phi)
  double ratio = 0.0;                 // geometric decay ratio r in [0, 1]
  std::array<double, 5> pmf{};        // P(D = d), d in 0..4

  static DeviationModel from_phi(double target_phi);
};

// Root r in [0, 1] of (4-mu)r^4 + (3-mu)r^3 + (2-mu)r^2 + (1-mu)r - mu = 0
// with mu = 4(1 - target_phi). Requires target_phi in [0.5, 1].
double solve_ratio(double target_phi);

// Integer weights in {1..5}: active features get 5-d, inactive features 1+d,
// with per-class counts assigned by largest-remainder rounding of
// group_size * pmf[d] and class membership shuffled within each group.
WeightVector generate_weights(const InclusionVector& active, double target_phi, RngSeed seed);

std::vector<WeightVector> generate_grid(const InclusionVector& active,
                                        std::span<const double> phi_grid, RngSeed seed);

// The 25-point grid {0.50, 0.60, 0.70, 0.75, 0.80, 0.81, ..., 1.00}.
std::vector<double> default_phi_grid();

// Largest-remainder apportionment of `total` units proportional to `shares`;
// exposed for tests. Ties go to the smaller index.
std::vector<std::size_t> largest_remainder_counts(std::span<const double> shares, std::size_t total);

}  // namespace lsp
