#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsp/weight_metrics.hpp"
#include "lsp/weight_synth.hpp"

#include <cmath>

using namespace lsp;

namespace {

double quartic_residual(double phi, double r) {
  const double mu = 4.0 * (1.0 - phi);
  return (4.0 - mu) * r * r * r * r + (3.0 - mu) * r * r * r + (2.0 - mu) * r * r +
         (1.0 - mu) * r - mu;
}

double pmf_expectation(const std::array<double, 5>& pmf) {
  double e = 0.0;
  for (int d = 0; d < 5; ++d) e += d * pmf[static_cast<std::size_t>(d)];
  return e;
}

InclusionVector active_prefix(std::size_t p, std::size_t k) {
  std::vector<std::uint8_t> flags(p, 0);
  for (std::size_t j = 0; j < k; ++j) flags[j] = 1;
  return InclusionVector::make(std::move(flags));
}

}  // namespace

TEST_CASE("solve_ratio endpoints are exact") {
  CHECK(solve_ratio(1.0) == 0.0);
  CHECK(solve_ratio(0.5) == 1.0);
}

TEST_CASE("solve_ratio residual and implied expectation") {
  for (double phi = 0.5; phi <= 1.0 + 1e-12; phi += 0.05) {
    const double r = solve_ratio(phi);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    CHECK(std::abs(quartic_residual(phi, r)) < 1e-12);
    const DeviationModel model = DeviationModel::from_phi(phi);
    CHECK(std::abs(pmf_expectation(model.pmf) - model.mu) < 1e-9);
  }
  CHECK_THROWS_AS(solve_ratio(0.4), Error);
  CHECK_THROWS_AS(solve_ratio(1.1), Error);
}

TEST_CASE("deviation model pmf properties") {
  for (double phi : {0.55, 0.7, 0.8, 0.93}) {
    const DeviationModel model = DeviationModel::from_phi(phi);
    double total = 0.0;
    for (double v : model.pmf) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (int d = 0; d + 1 < 5; ++d) {
      if (model.pmf[static_cast<std::size_t>(d)] > 0.0)
        CHECK(model.pmf[static_cast<std::size_t>(d + 1)] /
                  model.pmf[static_cast<std::size_t>(d)] ==
              doctest::Approx(model.ratio).epsilon(1e-10));
    }
  }
}

TEST_CASE("largest remainder apportionment") {
  const std::vector<double> shares = {0.4, 0.4, 0.2};
  const auto counts = largest_remainder_counts(shares, 7);
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  CHECK(total == 7);
  CHECK(counts[0] == 3);  // 2.8 -> floor 2, largest remainder gets the extra
  CHECK(counts[1] == 3);
  CHECK(counts[2] == 1);
}

TEST_CASE("perfect weights have zero deviation") {
  const WeightVector w = generate_weights(active_prefix(4, 2), 1.0, RngSeed{1, 0});
  CHECK(w.values[0] == 5.0);
  CHECK(w.values[1] == 5.0);
  CHECK(w.values[2] == 1.0);
  CHECK(w.values[3] == 1.0);
}

TEST_CASE("random-quality weights hit the target at scale") {
  const InclusionVector active = active_prefix(10000, 200);
  const WeightVector w = generate_weights(active, 0.5, RngSeed{7, 0});
  CHECK(phi_l1(active, w).value == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("weights use only the five-value support") {
  const InclusionVector active = active_prefix(1000, 20);
  const WeightVector w = generate_weights(active, 0.9, RngSeed{9, 2});
  for (Eigen::Index j = 0; j < w.values.size(); ++j) {
    const double v = w.values[j];
    CHECK(v == std::floor(v));
    CHECK(v >= 1.0);
    CHECK(v <= 5.0);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  const InclusionVector active = active_prefix(300, 30);
  const WeightVector a = generate_weights(active, 0.8, RngSeed{5, 1});
  const WeightVector b = generate_weights(active, 0.8, RngSeed{5, 1});
  const WeightVector c = generate_weights(active, 0.8, RngSeed{5, 2});
  CHECK((a.values - b.values).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((a.values - c.values).lpNorm<Eigen::Infinity>() > 0.0);
}

TEST_CASE("per-group class counts follow largest-remainder apportionment") {
  const std::size_t p = 777, k = 41;
  const double phi = 0.77;
  const InclusionVector active = active_prefix(p, k);
  const WeightVector w = generate_weights(active, phi, RngSeed{3, 3});
  const DeviationModel model = DeviationModel::from_phi(phi);
  const auto active_counts = largest_remainder_counts(model.pmf, k);
  const auto inactive_counts = largest_remainder_counts(model.pmf, p - k);

  std::array<std::size_t, 5> observed_active{}, observed_inactive{};
  for (std::size_t j = 0; j < p; ++j) {
    const double v = w.values[static_cast<Eigen::Index>(j)];
    if (j < k)
      observed_active[static_cast<std::size_t>(5.0 - v)] += 1;  // active weight = 5 - d
    else
      observed_inactive[static_cast<std::size_t>(v - 1.0)] += 1;  // inactive weight = 1 + d
  }
  for (std::size_t d = 0; d < 5; ++d) {
    CHECK(observed_active[d] == active_counts[d]);
    CHECK(observed_inactive[d] == inactive_counts[d]);
  }
}

TEST_CASE("monotone calibration over the default grid") {
  const InclusionVector active = active_prefix(1000, 20);
  const auto grid = default_phi_grid();
  REQUIRE(grid.size() == 25);
  CHECK(grid.front() == 0.5);
  CHECK(grid.back() == 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto vectors = generate_grid(active, grid, RngSeed{seed, 0});
    REQUIRE(vectors.size() == grid.size());
    double previous = -1.0;
    for (const auto& w : vectors) {
      const double realized = phi_l1(active, w).value;
      CHECK(realized >= previous - 0.01);
      previous = std::max(previous, realized);
    }
  }
}

TEST_CASE("grid generation edge cases") {
  const InclusionVector active = active_prefix(400, 10);
  const std::vector<double> single = {1.0};
  CHECK(generate_grid(active, single, RngSeed{1, 0}).size() == 1);

  const std::vector<double> pair = {0.5, 1.0};
  const auto vectors = generate_grid(active, pair, RngSeed{1, 0});
  CHECK(phi_l1(active, vectors[0]).value == doctest::Approx(0.5).epsilon(0.1));
  CHECK(phi_l1(active, vectors[1]).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate and out-of-range inputs") {
  CHECK_THROWS_AS(generate_weights(active_prefix(10, 2), 0.3, RngSeed{1, 0}), Error);
  // one empty group is fine as long as the result is not constant
  const WeightVector w = generate_weights(active_prefix(100, 0), 0.7, RngSeed{1, 0});
  CHECK(w.values.minCoeff() < w.values.maxCoeff());
  // all-inactive at phi = 1 would be all ones
  try {
    generate_weights(active_prefix(10, 0), 1.0, RngSeed{1, 0});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateWeights);
  }
}
