#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsp/prior.hpp"
#include "lsp/rng.hpp"

#include <cmath>

using namespace lsp;

namespace {

WeightVector wvec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) v[i++] = value;
  return WeightVector::make(std::move(v));
}

WeightVector random_weights(Rng& rng, std::size_t p) {
  Vector v(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j)
    v[static_cast<Eigen::Index>(j)] = 1.0 + static_cast<double>(rng.below(5));
  return WeightVector::make(std::move(v));
}

}  // namespace

TEST_CASE("theta worked examples") {
  const auto w = wvec({1, 2});
  const ThetaVector theta = compute_theta(w, 0.1, 1.0);
  CHECK(theta.values[0] == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  CHECK(theta.values[1] == doctest::Approx(2.0 / 15.0).epsilon(1e-12));

  const ThetaVector uniform = compute_theta(wvec({1, 3, 5}), 0.1, 0.0);
  for (Eigen::Index j = 0; j < 3; ++j) CHECK(uniform.values[j] == doctest::Approx(0.1).epsilon(1e-14));

  const ThetaVector constant = compute_theta(wvec({4, 4, 4}), 0.3, 7.5);
  for (Eigen::Index j = 0; j < 3; ++j) CHECK(constant.values[j] == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("theta mean preservation on random draws") {
  Rng rng(88, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t p = 2 + rng.below(40);
    const WeightVector w = random_weights(rng, p);
    const double s = 0.01 + 0.5 * rng.uniform();
    const EtaBound bound = eta_max(w, s);
    const double cap = bound.unbounded ? 8.0 : 0.95 * bound.value;
    const double eta = cap * rng.uniform();
    const ThetaVector theta = compute_theta(w, s, eta);
    CHECK(theta.values.mean() == doctest::Approx(s).epsilon(1e-12));
    for (Eigen::Index j = 0; j < theta.values.size(); ++j) {
      CHECK(theta.values[j] > 0.0);
      CHECK(theta.values[j] < 1.0);
    }
  }
}

TEST_CASE("theta is monotone in weights and contrast grows with eta") {
  const auto w = wvec({1, 2, 3, 4, 5});
  double previous_ratio = 1.0;
  for (double eta : {0.0, 0.3, 0.8, 1.5, 2.5}) {
    const ThetaVector theta = compute_theta(w, 0.05, eta);
    for (Eigen::Index j = 0; j + 1 < 5; ++j) {
      if (eta > 0.0) CHECK(theta.values[j] < theta.values[j + 1]);
    }
    const double ratio = theta.values[4] / theta.values[0];
    CHECK(ratio >= previous_ratio - 1e-12);
    previous_ratio = ratio;
  }
}

TEST_CASE("eta near zero recovers the uniform prior") {
  const auto w = wvec({1, 2, 3, 4, 5});
  const ThetaVector theta = compute_theta(w, 0.2, 1e-12);
  for (Eigen::Index j = 0; j < 5; ++j) CHECK(std::abs(theta.values[j] - 0.2) < 1e-9);
}

TEST_CASE("eta_max boundary behavior") {
  // sp < 1: unbounded
  CHECK(eta_max(wvec({2}), 0.5).unbounded);
  // constant weights: theta = s for every eta
  CHECK(eta_max(wvec({3, 3, 3}), 0.9).unbounded);

  Rng rng(31, 0);
  Vector v(100);
  for (Eigen::Index j = 0; j < 100; ++j) v[j] = 1.0 + static_cast<double>(rng.below(5));
  v[0] = 5.0;
  v[1] = 1.0;  // ensure the max/min ratio is exactly 5
  const WeightVector w = WeightVector::make(v);
  const double s = 0.1;

  const EtaBound bound = eta_max(w, s);
  REQUIRE(!bound.unbounded);
  const double loose = loose_eta_bound(w, s);
  CHECK(loose == doctest::Approx(std::log(99.0 / 9.0) / std::log(5.0)).epsilon(1e-12));
  CHECK(bound.value >= loose - 1e-9);

  CHECK_NOTHROW(compute_theta(w, s, 0.999 * bound.value));
  CHECK_THROWS_AS(compute_theta(w, s, 1.001 * bound.value), Error);
  try {
    compute_theta(w, s, 1.001 * bound.value);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ThetaOverflow);
  }
}

TEST_CASE("log prior over inclusion vectors") {
  ThetaVector half{Vector::Constant(3, 0.5)};
  CHECK(log_prior_gamma(InclusionVector::zeros(3), half) ==
        doctest::Approx(3.0 * std::log(0.5)).epsilon(1e-14));

  ThetaVector theta{Vector::Constant(2, 0.2)};
  CHECK(log_prior_gamma(InclusionVector::make({1, 0}), theta) ==
        doctest::Approx(std::log(0.2) + std::log(0.8)).epsilon(1e-14));

  // probabilities over all 2^3 vectors sum to one
  Vector tv(3);
  tv << 0.1, 0.45, 0.77;
  ThetaVector mixed{tv};
  double total = 0.0;
  for (int bits = 0; bits < 8; ++bits) {
    std::vector<std::uint8_t> flags = {static_cast<std::uint8_t>(bits & 1),
                                       static_cast<std::uint8_t>((bits >> 1) & 1),
                                       static_cast<std::uint8_t>((bits >> 2) & 1)};
    total += std::exp(log_prior_gamma(InclusionVector::make(flags), mixed));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero-inflated discrete uniform hyperprior") {
  LspConfig config;
  config.b_s = 10.0;
  config.pi0 = 0.5;
  for (int k = 1; k <= 10; ++k) config.eta_grid.push_back(k);

  CHECK(log_hyperprior_eta(0.0, config) == doctest::Approx(std::log(0.5)));
  CHECK(log_hyperprior_eta(3.0, config) == doctest::Approx(std::log(0.05)));
  CHECK_THROWS_AS(log_hyperprior_eta(3.5, config), Error);

  config.pi0 = 1.0;
  CHECK(log_hyperprior_eta(4.0, config) == -std::numeric_limits<double>::infinity());
  CHECK(log_hyperprior_eta(0.0, config) == doctest::Approx(0.0));
}

TEST_CASE("config defaults and finalize") {
  const LspConfig unbounded = LspConfig::defaults_for(200);
  CHECK(unbounded.b_s == 200.0);
  CHECK(unbounded.pi0 == 0.5);
  REQUIRE(unbounded.eta_grid.size() == 10);
  CHECK(unbounded.eta_grid.front() == 1.0);
  CHECK(unbounded.eta_grid.back() == 10.0);

  // bounded case: grid is ten equal steps ending at eta_max for the prior-mean s
  Vector v(20);
  for (Eigen::Index j = 0; j < 20; ++j) v[j] = (j < 10) ? 5.0 : 1.0;
  const WeightVector w = WeightVector::make(v);
  LspConfig config;
  config.a_s = 5.0;
  config.b_s = 5.0;  // reference s = 0.5, s*p = 10 > multiplicity of the max
  config.finalize(20, &w);
  REQUIRE(config.eta_grid.size() == 10);
  const EtaBound bound = eta_max(w, 0.5);
  REQUIRE(!bound.unbounded);
  CHECK(config.eta_grid.back() == doctest::Approx(bound.value).epsilon(1e-12));
  CHECK(config.eta_grid.front() == doctest::Approx(bound.value / 10.0).epsilon(1e-12));

  LspConfig bad;
  bad.b_s = 1.0;
  bad.eta_grid = {1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), Error);
}
