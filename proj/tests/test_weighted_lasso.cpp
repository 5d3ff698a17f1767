#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsp/rng.hpp"
#include "lsp/standardize.hpp"
#include "lsp/weighted_lasso.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace lsp;

namespace {

RegressionData gaussian_data(std::size_t n, std::size_t p, std::uint64_t seed,
                             const Vector* beta = nullptr, double noise = 1.0) {
  Rng rng(seed, 0);
  Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = rng.normal();
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i)
    y[i] = (beta != nullptr ? X.row(i).dot(*beta) : 0.0) + noise * rng.normal();
  return RegressionData::make(std::move(y), std::move(X));
}

WeightVector random_integer_weights(std::size_t p, std::uint64_t seed) {
  Rng rng(seed, 3);
  Vector v(static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = 1.0 + static_cast<double>(rng.below(5));
  return WeightVector::make(std::move(v));
}

}  // namespace

TEST_CASE("eta zero recovers the plain Lasso") {
  Vector beta = Vector::Zero(10);
  beta[0] = 2.0;
  beta[4] = -1.5;
  const RegressionData data = gaussian_data(40, 10, 11, &beta);
  auto [centered, record] = standardize(data);
  const WeightVector w = random_integer_weights(10, 5);

  const Vector weighted = weighted_lasso_fit(centered, w, 0.0, 2.5);
  const Vector plain = weighted_lasso_fit(centered, WeightVector::constant(10, 1.0), 0.0, 2.5);
  CHECK((weighted - plain).lpNorm<Eigen::Infinity>() < 1e-10);

  const Vector reference =
      oracle::ista_lasso(centered.X, centered.y, Vector::Constant(10, 2.5));
  CHECK((weighted - reference).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("orthonormal design closed form with penalty factors") {
  Rng rng(8, 0);
  const std::size_t n = 50, p = 5;
  Matrix raw(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < raw.rows(); ++i)
    for (Eigen::Index j = 0; j < raw.cols(); ++j) raw(i, j) = rng.normal();
  const Eigen::HouseholderQR<Matrix> qr(raw);
  const Matrix X = qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(n),
                                                        static_cast<Eigen::Index>(p));
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = 3.0 * rng.normal();
  const RegressionData data = RegressionData::make(y, X);

  const WeightVector w = random_integer_weights(p, 2);
  const double lambda = 0.8, eta = 1.3;
  const Vector beta = weighted_lasso_fit(data, w, eta, lambda, 20000, 1e-13);
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double z = X.col(j).dot(y);
    const double thr = lambda * std::pow(w.values[j], -eta);
    const double expected = z > thr ? z - thr : (z < -thr ? z + thr : 0.0);
    CHECK(beta[j] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("constant weights rescale the penalty") {
  Vector beta = Vector::Zero(8);
  beta[1] = 1.0;
  const RegressionData data = gaussian_data(35, 8, 21, &beta);
  auto [centered, record] = standardize(data);
  const double c = 3.0, eta = 1.7, lambda = 2.0;
  const Vector via_weights =
      weighted_lasso_fit(centered, WeightVector::constant(8, c), eta, lambda, 20000, 1e-12);
  const Vector via_lambda = weighted_lasso_fit(centered, WeightVector::constant(8, 1.0), 0.0,
                                               lambda * std::pow(c, -eta), 20000, 1e-12);
  CHECK((via_weights - via_lambda).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("kkt conditions hold at solutions") {
  Rng rng(14, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 30 + 4 * trial, p = 6 + trial;
    Vector beta = Vector::Zero(static_cast<Eigen::Index>(p));
    beta[0] = 2.0;
    const RegressionData data = gaussian_data(n, p, 600 + trial, &beta);
    auto [centered, record] = standardize(data);
    const WeightVector w = random_integer_weights(p, 700 + trial);
    const double eta = 2.0 * rng.uniform();
    const double lambda = 0.5 + 4.0 * rng.uniform();
    const Vector fit = weighted_lasso_fit(centered, w, eta, lambda, 50000, 1e-12);
    CHECK(max_kkt_violation(centered, w, eta, lambda, fit) < 1e-6);
  }
}

TEST_CASE("penalty scaling equivalence") {
  Vector beta = Vector::Zero(9);
  beta[3] = 1.2;
  const RegressionData data = gaussian_data(40, 9, 33, &beta);
  auto [centered, record] = standardize(data);
  const WeightVector w = random_integer_weights(9, 44);
  const double eta = 1.1, lambda = 1.5, c = 2.5;

  Vector scaled_values = c * w.values;
  const WeightVector scaled = WeightVector::make(scaled_values);
  // (lambda, w) and (lambda / c^{-eta}, c w) give the same thresholds
  const Vector a = weighted_lasso_fit(centered, w, eta, lambda, 30000, 1e-12);
  const Vector b =
      weighted_lasso_fit(centered, scaled, eta, lambda / std::pow(c, -eta), 30000, 1e-12);
  CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("support shrinks along the lambda grid") {
  Vector beta = Vector::Zero(15);
  for (Eigen::Index j = 0; j < 4; ++j) beta[j] = 1.0;
  const RegressionData data = gaussian_data(50, 15, 55, &beta);
  auto [centered, record] = standardize(data);
  const WeightVector w = WeightVector::constant(15, 1.0);

  LassoCvSpec spec;
  const std::vector<double> lambdas = spec.lambda_grid();
  std::size_t previous = 0;
  std::size_t inversions = 0;
  bool first = true;
  for (double lambda : lambdas) {
    const Vector fit = weighted_lasso_fit(centered, w, 0.0, lambda, 10000, 1e-9);
    std::size_t support = 0;
    for (Eigen::Index j = 0; j < fit.size(); ++j) support += fit[j] != 0.0 ? 1 : 0;
    if (!first && support > previous) inversions += 1;
    previous = support;
    first = false;
  }
  CHECK(inversions <= 1);
}

TEST_CASE("cv grids match their declared shapes") {
  const LassoCvSpec spec;
  const auto etas = spec.eta_grid();
  REQUIRE(etas.size() == 11);
  CHECK(etas.front() == 0.0);
  CHECK(etas.back() == 10.0);
  CHECK(etas[1] == doctest::Approx(1.0));

  const auto lambdas = spec.lambda_grid();
  REQUIRE(lambdas.size() == 100);
  CHECK(std::log(lambdas.front()) == doctest::Approx(-2.27).epsilon(1e-12));
  CHECK(std::log(lambdas.back()) == doctest::Approx(2.34).epsilon(1e-12));
}

TEST_CASE("two-stage cv on informative and uninformative weights") {
  // strong signal + perfect weights: eta should move off zero most of the time
  std::size_t positive = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Vector beta = Vector::Zero(30);
    beta[0] = 2.0;
    beta[1] = 2.0;
    beta[2] = 2.0;
    Rng rng(4000 + seed, 0);
    Matrix X(40, 30);
    for (Eigen::Index i = 0; i < 40; ++i) {
      const double z = rng.normal();
      for (Eigen::Index j = 0; j < 30; ++j)
        X(i, j) = std::sqrt(0.5) * z + std::sqrt(0.5) * rng.normal();
    }
    Vector y(40);
    for (Eigen::Index i = 0; i < 40; ++i) y[i] = X.row(i).dot(beta) + rng.normal();
    const RegressionData data = RegressionData::make(y, X);

    Vector wv(30);
    for (Eigen::Index j = 0; j < 30; ++j) wv[j] = j < 3 ? 5.0 : 1.0;
    LassoCvSpec spec;
    spec.folds = 5;
    const TwoStageCvResult fit =
        two_stage_cv(data, WeightVector::make(wv), spec, RngSeed{seed, 0});
    positive += fit.eta > 0.0 ? 1 : 0;
  }
  CHECK(positive >= 20);

  // random weights: a decent share of the mass stays at low eta
  std::size_t low = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Vector beta = Vector::Zero(30);
    beta[0] = 2.0;
    beta[1] = 2.0;
    beta[2] = 2.0;
    const RegressionData data = gaussian_data(40, 30, 5000 + seed, &beta);
    const WeightVector w = random_integer_weights(30, 6000 + seed);
    LassoCvSpec spec;
    spec.folds = 5;
    const TwoStageCvResult fit = two_stage_cv(data, w, spec, RngSeed{seed, 1});
    low += fit.eta <= 1.0 ? 1 : 0;
  }
  CHECK(low >= 10);
}

TEST_CASE("cv determinism, leave-one-out, and data checks") {
  Vector beta = Vector::Zero(6);
  beta[0] = 1.5;
  const RegressionData data = gaussian_data(24, 6, 77, &beta);
  const WeightVector w = random_integer_weights(6, 9);

  LassoCvSpec spec;
  spec.folds = 4;
  const TwoStageCvResult a = two_stage_cv(data, w, spec, RngSeed{3, 0});
  const TwoStageCvResult b = two_stage_cv(data, w, spec, RngSeed{3, 0});
  CHECK(a.eta == b.eta);
  CHECK(a.lambda == b.lambda);
  CHECK((a.beta - b.beta).lpNorm<Eigen::Infinity>() == 0.0);

  // leave-one-out is allowed and reproducible
  LassoCvSpec loo;
  loo.folds = 24;
  loo.eta_count = 3;
  loo.eta_max = 2.0;
  loo.lambda_count = 12;
  const TwoStageCvResult c = two_stage_cv(data, w, loo, RngSeed{5, 0});
  const TwoStageCvResult d = two_stage_cv(data, w, loo, RngSeed{5, 0});
  CHECK(c.lambda == d.lambda);
  CHECK((c.beta - d.beta).lpNorm<Eigen::Infinity>() == 0.0);

  LassoCvSpec bad;
  bad.folds = 20;  // n = 24 < 2 * folds and folds != n
  CHECK_THROWS_AS(two_stage_cv(data, w, bad, RngSeed{1, 0}), Error);
}

TEST_CASE("selection frequency") {
  std::vector<Vector> fits;
  fits.push_back(Vector::Zero(2));
  CHECK(selection_frequency(fits).lpNorm<Eigen::Infinity>() == 0.0);

  Vector one(2);
  one << 1.0, 0.0;
  fits = {one};
  const Vector freq = selection_frequency(fits);
  CHECK(freq[0] == 1.0);
  CHECK(freq[1] == 0.0);

  Vector other(2);
  other << 0.0, -2.0;
  fits = {one, other};
  const Vector half = selection_frequency(fits);
  CHECK(half[0] == 0.5);
  CHECK(half[1] == 0.5);

  fits.push_back(Vector::Zero(3));
  CHECK_THROWS_AS(selection_frequency(fits), Error);
}
