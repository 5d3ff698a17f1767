#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsp/rng.hpp"
#include "lsp/sim.hpp"
#include "lsp/ssl.hpp"
#include "lsp/standardize.hpp"

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

}  // namespace

TEST_CASE("conditional inclusion probability") {
  CHECK(conditional_inclusion_prob(0.7, 0.5, 2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(conditional_inclusion_prob(-1.3, 0.5, 2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(conditional_inclusion_prob(50.0, 0.5, 10.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(conditional_inclusion_prob(0.0, 0.5, 10.0, 1.0) ==
        doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  // extreme tails stay finite
  CHECK(conditional_inclusion_prob(1e4, 0.5, 200.0, 1.0) == 1.0);
  CHECK(conditional_inclusion_prob(0.0, 1e-12, 200.0, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("equal penalties reduce the descent to the plain Lasso") {
  Rng rng(9, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 30 + 5 * trial, p = 8 + 2 * trial;
    Vector beta = Vector::Zero(static_cast<Eigen::Index>(p));
    beta[0] = 2.0;
    beta[2] = -1.0;
    const RegressionData data = gaussian_data(n, p, 50 + trial, &beta);
    auto [centered, record] = standardize(data);

    const double lambda = 3.0;
    SslSpec spec;
    spec.lambda1 = lambda;
    spec.tol = 1e-12;
    spec.max_iterations = 20000;
    Vector theta_w(static_cast<Eigen::Index>(p));
    for (Eigen::Index j = 0; j < theta_w.size(); ++j) theta_w[j] = 1.0 + (j % 5);
    const WeightVector w = WeightVector::make(theta_w);

    const Vector ours = ssl_coordinate_descent(centered, w, spec, lambda, 0.7, 0.3, Vector());
    const Vector reference =
        oracle::ista_lasso(centered.X, centered.y, Vector::Constant(centered.X.cols(), lambda));
    CHECK((ours - reference).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("orthonormal design gives the soft-threshold solution") {
  Rng rng(4, 0);
  const std::size_t n = 40, p = 6;
  Matrix raw(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < raw.rows(); ++i)
    for (Eigen::Index j = 0; j < raw.cols(); ++j) raw(i, j) = rng.normal();
  const Eigen::HouseholderQR<Matrix> qr(raw);
  Matrix X = qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(p));
  Vector y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = rng.normal() * 2.0;

  // keep the design orthonormal: skip centering, feed the data in directly
  const RegressionData data = RegressionData::make(y, X);
  SslSpec spec;
  spec.lambda1 = 1.0;
  spec.tol = 1e-13;
  const WeightVector w = WeightVector::constant(p, 2.0);
  const Vector beta = ssl_coordinate_descent(data, w, spec, 1.0, 0.0, 0.5, Vector());
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    const double z = X.col(j).dot(y);
    const double expected = z > 1.0 ? z - 1.0 : (z < -1.0 ? z + 1.0 : 0.0);
    CHECK(beta[j] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("dominant spike penalty zeroes a pure-noise fit") {
  const std::size_t n = 40, p = 10;
  const RegressionData data = gaussian_data(n, p, 123);
  auto [centered, record] = standardize(data);
  SslSpec spec;
  const WeightVector w = WeightVector::constant(p, 1.0);
  const Vector beta = ssl_coordinate_descent(centered, w, spec, static_cast<double>(n), 0.0,
                                             1.0 / (1.0 + p), Vector());
  CHECK(beta.lpNorm<Eigen::Infinity>() == 0.0);

  // the all-zero point beats nearby perturbations
  const Vector theta = Vector::Constant(static_cast<Eigen::Index>(p), 1.0 / (1.0 + p));
  const double at_zero =
      ssl_objective(centered, theta, spec, static_cast<double>(n), Vector::Zero(p));
  Rng rng(1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Vector perturbed = Vector::Zero(p);
    perturbed[static_cast<Eigen::Index>(rng.below(p))] = 0.2 * rng.normal();
    CHECK(at_zero <= ssl_objective(centered, theta, spec, static_cast<double>(n), perturbed) + 1e-9);
  }
}

TEST_CASE("objective never increases across cycles") {
  Vector beta = Vector::Zero(12);
  beta[1] = 1.0;
  beta[5] = -2.0;
  const RegressionData data = gaussian_data(60, 12, 17, &beta);
  auto [centered, record] = standardize(data);
  SslSpec spec;
  spec.check_monotone = true;
  const WeightVector w = WeightVector::constant(12, 1.0);
  CHECK_NOTHROW(ssl_coordinate_descent(centered, w, spec, 12.0, 0.0, 0.08, Vector()));
}

TEST_CASE("warm and cold starts agree near the convex end") {
  Vector beta = Vector::Zero(8);
  beta[0] = 1.4;
  const RegressionData data = gaussian_data(50, 8, 23, &beta);
  auto [centered, record] = standardize(data);
  SslSpec spec;
  spec.tol = 1e-12;
  spec.max_iterations = 50000;
  const WeightVector w = WeightVector::constant(8, 1.0);
  const double lambda0 = 1.2;  // close to lambda1 = 1: near-convex objective

  const Vector cold = ssl_coordinate_descent(centered, w, spec, lambda0, 0.0, 0.2, Vector());
  Vector warm_start = Vector::Constant(8, 0.4);
  const Vector warm = ssl_coordinate_descent(centered, w, spec, lambda0, 0.0, 0.2, warm_start);
  CHECK((cold - warm).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("eta selection favors zero when forced or uninformative") {
  Vector beta = Vector::Zero(10);
  beta[0] = 2.0;
  beta[1] = 2.0;
  const RegressionData data = gaussian_data(60, 10, 31, &beta);
  auto [centered, record] = standardize(data);

  SslSpec spec;
  spec.lsp.b_s = 10.0;
  spec.lsp.eta_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<double> candidates = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  SUBCASE("pi0 = 1 leaves only the baseline candidate") {
    spec.lsp.pi0 = 1.0;
    Vector wv(10);
    for (Eigen::Index j = 0; j < 10; ++j) wv[j] = 1.0 + (j % 5);
    const EtaSelection pick = select_eta_for_lambda0(centered, WeightVector::make(wv), spec, 5.0,
                                                     candidates, Vector::Zero(10), 0.09);
    CHECK(pick.eta == 0.0);
  }

  SUBCASE("constant weights break the tie toward zero") {
    spec.lsp.pi0 = 0.5;
    const EtaSelection pick = select_eta_for_lambda0(centered, WeightVector::constant(10, 3.0),
                                                     spec, 5.0, candidates, Vector::Zero(10), 0.09);
    CHECK(pick.eta == 0.0);
  }
}

TEST_CASE("informative weights get a positive eta on strong signals") {
  std::size_t positive = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Vector beta = Vector::Zero(20);
    beta[0] = 3.0;
    beta[1] = 3.0;
    beta[2] = 3.0;
    const RegressionData data = gaussian_data(80, 20, 400 + seed, &beta);
    Vector wv(20);
    for (Eigen::Index j = 0; j < 20; ++j) wv[j] = j < 3 ? 5.0 : 1.0;  // perfect weights
    const WeightVector w = WeightVector::make(wv);
    SslSpec spec;
    const SslPath path = run_path(data, &w, spec, RngSeed{seed, 0});
    positive += path.points[path.chosen_index].eta > 0.0 ? 1 : 0;
  }
  CHECK(positive >= 23);
}

TEST_CASE("path properties on a sparse fixture") {
  Vector beta = Vector::Zero(30);
  for (Eigen::Index j = 0; j < 5; ++j) beta[j] = 1.0;
  const RegressionData data = gaussian_data(60, 30, 71, &beta);
  const WeightVector w = WeightVector::constant(30, 1.0);
  SslSpec spec;
  const SslPath path = run_path(data, &w, spec, RngSeed{1, 0});

  REQUIRE(path.points.size() == spec.grid_size);
  // support sizes mostly shrink as the spike penalty grows
  std::size_t violations = 0, steps = 0;
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    steps += 1;
    violations += path.points[i].support.size() > path.points[i - 1].support.size() ? 1 : 0;
  }
  CHECK(static_cast<double>(violations) <= 0.05 * static_cast<double>(steps) + 1.0);

  // the chosen index minimizes the recorded BIC
  for (const SslPoint& point : path.points) CHECK(path.points[path.chosen_index].bic <= point.bic);

  // BIC values recompute from the stored coefficients
  auto [centered, record] = standardize(data);
  for (const SslPoint& point : path.points) {
    const double rss = (centered.y - centered.X * point.beta).squaredNorm();
    const double n = static_cast<double>(centered.n());
    const double again =
        n * std::log(std::max(rss, 1e-300) / n) + static_cast<double>(point.support.size()) * std::log(n);
    CHECK(point.bic == doctest::Approx(again).epsilon(1e-10));
  }
}

TEST_CASE("null data keep the selected model tiny") {
  std::size_t small = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RegressionData data = gaussian_data(50, 20, 900 + seed);
    const SslPath path = run_path(data, nullptr, SslSpec{}, RngSeed{seed, 0});
    small += path.points[path.chosen_index].support.size() <= 1 ? 1 : 0;
  }
  CHECK(small >= 45);
}

TEST_CASE("pi0 = 1 reproduces the baseline path exactly") {
  Vector beta = Vector::Zero(15);
  beta[2] = 1.5;
  beta[9] = -1.0;
  const RegressionData data = gaussian_data(45, 15, 88, &beta);
  Rng wrng(3, 0);
  Vector wv(15);
  for (Eigen::Index j = 0; j < 15; ++j) wv[j] = 1.0 + static_cast<double>(wrng.below(5));
  const WeightVector w = WeightVector::make(wv);

  SslSpec pinned;
  pinned.lsp.pi0 = 1.0;
  const SslPath with_weights = run_path(data, &w, pinned, RngSeed{4, 0});
  const SslPath baseline = run_path(data, nullptr, SslSpec{}, RngSeed{4, 0});

  REQUIRE(with_weights.points.size() == baseline.points.size());
  CHECK(with_weights.chosen_index == baseline.chosen_index);
  for (std::size_t i = 0; i < baseline.points.size(); ++i) {
    CHECK((with_weights.points[i].beta - baseline.points[i].beta).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(with_weights.points[i].eta == 0.0);
    CHECK(with_weights.points[i].bic == baseline.points[i].bic);
  }
}
