#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsp/rng.hpp"
#include "lsp/weight_metrics.hpp"

#include "oracles.hpp"

using namespace lsp;

namespace {

InclusionVector gam(std::vector<std::uint8_t> flags) { return InclusionVector::make(std::move(flags)); }

WeightVector wvec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) v[i++] = value;
  return WeightVector::make(std::move(v));
}

}  // namespace

TEST_CASE("phi_l1 worked examples") {
  CHECK(phi_l1(gam({1, 1, 0, 0}), wvec({5, 5, 1, 1})).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(phi_l1(gam({0, 1}), wvec({5, 1})).value == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(phi_l1(gam({0, 0, 0, 1, 1}), wvec({1, 2, 3, 4, 5})).value ==
        doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("phi_pairwise worked examples") {
  CHECK(phi_pairwise(gam({1, 0}), wvec({5, 1})).value == doctest::Approx(1.0));
  CHECK(phi_pairwise(gam({1, 0}), wvec({3, 3})).value == doctest::Approx(0.5));
  CHECK(phi_pairwise(gam({1, 1, 0}), wvec({1, 2, 3})).value ==
        doctest::Approx(1.0 - 5.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("phi_plugin") {
  const auto gamma = gam({1, 0, 1});
  const auto w = wvec({4, 1, 3});
  CHECK(phi_plugin(gamma, w, MetricKind::L1).value == phi_l1(gamma, w).value);
  CHECK(phi_plugin(gamma, w, MetricKind::Pairwise).value == phi_pairwise(gamma, w).value);
  CHECK(phi_plugin(gam({0, 0}), wvec({1, 2}), MetricKind::L1).value == doctest::Approx(0.5));
  CHECK(phi_plugin(gam({1, 1}), wvec({1, 2}), MetricKind::L1).value == doctest::Approx(0.5));
}

TEST_CASE("metric errors") {
  CHECK_THROWS_AS(phi_l1(gam({1, 0}), wvec({2, 2})), Error);
  try {
    phi_l1(gam({1, 0}), wvec({2, 2}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateWeights);
  }
  CHECK_THROWS_AS(phi_l1(gam({1, 0, 1}), wvec({1, 2})), Error);
  try {
    phi_pairwise(gam({1}), wvec({2}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PTooSmall);
  }
}

TEST_CASE("invariance to increasing affine transforms") {
  Rng rng(101, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 2 + rng.below(8);
    std::vector<std::uint8_t> flags(p);
    Vector w(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
      flags[j] = static_cast<std::uint8_t>(rng.below(2));
      w[static_cast<Eigen::Index>(j)] = 1.0 + static_cast<double>(rng.below(5));
    }
    if (w.minCoeff() == w.maxCoeff()) continue;
    const double a = 0.5 + 2.0 * rng.uniform();
    const double b = 3.0 * rng.uniform();
    Vector w2 = (a * w.array() + b).matrix();

    const auto gamma = InclusionVector::make(flags);
    const auto w1v = WeightVector::make(w);
    const auto w2v = WeightVector::make(w2);
    CHECK(phi_l1(gamma, w1v).value == doctest::Approx(phi_l1(gamma, w2v).value).epsilon(1e-12));
    CHECK(phi_pairwise(gamma, w1v).value ==
          doctest::Approx(phi_pairwise(gamma, w2v).value).epsilon(1e-12));
  }
}

TEST_CASE("complement symmetry of phi_l1") {
  Rng rng(77, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 2 + rng.below(10);
    std::vector<std::uint8_t> flags(p), flipped(p);
    Vector w(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
      flags[j] = static_cast<std::uint8_t>(rng.below(2));
      flipped[j] = static_cast<std::uint8_t>(1 - flags[j]);
      w[static_cast<Eigen::Index>(j)] = 1.0 + 4.0 * rng.uniform();
    }
    if (w.minCoeff() == w.maxCoeff()) continue;
    const auto weights = WeightVector::make(w);
    const double total = phi_l1(InclusionVector::make(flags), weights).value +
                         phi_l1(InclusionVector::make(flipped), weights).value;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pairwise equals one iff active weights strictly dominate") {
  // exhaustive over p <= 5, w entries in {1..3}, gamma nonconstant
  for (std::size_t p = 2; p <= 5; ++p) {
    const std::size_t gamma_limit = std::size_t{1} << p;
    std::size_t w_limit = 1;
    for (std::size_t j = 0; j < p; ++j) w_limit *= 3;
    for (std::size_t gbits = 1; gbits + 1 < gamma_limit; ++gbits) {
      for (std::size_t wcode = 0; wcode < w_limit; ++wcode) {
        std::vector<std::uint8_t> flags(p);
        Vector w(static_cast<Eigen::Index>(p));
        std::size_t code = wcode;
        double min_active = 1e9, max_inactive = -1e9;
        for (std::size_t j = 0; j < p; ++j) {
          flags[j] = (gbits >> j) & 1;
          w[static_cast<Eigen::Index>(j)] = 1.0 + static_cast<double>(code % 3);
          code /= 3;
          if (flags[j])
            min_active = std::min(min_active, w[static_cast<Eigen::Index>(j)]);
          else
            max_inactive = std::max(max_inactive, w[static_cast<Eigen::Index>(j)]);
        }
        const double value =
            phi_pairwise(InclusionVector::make(flags), WeightVector::make(w)).value;
        const bool separated = min_active > max_inactive;
        CHECK((value == 1.0) == separated);
      }
    }
  }
}

TEST_CASE("uniform random weights score about one half") {
  Rng rng(2024, 0);
  const std::size_t p = 60;
  std::vector<std::uint8_t> flags(p, 0);
  for (std::size_t j = 0; j < p / 2; ++j) flags[j] = 1;
  const auto gamma = InclusionVector::make(flags);

  double total = 0.0;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    Vector w(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j)
      w[static_cast<Eigen::Index>(j)] = 1.0 + static_cast<double>(rng.below(5));
    total += phi_l1(gamma, WeightVector::make(w)).value;
  }
  CHECK(total / draws == doctest::Approx(0.5).epsilon(0.04));  // +-0.02 absolute
}

TEST_CASE("agreement metrics match the direct transcription") {
  Rng rng(5150, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t p = 2 + rng.below(9);
    std::vector<int> gamma_int(p);
    std::vector<std::uint8_t> flags(p);
    std::vector<double> w_std(p);
    Vector w(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
      gamma_int[j] = static_cast<int>(rng.below(2));
      flags[j] = static_cast<std::uint8_t>(gamma_int[j]);
      w_std[j] = 1.0 + static_cast<double>(rng.below(5));
      w[static_cast<Eigen::Index>(j)] = w_std[j];
    }
    const auto gamma = InclusionVector::make(flags);
    const auto weights = WeightVector::make(w);
    if (w.minCoeff() < w.maxCoeff()) {
      CHECK(phi_l1(gamma, weights).value ==
            doctest::Approx(oracle::phi_l1_direct(gamma_int, w_std)).epsilon(1e-14));
    }
    CHECK(phi_pairwise(gamma, weights).value ==
          doctest::Approx(oracle::phi_pairwise_direct(gamma_int, w_std)).epsilon(1e-14));
  }
}
