#include "doctest.h"
#include "rsfft/noise.hpp"

#include <cmath>
#include <set>

#include "rsfft/rng.hpp"

using namespace rsfft;

namespace {

BooleanSpectrum two_sparse(int n) {
  BooleanSpectrum f(n);
  f.set(0b001, 1.5);
  f.set(0b110, 0.5);
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("noise");

TEST_CASE("noiseless oracle returns the function exactly") {
  const auto truth = two_sparse(3);
  NoiseParams params;
  params.seed = 1;
  BooleanOracle oracle(truth, params);
  for (std::uint64_t x = 0; x < 8; ++x) {
    const FreqVec p(x, 3);
    CHECK(oracle.query(p) == boolean_eval(truth, p));
  }
  CHECK(oracle.stats().query_count == 8);
  CHECK(oracle.stats().outlier_count == 0);
}

TEST_CASE("worst-sign inliers sit exactly at the error bound") {
  const auto truth = two_sparse(3);
  NoiseParams params;
  params.epsilon = 0.1;
  params.inlier = InlierStrategy::kWorstSign;
  params.seed = 2;
  BooleanOracle oracle(truth, params);
  for (std::uint64_t x = 0; x < 8; ++x) {
    const FreqVec p(x, 3);
    const double err = std::abs(oracle.query(p) - boolean_eval(truth, p));
    CHECK(err <= 0.1 + 1e-15);
    CHECK(err == doctest::Approx(0.1));
  }
}

TEST_CASE("uniform inliers respect the bound") {
  const auto truth = two_sparse(3);
  NoiseParams params;
  params.epsilon = 0.25;
  params.seed = 3;
  BooleanOracle oracle(truth, params);
  for (int t = 0; t < 2000; ++t) {
    const FreqVec p(static_cast<std::uint64_t>(t) % 8, 3);
    CHECK(std::abs(oracle.query(p) - boolean_eval(truth, p)) <= 0.25 + 1e-15);
  }
}

TEST_CASE("empirical outlier rate concentrates") {
  const auto truth = two_sparse(3);
  NoiseParams params;
  params.rho = 0.3;
  params.epsilon = 0.0;
  params.outlier = OutlierStrategy::kZero;
  params.seed = 4;
  BooleanOracle oracle(truth, params);
  Rng rng(5);
  for (int t = 0; t < 10000; ++t) oracle.query(FreqVec(rng.below(8), 3));
  const auto stats = oracle.stats();
  const double rate = static_cast<double>(stats.outlier_count) / 10000.0;
  CHECK(std::abs(rate - 0.3) < 0.02);
}

TEST_CASE("determinism: same params and query sequence, same answers") {
  const auto truth = two_sparse(3);
  NoiseParams params;
  params.rho = 0.4;
  params.epsilon = 0.05;
  params.seed = 6;
  BooleanOracle a(truth, params);
  BooleanOracle b(truth, params);
  Rng rng(7);
  for (int t = 0; t < 500; ++t) {
    const FreqVec p(rng.below(8), 3);
    CHECK(a.query(p) == b.query(p));
  }
}

TEST_CASE("random model re-randomizes repeat queries") {
  const auto truth = two_sparse(3);
  NoiseParams params;
  params.rho = 0.5;
  params.epsilon = 0.0;
  params.outlier = OutlierStrategy::kZero;
  params.seed = 8;
  BooleanOracle oracle(truth, params);
  const FreqVec p(0b011, 3);
  const double fx = boolean_eval(truth, p);
  int inliers = 0, outliers = 0;
  for (int t = 0; t < 1000; ++t) {
    if (oracle.query(p) == fx)
      ++inliers;
    else
      ++outliers;
  }
  CHECK(inliers > 0);
  CHECK(outliers > 0);
}

TEST_CASE("adversarial model is a fixed corrupted function") {
  const auto truth = two_sparse(3);
  NoiseParams params;
  params.rho = 0.4;
  params.epsilon = 0.03;
  params.model = NoiseModel::kAdversarial;
  params.seed = 9;
  BooleanOracle oracle(truth, params);
  for (std::uint64_t x = 0; x < 8; ++x) {
    const FreqVec p(x, 3);
    const double first = oracle.query(p);
    for (int r = 0; r < 10; ++r) CHECK(oracle.query(p) == first);
  }
}

TEST_CASE("adversarial corruption marks exactly floor(rho * 2^n) points") {
  const int n = 8;
  BooleanSpectrum truth(n);
  truth.set(0b1, 1.0);
  NoiseParams params;
  params.rho = 0.1;
  params.epsilon = 0.0;
  params.model = NoiseModel::kAdversarial;
  params.outlier = OutlierStrategy::kLargeConstant;
  params.seed = 10;
  BooleanOracle oracle(truth, params);
  int corrupted = 0;
  for (std::uint64_t x = 0; x < 256; ++x) {
    const FreqVec p(x, n);
    if (oracle.query(p) != boolean_eval(truth, p)) ++corrupted;
  }
  CHECK(corrupted == static_cast<int>(0.1 * 256));
}

TEST_CASE("outlier strategy catalog") {
  CHECK(outlier_strategy_names().size() == 3);
  CHECK_THROWS(outlier_strategy_from_name("nonsense"));

  const auto truth = two_sparse(3);  // norm1 = 2
  NoiseParams params;
  params.rho = 1.0 - 1e-12;  // almost every query is an outlier
  params.seed = 11;

  params.outlier = OutlierStrategy::kZero;
  BooleanOracle zero(truth, params);
  CHECK(zero.query(FreqVec(0, 3)) == 0.0);

  params.outlier = OutlierStrategy::kLargeConstant;
  BooleanOracle big(truth, params);
  CHECK(big.query(FreqVec(0, 3)) == doctest::Approx(20.0));

  params.outlier = OutlierStrategy::kDecoy;
  BooleanSpectrum decoy(3);
  decoy.set(0b111, -0.75);
  BooleanOracle dec(truth, params, decoy);
  for (std::uint64_t x = 0; x < 8; ++x) {
    const FreqVec p(x, 3);
    CHECK(std::abs(dec.query(p) - boolean_eval(decoy, p)) < 1e-12);
  }
}

TEST_CASE("torus oracle: inlier bound, stickiness, separation audit") {
  TorusSpectrum truth(8);
  truth.set(3, cplx{1.0, 0.0});
  truth.set(-5, cplx{0.0, -0.5});

  NoiseParams params;
  params.epsilon = 0.02;
  params.seed = 12;
  TorusOracle oracle(truth, params);
  Rng rng(13);
  for (int t = 0; t < 500; ++t) {
    const double x = rng.uniform01();
    CHECK(std::abs(oracle.query(x) - torus_eval(truth, x)) <= 0.02 + 1e-15);
  }

  oracle.register_batch({0.1, 0.4, 0.425});
  oracle.register_batch({0.2, 0.7});
  const auto stats = oracle.stats();
  REQUIRE(stats.batch_separation.has_value());
  CHECK(*stats.batch_separation == doctest::Approx(0.025));
  REQUIRE(stats.global_separation.has_value());

  NoiseParams sticky = params;
  sticky.rho = 0.5;
  sticky.model = NoiseModel::kRandomSticky;
  TorusOracle fixed(truth, sticky);
  for (int t = 0; t < 20; ++t) {
    const double x = rng.uniform01();
    const cplx first = fixed.query(x);
    CHECK(fixed.query(x) == first);
  }
}

TEST_CASE("rho validation") {
  NoiseParams bad;
  bad.rho = 1.0;
  CHECK_THROWS(bad.validate());
  bad.rho = -0.1;
  CHECK_THROWS(bad.validate());
  bad.rho = 0.0;
  bad.epsilon = -1.0;
  CHECK_THROWS(bad.validate());
}

TEST_SUITE_END();
