#include <doctest.h>

#include <cmath>

#include "qosrec/predictors.hpp"
#include "support/test_util.hpp"

using namespace qosrec;
using qosrec::testing::from_rows;
using qosrec::testing::random_matrix;

TEST_SUITE_BEGIN("predictors");

namespace {

std::unique_ptr<Predictor> fitted(const std::string& id, const QosMatrix& train,
                                  MethodOptions options = {}) {
  auto p = make_predictor(id, options);
  p->fit(train);
  return p;
}

}  // namespace

TEST_CASE("umean is the user's row mean with a global fallback") {
  const QosMatrix train = from_rows({{0.2, 0.4, -1}, {-1, -1, -1}, {0.6, -1, -1}});
  const auto p = fitted("umean", train);
  CHECK(p->predict(0, 2) == doctest::Approx(0.3).epsilon(1e-12));
  // empty row falls back to the global mean (0.2+0.4+0.6)/3
  CHECK(p->predict(1, 0) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("umean on a published-style row") {
  const QosMatrix train = from_rows({{5.982, 0.228, 0.237}});
  CHECK(fitted("umean", train)->predict(0, 1) == doctest::Approx(2.149).epsilon(1e-12));
}

TEST_CASE("imean is the service's column mean with a global fallback") {
  const QosMatrix train = from_rows({{0.3, -1}, {0.5, -1}});
  const auto p = fitted("imean", train);
  CHECK(p->predict(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(p->predict(1, 1) == doctest::Approx(0.4).epsilon(1e-12));  // empty column
}

TEST_CASE("imean on a published-style column") {
  const QosMatrix train = from_rows({{0.228}, {0.262}, {0.366}});
  CHECK(fitted("imean", train)->predict(2, 0) ==
        doctest::Approx((0.228 + 0.262 + 0.366) / 3.0).epsilon(1e-12));
}

TEST_CASE("upcc single-neighbor prediction follows the deviation formula") {
  // users 0 and 1 agree perfectly on services 0-2 (sim 1); user 1 also rated
  // service 3 with deviation 0.5 - 0.4 = 0.1 from its own mean
  const QosMatrix train = from_rows({
      {0.2, 0.3, 0.4, -1.0},
      {0.3, 0.4, 0.4, 0.5},
  });
  MethodOptions options;
  options.hp.topk_neighbors = 5;
  const auto p = fitted("upcc", train, options);
  const double u0_mean = 0.3;
  const double u1_mean = 0.4;
  CHECK(p->predict(0, 3) == doctest::Approx(u0_mean + (0.5 - u1_mean)).epsilon(1e-12));
}

TEST_CASE("upcc falls back to umean without a usable neighbor") {
  // user 1 anti-correlates with user 0, so no positive-similarity neighbor
  const QosMatrix train = from_rows({
      {0.2, 0.3, 0.4, -1.0},
      {0.4, 0.3, 0.2, 0.5},
  });
  const auto p = fitted("upcc", train);
  CHECK(p->predict(0, 3) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("upcc with symmetric neighbors cancels deviations") {
  // users 1 and 2 both correlate perfectly with user 0 and their deviations
  // on the target service are +0.1 and -0.1
  const QosMatrix train = from_rows({
      {0.2, 0.3, 0.4, -1.0},
      {0.3, 0.4, 0.5, 0.5},
      {0.4, 0.5, 0.6, 0.4},
  });
  const auto p = fitted("upcc", train);
  const double u1_dev = 0.5 - (0.3 + 0.4 + 0.5 + 0.5) / 4.0;
  const double u2_dev = 0.4 - (0.4 + 0.5 + 0.6 + 0.4) / 4.0;
  const double expected = 0.3 + (u1_dev + u2_dev) / 2.0;  // equal unit weights
  CHECK(p->predict(0, 3) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ipcc mirrors upcc over the item axis") {
  // services 0 and 1 agree perfectly across users 0-2; user 3 rated only
  // service 1, deviation 0.5 - mean(s1)
  const QosMatrix train = from_rows({
      {0.2, 0.3},
      {0.3, 0.4},
      {0.4, 0.4},
      {-1.0, 0.5},
  });
  MethodOptions options;
  options.hp.topk_neighbors = 5;
  const auto p = fitted("ipcc", train, options);
  const double s0_mean = 0.3;
  const double s1_mean = 0.4;
  CHECK(p->predict(3, 0) == doctest::Approx(s0_mean + (0.5 - s1_mean)).epsilon(1e-12));

  // user with no ratings in any correlated column -> imean fallback
  const QosMatrix anti = from_rows({
      {0.2, 0.4},
      {0.3, 0.3},
      {0.4, 0.2},
      {-1.0, 0.5},
  });
  const auto q = fitted("ipcc", anti);
  const double s0_mean_anti = 0.3;
  CHECK(q->predict(3, 0) == doctest::Approx(s0_mean_anti).epsilon(1e-12));
}

TEST_CASE("wsrec blend weights follow the confidence formula") {
  CHECK(wsrec_blend(0.4, 0.6, 0.7, 0.7, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wsrec_blend(0.4, 0.6, 0.8, 0.2, 0.5) == doctest::Approx(0.44).epsilon(1e-12));
  // lambda_mix at the ends selects a single component
  CHECK(wsrec_blend(0.4, 0.6, 0.8, 0.2, 1.0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(wsrec_blend(0.4, 0.6, 0.8, 0.2, 0.0) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("wsrec at lambda_mix 1 equals upcc wherever upcc has neighbors") {
  Rng rng(2211);
  const QosMatrix source = random_matrix(12, 12, 0.9, rng, 0.1, 2.0);
  const TrainTestSplit split = split_by_density(source, 0.6, 5);
  MethodOptions options;
  options.wsrec_lambda_mix = 1.0;
  const auto ws = fitted("wsrec", split.train, options);
  const auto up = fitted("upcc", split.train, options);
  const auto um = fitted("umean", split.train, options);
  for (std::size_t u = 0; u < source.users(); ++u) {
    for (std::size_t s = 0; s < source.services(); ++s) {
      if (!split.test.observed(u, s)) continue;
      const double upcc_value = up->predict(u, s);
      // identical only where upcc did not itself fall back to umean
      if (upcc_value != um->predict(u, s)) {
        REQUIRE(ws->predict(u, s) == doctest::Approx(upcc_value).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("wsrec degrades to the global mean when nothing is usable") {
  // two users, no common service: no PCC similarity on either axis
  const QosMatrix train = from_rows({{0.2, -1.0, -1.0}, {-1.0, 0.4, -1.0}});
  const auto p = fitted("wsrec", train);
  CHECK(p->predict(0, 2) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("biassvd fits a rank-1 matrix") {
  Rng rng(99);
  const std::size_t size = 15;
  QosMatrix train(size, size);
  std::vector<double> a(size), c(size);
  for (auto& v : a) v = rng.uniform(0.5, 1.5);
  for (auto& v : c) v = rng.uniform(0.5, 1.5);
  for (std::size_t u = 0; u < size; ++u) {
    for (std::size_t s = 0; s < size; ++s) train.set(u, s, a[u] * c[s]);
  }
  MethodOptions options;
  options.hp.factors = 3;
  options.hp.lambda = 1e-4;
  options.hp.alpha0 = 0.05;
  options.hp.decay = 1.0;
  options.hp.max_epochs = 400;
  options.hp.tol = 1e-10;
  const auto p = fitted("biassvd", train, options);
  double se = 0.0;
  for (std::size_t u = 0; u < size; ++u) {
    for (std::size_t s = 0; s < size; ++s) {
      const double e = p->predict(u, s) - train.value(u, s);
      se += e * e;
    }
  }
  CHECK(std::sqrt(se / static_cast<double>(size * size)) < 0.01);
}

TEST_CASE("biassvd with zero factors reduces to the baseline estimate") {
  Rng rng(123);
  const QosMatrix train = random_matrix(8, 8, 0.8, rng, 0.1, 2.0);
  MethodOptions options;
  options.hp.factors = 0;
  const auto p = fitted("biassvd", train, options);
  // rebuild the same baseline-only model: same trainer, beta pinned to 0
  Hyperparams hp = options.hp;
  hp.beta = 0.0;
  const auto [params, trace] = train_hybrid(train, SimilarityMatrix(), hp);
  for (std::size_t u = 0; u < 8; ++u) {
    for (std::size_t s = 0; s < 8; ++s) {
      const double expected = std::max(hp.prediction_floor, baseline_estimate(params, u, s));
      REQUIRE(p->predict(u, s) == expected);
    }
  }
}

TEST_CASE("biassvd is deterministic under the seed") {
  Rng rng(321);
  const QosMatrix train = random_matrix(10, 10, 0.7, rng, 0.1, 2.0);
  MethodOptions options;
  options.hp.factors = 4;
  options.hp.seed = 7;
  options.hp.max_epochs = 20;
  const auto p1 = fitted("biassvd", train, options);
  const auto p2 = fitted("biassvd", train, options);
  for (std::size_t u = 0; u < 10; ++u) {
    for (std::size_t s = 0; s < 10; ++s) {
      REQUIRE(p1->predict(u, s) == p2->predict(u, s));
    }
  }
}

TEST_CASE("every predictor returns finite values over a sparse test mask") {
  Rng rng(55);
  const QosMatrix source = random_matrix(15, 15, 0.95, rng, 0.05, 4.0);
  const TrainTestSplit split = split_by_density(source, 0.1, 3);  // harshly sparse
  MethodOptions options;
  options.hp.factors = 4;
  options.hp.max_epochs = 10;
  for (const auto& id : registered_methods()) {
    const auto p = fitted(id, split.train, options);
    for (std::size_t u = 0; u < source.users(); ++u) {
      for (std::size_t s = 0; s < source.services(); ++s) {
        if (!split.test.observed(u, s)) continue;
        const double v = p->predict(u, s);
        REQUIRE_MESSAGE(std::isfinite(v), id, " produced a non-finite prediction");
      }
    }
  }
}

TEST_CASE("the registry rejects out-of-scope and unknown methods") {
  CHECK_THROWS_AS(make_predictor("gm", {}), NotImplementedError);
  CHECK_THROWS_AS(make_predictor("cloudrank2", {}), NotImplementedError);
  CHECK_THROWS_AS(make_predictor("netflix", {}), std::invalid_argument);
  CHECK(registered_methods().size() == 7);
}

TEST_SUITE_END();
