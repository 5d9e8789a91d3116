#include <doctest.h>

#include <sstream>

#include "qosrec/run_config.hpp"

using namespace qosrec;

TEST_SUITE_BEGIN("run_config");

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in, "test.json");
}

}  // namespace

TEST_CASE("an empty config takes the paper defaults") {
  const RunConfig rc = parse("{}");
  const Hyperparams& hp = rc.cfg.method.hp;
  CHECK(hp.lambda == 0.01);
  CHECK(hp.alpha0 == 0.02);
  CHECK(hp.beta == 0.6);
  CHECK(hp.factors == 50);
  CHECK(hp.topk_neighbors == 20);
  CHECK(hp.topk_list == 20);
  CHECK(rc.cfg.user_num == 100);
  CHECK(rc.cfg.service_num == 100);
  CHECK(rc.cfg.repetitions == 10);
  CHECK(rc.cfg.attribute == Preference::kSmallerIsBetter);
  CHECK(rc.cfg.selection == Selection::kFirstN);
  CHECK(rc.densities.empty());
  CHECK(rc.density_grid() == std::vector<double>{0.1});
  CHECK(rc.methods == registered_methods());
}

TEST_CASE("explicit keys override the defaults") {
  const RunConfig rc = parse(R"({
    "dataset": "rtdata.txt",
    "userNum": 150, "serviceNum": 150,
    "density": 0.2, "densities": [0.1, 0.2, 0.3],
    "repetitions": 5, "seed": 99,
    "qosAttribute": "larger-is-better",
    "selection": "random",
    "ndcgKs": [5, 25],
    "methods": ["umean", "2rhyrec"],
    "lambda": 0.02, "alpha": 0.01, "beta": 0.4, "F": 10,
    "topkNeighbors": 15, "topKList": 25,
    "maxEpochs": 40, "decay": 0.95, "tol": 1e-5,
    "krccVariant": "column-kendall",
    "relevanceTransform": "reciprocal",
    "relevanceEpsilon": 0.05,
    "predictionFloor": 0.001,
    "wsrecLambdaMix": 0.7,
    "methodTopk": {"upcc": 10},
    "jobs": 2
  })");
  CHECK(rc.dataset == "rtdata.txt");
  CHECK(rc.cfg.user_num == 150);
  CHECK(rc.cfg.density == 0.2);
  CHECK(rc.densities.size() == 3);
  CHECK(rc.cfg.repetitions == 5);
  CHECK(rc.cfg.base_seed == 99);
  CHECK(rc.cfg.method.hp.seed == 99);
  CHECK(rc.cfg.attribute == Preference::kLargerIsBetter);
  CHECK(rc.cfg.selection == Selection::kRandom);
  CHECK(rc.cfg.ndcg_ks == std::vector<std::size_t>{5, 25});
  CHECK(rc.methods == std::vector<std::string>{"umean", "2rhyrec"});
  CHECK(rc.cfg.method.hp.lambda == 0.02);
  CHECK(rc.cfg.method.hp.factors == 10);
  CHECK(rc.cfg.method.hp.topk_list == 25);
  CHECK(rc.cfg.method.krcc_variant == KrccVariant::kColumnKendall);
  CHECK(rc.cfg.method.hp.prediction_floor == 0.001);
  CHECK(rc.cfg.method.wsrec_lambda_mix == 0.7);
  CHECK(rc.cfg.method.neighbor_k("upcc") == 10);
  CHECK(rc.cfg.method.neighbor_k("ipcc") == 15);
  CHECK(rc.cfg.jobs == 2);
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_WITH_AS(parse(R"({"lamda": 0.01})"), doctest::Contains("unknown config key"),
                       std::invalid_argument);
}

TEST_CASE("values are validated against the model invariants") {
  CHECK_THROWS_AS(parse(R"({"beta": 1.5})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"density": 0.0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"densities": [0.5, 1.5]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"decay": 0.0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"wsrecLambdaMix": 2.0})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"qosAttribute": "sideways"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"repetitions": 0})"), std::invalid_argument);
}

TEST_CASE("malformed json is reported with the file name") {
  CHECK_THROWS_WITH_AS(parse("{"), doctest::Contains("test.json"), std::invalid_argument);
  CHECK_THROWS_AS(parse("[1,2]"), std::invalid_argument);
}

TEST_CASE("at_density substitutes only the density") {
  const RunConfig rc = parse(R"({"density": 0.1, "userNum": 60})");
  const ExperimentConfig cfg = rc.at_density(0.3);
  CHECK(cfg.density == 0.3);
  CHECK(cfg.user_num == 60);
}

TEST_SUITE_END();
