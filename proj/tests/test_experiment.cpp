#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "qosrec/csv.hpp"
#include "qosrec/experiment.hpp"
#include "support/synthetic.hpp"
#include "support/test_util.hpp"

using namespace qosrec;
using qosrec::testing::random_matrix;

TEST_SUITE_BEGIN("experiment");

namespace {

// read-the-answers predictor: an upper bound that scores NDCG 1 everywhere
class OraclePredictor : public Predictor {
 public:
  explicit OraclePredictor(QosMatrix truth) : truth_(std::move(truth)) {}
  const std::string& name() const override {
    static const std::string n = "oracle";
    return n;
  }
  void fit(const QosMatrix&) override {}
  double predict(std::size_t u, std::size_t s) const override { return truth_.value(u, s); }

 private:
  QosMatrix truth_;
};

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.user_num = 30;
  cfg.service_num = 30;
  cfg.density = 0.3;
  cfg.repetitions = 3;
  cfg.ndcg_ks = {5, 10};
  cfg.base_seed = 42;
  cfg.method.hp.factors = 4;
  cfg.method.hp.max_epochs = 15;
  return cfg;
}

QosMatrix small_source() {
  testing::SyntheticSpec spec;
  spec.users = 40;
  spec.services = 40;
  spec.seed = 17;
  return testing::synthetic_wsdream(spec);
}

}  // namespace

TEST_CASE("a ground-truth oracle scores NDCG 1 at every depth") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  const QosMatrix sub =
      extract_submatrix(source, cfg.user_num, cfg.service_num, cfg.selection, cfg.base_seed);
  const EvalReport report = run_experiment(
      source, cfg, "oracle",
      [&sub](const QosMatrix&, std::uint64_t) { return std::make_unique<OraclePredictor>(sub); });
  for (const auto& [k, v] : report.ndcg_mean) {
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(report.mae == doctest::Approx(0.0));
  CHECK(report.per_run.size() == cfg.repetitions);
}

TEST_CASE("full density is rejected as an empty test set") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  cfg.density = 1.0;
  cfg.repetitions = 1;
  CHECK_THROWS_WITH_AS(run_experiment(source, cfg, "umean"), doctest::Contains("empty test"),
                       std::invalid_argument);
}

TEST_CASE("unknown methods fail before any work") {
  const QosMatrix source = small_source();
  CHECK_THROWS_AS(run_experiment(source, small_config(), "nope"), std::invalid_argument);
}

TEST_CASE("reports are deterministic under the base seed and worker count") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  cfg.repetitions = 2;

  const EvalReport a = run_experiment(source, cfg, "2rhyrec");
  cfg.jobs = 3;
  const EvalReport b = run_experiment(source, cfg, "2rhyrec");
  REQUIRE(a.per_run.size() == b.per_run.size());
  for (std::size_t r = 0; r < a.per_run.size(); ++r) {
    CHECK(a.per_run[r].mae == b.per_run[r].mae);
    CHECK(a.per_run[r].rmse == b.per_run[r].rmse);
    for (const auto& [k, v] : a.per_run[r].ndcg) {
      CHECK(b.per_run[r].ndcg.at(k) == v);
    }
  }
  CHECK(results_csv({a}) == results_csv({b}));
  CHECK(summary_csv({a}) == summary_csv({b}));
}

TEST_CASE("per-repetition seeds differ and derive from the base seed") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  cfg.repetitions = 3;
  const EvalReport report = run_experiment(source, cfg, "umean");
  CHECK(report.per_run[0].seed == cfg.base_seed + 1);
  CHECK(report.per_run[1].seed == cfg.base_seed + 2);
  CHECK(report.per_run[2].seed == cfg.base_seed + 3);
}

TEST_CASE("ndcg values stay in the unit interval for every method") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  cfg.repetitions = 2;
  cfg.method.hp.max_epochs = 10;
  for (const auto& id : registered_methods()) {
    const EvalReport report = run_experiment(source, cfg, id);
    for (const auto& run : report.per_run) {
      for (const auto& [k, v] : run.ndcg) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("parameter sweeps share splits and produce one report per value") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  cfg.repetitions = 1;

  const auto reports = parameter_sweep(source, cfg, "umean", "topK", {5, 10, 15});
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].swept_value == 5.0);
  CHECK(reports[0].ndcg_mean.count(5) == 1);
  CHECK(reports[2].ndcg_mean.count(15) == 1);
  // umean ignores the list length, and the splits are shared, so the error
  // metrics agree across sweep points
  CHECK(reports[0].mae == reports[1].mae);
  CHECK(reports[1].rmse == reports[2].rmse);

  CHECK_THROWS_AS(parameter_sweep(source, cfg, "umean", "gamma", {1}), std::invalid_argument);
  CHECK_THROWS_AS(parameter_sweep(source, cfg, "umean", "topK", {}), std::invalid_argument);
}

TEST_CASE("beta sweep reaches the trainer") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  cfg.repetitions = 1;
  cfg.ndcg_ks = {10};
  cfg.method.hp.max_epochs = 8;
  const auto reports = parameter_sweep(source, cfg, "2rhyrec", "beta", {0.0, 0.5});
  REQUIRE(reports.size() == 2);
  // different blends produce different rating errors on the same split
  CHECK(reports[0].rmse != reports[1].rmse);
}

TEST_CASE("convergence trace records epochs with decaying alpha") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  cfg.method.hp.max_epochs = 12;
  cfg.method.hp.topk_list = 5;
  const auto rows = convergence_trace(source, cfg);
  REQUIRE(!rows.empty());
  CHECK(rows.front().epoch == 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].epoch == rows[i - 1].epoch + 1);
    CHECK(rows[i].alpha < rows[i - 1].alpha);
  }
  for (const auto& row : rows) {
    CHECK(row.ndcg >= 0.0);
    CHECK(row.ndcg <= 1.0 + 1e-12);
    CHECK(std::isfinite(row.loss));
  }
  // deterministic under the same config
  const auto again = convergence_trace(source, cfg);
  REQUIRE(again.size() == rows.size());
  CHECK(trace_csv(again) == trace_csv(rows));
}

TEST_CASE("csv schemas match the documented columns") {
  const QosMatrix source = small_source();
  ExperimentConfig cfg = small_config();
  cfg.repetitions = 2;
  const EvalReport report = run_experiment(source, cfg, "imean");

  const std::string results = results_csv({report});
  CHECK(results.rfind("method,userNum,serviceNum,density,repetition,k,ndcg,mae,rmse,seed\n", 0) ==
        0);
  // 2 repetitions x 2 depths = 4 data rows
  CHECK(std::count(results.begin(), results.end(), '\n') == 5);

  const std::string summary = summary_csv({report});
  CHECK(summary.rfind("method,userNum,density,k,ndcg_mean,ndcg_std\n", 0) == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);

  const std::string compare = compare_csv({report});
  CHECK(compare.rfind("method,userNum,serviceNum,density,ndcg_5,ndcg_10,mae,rmse\n", 0) == 0);

  const std::string sweep = sweep_csv("beta", {report});
  CHECK(sweep.rfind("param,value,method,userNum,density,k,ndcg_mean,ndcg_std\n", 0) == 0);
}

TEST_CASE("config validation catches bad grids") {
  ExperimentConfig cfg = small_config();
  cfg.density = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.repetitions = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.user_num = 10000;
  const QosMatrix source = small_source();
  CHECK_THROWS_AS(cfg.validate_against(source), std::invalid_argument);
}

TEST_SUITE_END();
