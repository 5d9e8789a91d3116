#ifndef QOSREC_EXPERIMENT_HPP_
#define QOSREC_EXPERIMENT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qosrec/predictors.hpp"
#include "qosrec/qos_matrix.hpp"
#include "qosrec/ranking.hpp"

namespace qosrec {

struct ExperimentConfig {
  std::size_t user_num = 100;
  std::size_t service_num = 100;
  double density = 0.1;
  std::size_t repetitions = 10;
  Preference attribute = Preference::kSmallerIsBetter;
  Selection selection = Selection::kFirstN;
  std::vector<std::size_t> ndcg_ks = {10, 20};
  std::uint64_t base_seed = 42;
  RelevanceSpec relevance;  // global_max, when needed, is taken from each test split
  MethodOptions method;
  int jobs = 1;

  void validate() const;
  void validate_against(const QosMatrix& source) const;
};

struct RunResult {
  std::size_t repetition = 0;  // 1-based
  std::uint64_t seed = 0;
  std::map<std::size_t, double> ndcg;  // k -> user-averaged NDCG-k (NaN if no user qualified)
  double mae = 0.0;
  double rmse = 0.0;
};

struct EvalReport {
  std::string method;
  ExperimentConfig config;
  std::map<std::size_t, double> ndcg_mean;
  std::map<std::size_t, double> ndcg_std;  // sample standard deviation across repetitions
  double mae = 0.0;
  double rmse = 0.0;
  std::vector<RunResult> per_run;
  std::optional<TrainTrace> last_trace;  // model-based methods, last repetition
  std::optional<double> swept_value;     // filled by parameter_sweep
};

/// Builds a fitted-to-be predictor for one repetition; run_seed varies per
/// repetition so model initialization differs along with the split.
using PredictorMaker =
    std::function<std::unique_ptr<Predictor>(const QosMatrix& train, std::uint64_t run_seed)>;

/// The repetition-averaged experiment protocol: extract the configured
/// submatrix once, then per repetition r split with seed base_seed + r, fit,
/// predict every test cell, and score NDCG-k per user holding at least k test
/// entries plus MAE/RMSE over all test cells. Repetitions run on cfg.jobs
/// workers; results are identical for any worker count.
EvalReport run_experiment(const QosMatrix& source, const ExperimentConfig& cfg,
                          const std::string& method_id);
EvalReport run_experiment(const QosMatrix& source, const ExperimentConfig& cfg,
                          const std::string& label, const PredictorMaker& maker);

/// One run_experiment per value of the swept parameter, everything else held
/// at cfg. The shared base seed keeps the splits identical across values.
/// param is one of: topK, beta, F, topk_neighbors. Sweeping topK scores
/// NDCG at the swept list length; the other sweeps keep cfg.ndcg_ks.
std::vector<EvalReport> parameter_sweep(const QosMatrix& source, const ExperimentConfig& cfg,
                                        const std::string& method_id, const std::string& param,
                                        const std::vector<double>& values);

struct TraceRow {
  std::size_t epoch = 0;
  double loss = 0.0;
  double alpha = 0.0;
  double ndcg = 0.0;  // NDCG at k = topk_list over the test split
};

/// Trains the hybrid model once at cfg.density and records loss, learning
/// rate and test NDCG after every epoch.
std::vector<TraceRow> convergence_trace(const QosMatrix& source, const ExperimentConfig& cfg);

}  // namespace qosrec

#endif  // QOSREC_EXPERIMENT_HPP_
