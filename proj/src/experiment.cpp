#include "qosrec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include "qosrec/parallel.hpp"

namespace qosrec {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// global_max for the max-minus transform comes from the evaluation split
RelevanceSpec resolve_relevance(const ExperimentConfig& cfg, const QosMatrix& test) {
  RelevanceSpec spec = cfg.relevance;
  if (spec.transform == RelevanceTransform::kGlobalMaxMinus) {
    double hi = 0.0;
    for (std::size_t u = 0; u < test.users(); ++u) {
      for (std::size_t s = 0; s < test.services(); ++s) {
        if (test.observed(u, s)) hi = std::max(hi, test.value(u, s));
      }
    }
    spec.global_max = hi;
  }
  return spec;
}

// Scores one fitted predictor on the test mask.
RunResult score_run(const Predictor& predictor, const QosMatrix& test,
                    const ExperimentConfig& cfg, std::size_t repetition, std::uint64_t seed) {
  RunResult result;
  result.repetition = repetition;
  result.seed = seed;

  QosMatrix predicted(test.users(), test.services());
  std::vector<double> pred_flat, truth_flat;
  for (std::size_t u = 0; u < test.users(); ++u) {
    for (std::size_t s = 0; s < test.services(); ++s) {
      if (!test.observed(u, s)) continue;
      const double p = predictor.predict(u, s);
      predicted.set(u, s, p);
      pred_flat.push_back(p);
      truth_flat.push_back(test.value(u, s));
    }
  }
  if (pred_flat.empty()) {
    throw std::invalid_argument("empty test set: density leaves nothing to evaluate");
  }
  result.mae = mae(pred_flat, truth_flat);
  result.rmse = rmse(pred_flat, truth_flat);

  const RelevanceSpec spec = resolve_relevance(cfg, test);
  bool any_k_scored = false;
  for (std::size_t k : cfg.ndcg_ks) {
    double sum = 0.0;
    std::size_t qualifying = 0;
    for (std::size_t u = 0; u < test.users(); ++u) {
      const IdealList ideal = ideal_list(test, u, cfg.attribute);
      if (ideal.entries.size() < k) continue;  // metric stability: skip short candidate sets
      const RankedList ranked = rank_candidates(predicted, test, u, k, cfg.attribute);
      sum += ndcg_at(ranked, ideal, k, cfg.attribute, spec);
      ++qualifying;
    }
    result.ndcg[k] = qualifying > 0 ? sum / static_cast<double>(qualifying) : kNan;
    any_k_scored = any_k_scored || qualifying > 0;
  }
  if (!cfg.ndcg_ks.empty() && !any_k_scored) {
    throw std::runtime_error("no user holds enough test entries for any requested NDCG depth");
  }
  return result;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (user_num == 0 || service_num == 0) {
    throw std::invalid_argument("userNum/serviceNum must be >= 1");
  }
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("density must be in (0, 1]");
  }
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  for (std::size_t k : ndcg_ks) {
    if (k < 1) throw std::invalid_argument("NDCG depth must be >= 1");
  }
  method.hp.validate();
}

void ExperimentConfig::validate_against(const QosMatrix& source) const {
  validate();
  if (user_num > source.users() || service_num > source.services()) {
    throw std::invalid_argument("configured submatrix exceeds the data set (" +
                                std::to_string(user_num) + "x" + std::to_string(service_num) +
                                " from " + std::to_string(source.users()) + "x" +
                                std::to_string(source.services()) + ")");
  }
}

EvalReport run_experiment(const QosMatrix& source, const ExperimentConfig& cfg,
                          const std::string& method_id) {
  // resolve the id eagerly so unknown methods fail before any work
  make_predictor(method_id, cfg.method);
  return run_experiment(source, cfg, method_id,
                        [&cfg, method_id](const QosMatrix&, std::uint64_t run_seed) {
                          MethodOptions options = cfg.method;
                          options.hp.seed = run_seed;
                          return make_predictor(method_id, options);
                        });
}

EvalReport run_experiment(const QosMatrix& source, const ExperimentConfig& cfg,
                          const std::string& label, const PredictorMaker& maker) {
  cfg.validate_against(source);
  const QosMatrix sub =
      extract_submatrix(source, cfg.user_num, cfg.service_num, cfg.selection, cfg.base_seed);

  EvalReport report;
  report.method = label;
  report.config = cfg;
  report.per_run.resize(cfg.repetitions);

  std::vector<std::optional<TrainTrace>> traces(cfg.repetitions);
  std::vector<std::exception_ptr> errors(cfg.repetitions);

  parallel_for(cfg.repetitions, cfg.jobs, [&](std::size_t r) {
    try {
      const std::uint64_t seed = cfg.base_seed + r + 1;
      const TrainTestSplit split = split_by_density(sub, cfg.density, seed);
      auto predictor = maker(split.train, seed);
      predictor->fit(split.train);
      report.per_run[r] = score_run(*predictor, split.test, cfg, r + 1, seed);
      if (const TrainTrace* t = predictor->trace()) traces[r] = *t;
    } catch (...) {
      errors[r] = std::current_exception();
    }
  });
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  if (!traces.empty() && traces.back()) report.last_trace = traces.back();

  // average over repetitions, ignoring NaN slots (no qualifying user)
  for (std::size_t k : cfg.ndcg_ks) {
    double sum = 0.0, sumsq = 0.0;
    std::size_t n = 0;
    for (const auto& run : report.per_run) {
      const double v = run.ndcg.at(k);
      if (std::isnan(v)) continue;
      sum += v;
      sumsq += v * v;
      ++n;
    }
    if (n == 0) {
      report.ndcg_mean[k] = kNan;
      report.ndcg_std[k] = kNan;
    } else {
      const double mean = sum / static_cast<double>(n);
      report.ndcg_mean[k] = mean;
      report.ndcg_std[k] =
          n > 1 ? std::sqrt(std::max(0.0, (sumsq - static_cast<double>(n) * mean * mean) /
                                              static_cast<double>(n - 1)))
                : 0.0;
    }
  }
  double mae_sum = 0.0, rmse_sum = 0.0;
  for (const auto& run : report.per_run) {
    mae_sum += run.mae;
    rmse_sum += run.rmse;
  }
  report.mae = mae_sum / static_cast<double>(cfg.repetitions);
  report.rmse = rmse_sum / static_cast<double>(cfg.repetitions);
  return report;
}

std::vector<EvalReport> parameter_sweep(const QosMatrix& source, const ExperimentConfig& cfg,
                                        const std::string& method_id, const std::string& param,
                                        const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("parameter sweep needs at least one value");
  std::vector<EvalReport> reports;
  reports.reserve(values.size());
  for (double v : values) {
    ExperimentConfig point = cfg;
    if (param == "topK") {
      const auto k = static_cast<std::size_t>(std::llround(v));
      if (k < 1) throw std::invalid_argument("topK sweep value must be >= 1");
      point.method.hp.topk_list = k;
      point.ndcg_ks = {k};
    } else if (param == "beta") {
      point.method.hp.beta = v;
    } else if (param == "F") {
      if (v < 0) throw std::invalid_argument("F sweep value must be >= 0");
      point.method.hp.factors = static_cast<std::size_t>(std::llround(v));
    } else if (param == "topk_neighbors") {
      const auto k = static_cast<std::size_t>(std::llround(v));
      if (k < 1) throw std::invalid_argument("topk_neighbors sweep value must be >= 1");
      point.method.hp.topk_neighbors = k;
    } else {
      throw std::invalid_argument("unknown sweep parameter '" + param +
                                  "' (expected topK, beta, F or topk_neighbors)");
    }
    EvalReport report = run_experiment(source, point, method_id);
    report.swept_value = v;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<TraceRow> convergence_trace(const QosMatrix& source, const ExperimentConfig& cfg) {
  cfg.validate_against(source);
  const QosMatrix sub =
      extract_submatrix(source, cfg.user_num, cfg.service_num, cfg.selection, cfg.base_seed);
  const std::uint64_t seed = cfg.base_seed + 1;
  const TrainTestSplit split = split_by_density(sub, cfg.density, seed);
  if (split.test.observed_count() == 0) {
    throw std::invalid_argument("empty test set: density leaves nothing to evaluate");
  }

  const SimilarityMatrix sim = build_krcc_matrix(split.train, cfg.method.krcc_variant, cfg.jobs);
  Hyperparams hp = cfg.method.hp;
  hp.seed = seed;
  const std::size_t k = hp.topk_list;
  const RelevanceSpec spec = resolve_relevance(cfg, split.test);

  std::vector<TraceRow> rows;
  const auto on_epoch = [&](std::size_t epoch, double loss, double alpha,
                            const ModelParams& params) {
    QosMatrix predicted(split.test.users(), split.test.services());
    for (std::size_t u = 0; u < split.test.users(); ++u) {
      for (std::size_t s = 0; s < split.test.services(); ++s) {
        if (split.test.observed(u, s)) {
          predicted.set(u, s, hybrid_predict(split.train, sim, params, hp, u, s));
        }
      }
    }
    double sum = 0.0;
    std::size_t qualifying = 0;
    for (std::size_t u = 0; u < split.test.users(); ++u) {
      const IdealList ideal = ideal_list(split.test, u, cfg.attribute);
      if (ideal.entries.size() < k) continue;
      sum += ndcg_at(rank_candidates(predicted, split.test, u, k, cfg.attribute), ideal, k,
                     cfg.attribute, spec);
      ++qualifying;
    }
    rows.push_back({epoch, loss, alpha,
                    qualifying > 0 ? sum / static_cast<double>(qualifying) : kNan});
  };
  train_hybrid(split.train, sim, hp, on_epoch);
  return rows;
}

}  // namespace qosrec
