#include "qosrec/predictors.hpp"

#include <algorithm>
#include <cmath>

namespace qosrec {

namespace {

// Row means with a global-mean fallback for empty rows. Shared by the mean
// and PCC predictors (column means come from the transposed matrix).
struct AxisMeans {
  std::vector<double> mean;
  std::vector<bool> has;
  double global = 0.0;

  void fit_rows(const QosMatrix& train) {
    global = global_mean(train);
    mean.assign(train.users(), 0.0);
    has.assign(train.users(), false);
    for (std::size_t u = 0; u < train.users(); ++u) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t s = 0; s < train.services(); ++s) {
        if (train.observed(u, s)) {
          sum += train.value(u, s);
          ++count;
        }
      }
      if (count > 0) {
        mean[u] = sum / static_cast<double>(count);
        has[u] = true;
      }
    }
  }

  double at(std::size_t i) const { return has[i] ? mean[i] : global; }
};

class UmeanPredictor : public Predictor {
 public:
  const std::string& name() const override {
    static const std::string n = "umean";
    return n;
  }
  void fit(const QosMatrix& train) override { means_.fit_rows(train); }
  double predict(std::size_t u, std::size_t) const override { return means_.at(u); }

 private:
  AxisMeans means_;
};

class ImeanPredictor : public Predictor {
 public:
  const std::string& name() const override {
    static const std::string n = "imean";
    return n;
  }
  void fit(const QosMatrix& train) override { means_.fit_rows(train.transposed()); }
  double predict(std::size_t, std::size_t s) const override { return means_.at(s); }

 private:
  AxisMeans means_;
};

// Item-axis PCC prediction machinery. The user-based variant runs the same
// code on the transposed matrix (users become the "items").
//
// For a target cell (u, s): neighbors of item s are filtered to the items u
// rated, then the Top-k positive similarities weight the deviations from the
// neighbors' own means. The returned confidence is the similarity-weighted
// mean of the employed similarities, 0 when no neighbor was usable.
struct PccComponent {
  QosMatrix train;
  SimilarityMatrix sim;
  AxisMeans item_means;  // per-column means of `train`
  std::size_t k = 1;

  void fit(const QosMatrix& source, std::size_t top_k, int jobs) {
    train = source;
    k = top_k;
    sim = build_pcc_matrix(train, Axis::kItem, jobs);
    item_means.fit_rows(train.transposed());
  }

  struct Estimate {
    double value = 0.0;
    double confidence = 0.0;
    bool usable = false;
  };

  Estimate estimate(std::size_t u, std::size_t s) const {
    const NeighborSet nbrs = top_k_neighbors(sim, s, k, u, &train);
    if (nbrs.neighbors.empty()) return {};
    double num = 0.0, den = 0.0, wsq = 0.0;
    for (const auto& nb : nbrs.neighbors) {
      num += nb.weight * (train.value(u, nb.service) - item_means.at(nb.service));
      den += std::abs(nb.weight);
      wsq += nb.weight * nb.weight;
    }
    if (den == 0.0) return {};
    return {item_means.at(s) + num / den, wsq / nbrs.weight_sum(), true};
  }

  // fallback: the target item's own mean (or the global mean)
  double fallback(std::size_t s) const { return item_means.at(s); }
};

class IpccPredictor : public Predictor {
 public:
  explicit IpccPredictor(const MethodOptions& options)
      : k_(options.neighbor_k("ipcc")), jobs_(options.jobs) {}
  const std::string& name() const override {
    static const std::string n = "ipcc";
    return n;
  }
  void fit(const QosMatrix& train) override { component_.fit(train, k_, jobs_); }
  double predict(std::size_t u, std::size_t s) const override {
    const auto est = component_.estimate(u, s);
    return est.usable ? est.value : component_.fallback(s);
  }

 private:
  PccComponent component_;
  std::size_t k_;
  int jobs_;
};

class UpccPredictor : public Predictor {
 public:
  explicit UpccPredictor(const MethodOptions& options)
      : k_(options.neighbor_k("upcc")), jobs_(options.jobs) {}
  const std::string& name() const override {
    static const std::string n = "upcc";
    return n;
  }
  void fit(const QosMatrix& train) override { component_.fit(train.transposed(), k_, jobs_); }
  double predict(std::size_t u, std::size_t s) const override {
    const auto est = component_.estimate(s, u);  // transposed addressing
    return est.usable ? est.value : component_.fallback(u);
  }

 private:
  PccComponent component_;
  std::size_t k_;
  int jobs_;
};

class WsrecPredictor : public Predictor {
 public:
  explicit WsrecPredictor(const MethodOptions& options)
      : user_k_(options.neighbor_k("upcc")),
        item_k_(options.neighbor_k("ipcc")),
        lambda_mix_(options.wsrec_lambda_mix),
        jobs_(options.jobs) {
    if (lambda_mix_ < 0.0 || lambda_mix_ > 1.0) {
      throw std::invalid_argument("wsrec lambda_mix must be in [0, 1]");
    }
  }
  const std::string& name() const override {
    static const std::string n = "wsrec";
    return n;
  }
  void fit(const QosMatrix& train) override {
    global_ = global_mean(train);
    user_component_.fit(train.transposed(), user_k_, jobs_);
    item_component_.fit(train, item_k_, jobs_);
  }
  double predict(std::size_t u, std::size_t s) const override {
    const auto by_user = user_component_.estimate(s, u);
    const auto by_item = item_component_.estimate(u, s);
    if (by_user.usable && by_item.usable) {
      return wsrec_blend(by_user.value, by_item.value, by_user.confidence, by_item.confidence,
                         lambda_mix_);
    }
    if (by_user.usable) return by_user.value;
    if (by_item.usable) return by_item.value;
    return global_;
  }

 private:
  PccComponent user_component_;
  PccComponent item_component_;
  std::size_t user_k_, item_k_;
  double lambda_mix_;
  int jobs_;
  double global_ = 0.0;
};

// Latent factor model with user/item bias: the hybrid trainer with the
// neighbor channel switched off (beta = 0), so the beta-degeneracy of the
// hybrid model and this predictor are the same code path.
class BiasSvdPredictor : public Predictor {
 public:
  explicit BiasSvdPredictor(const MethodOptions& options) : hp_(options.hp) { hp_.beta = 0.0; }
  const std::string& name() const override {
    static const std::string n = "biassvd";
    return n;
  }
  void fit(const QosMatrix& train) override {
    train_ = train;
    auto [params, trace] = train_hybrid(train_, sim_, hp_);
    params_ = std::move(params);
    trace_ = std::move(trace);
  }
  double predict(std::size_t u, std::size_t s) const override {
    return hybrid_predict(train_, sim_, params_, hp_, u, s);
  }
  const TrainTrace* trace() const override { return &trace_; }

 private:
  Hyperparams hp_;
  QosMatrix train_;
  SimilarityMatrix sim_;  // stays empty, the neighbor channel is off
  ModelParams params_;
  TrainTrace trace_;
};

class HybridPredictor : public Predictor {
 public:
  explicit HybridPredictor(const MethodOptions& options)
      : hp_(options.hp), variant_(options.krcc_variant), jobs_(options.jobs) {}
  const std::string& name() const override {
    static const std::string n = "2rhyrec";
    return n;
  }
  void fit(const QosMatrix& train) override {
    train_ = train;
    sim_ = build_krcc_matrix(train_, variant_, jobs_);
    auto [params, trace] = train_hybrid(train_, sim_, hp_);
    params_ = std::move(params);
    trace_ = std::move(trace);
  }
  double predict(std::size_t u, std::size_t s) const override {
    return hybrid_predict(train_, sim_, params_, hp_, u, s);
  }
  const TrainTrace* trace() const override { return &trace_; }

 private:
  Hyperparams hp_;
  KrccVariant variant_;
  int jobs_;
  QosMatrix train_;
  SimilarityMatrix sim_;
  ModelParams params_;
  TrainTrace trace_;
};

}  // namespace

const std::vector<std::string>& registered_methods() {
  static const std::vector<std::string> ids = {"umean", "imean",   "upcc",   "ipcc",
                                               "wsrec", "biassvd", "2rhyrec"};
  return ids;
}

std::unique_ptr<Predictor> make_predictor(const std::string& id, const MethodOptions& options) {
  options.hp.validate();
  if (id == "umean") return std::make_unique<UmeanPredictor>();
  if (id == "imean") return std::make_unique<ImeanPredictor>();
  if (id == "upcc") return std::make_unique<UpccPredictor>(options);
  if (id == "ipcc") return std::make_unique<IpccPredictor>(options);
  if (id == "wsrec") return std::make_unique<WsrecPredictor>(options);
  if (id == "biassvd") return std::make_unique<BiasSvdPredictor>(options);
  if (id == "2rhyrec") return std::make_unique<HybridPredictor>(options);
  if (id == "gm" || id == "cloudrank2") {
    throw NotImplementedError("method '" + id +
                              "' is a comparison baseline specified in other papers and is "
                              "deliberately not implemented");
  }
  throw std::invalid_argument("unknown method '" + id + "'");
}

double wsrec_blend(double upcc, double ipcc, double con_u, double con_i, double lambda_mix) {
  const double denom = lambda_mix * con_u + (1.0 - lambda_mix) * con_i;
  if (denom <= 0.0) return 0.5 * (upcc + ipcc);
  const double wu = lambda_mix * con_u / denom;
  return wu * upcc + (1.0 - wu) * ipcc;
}

}  // namespace qosrec
