#ifndef QOSREC_HYBRID_HPP_
#define QOSREC_HYBRID_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qosrec/qos_matrix.hpp"
#include "qosrec/similarity.hpp"

namespace qosrec {

struct Hyperparams {
  double lambda = 0.01;             // regularization weight
  double alpha0 = 0.02;             // initial learning rate
  double beta = 0.6;                // neighbor-vs-latent blend, in [0, 1]
  std::size_t factors = 50;         // latent dimensionality F
  std::size_t topk_neighbors = 20;  // Top-k neighbor count
  std::size_t topk_list = 20;       // topK recommendation list length
  std::size_t max_epochs = 100;
  double decay = 0.9;               // multiplicative per-epoch learning-rate factor
  double tol = 1e-4;                // relative loss-change stopping threshold
  std::uint64_t seed = 42;
  double prediction_floor = 0.0;    // served predictions are clamped to >= this

  void validate() const;  // throws std::invalid_argument
};

/// Baseline levels frozen at the end of the pretraining phase; the neighbor
/// term always takes its residuals q(u,j) - (mu + bu + bs_j) against these,
/// not against the live biases.
struct BaselineSnapshot {
  double mu = 0.0;
  std::vector<double> bu;
  std::vector<double> bs;

  double estimate(std::size_t u, std::size_t s) const { return mu + bu[u] + bs[s]; }
};

/// Learned model state: global mean, bias vectors, factor matrices P (F x m)
/// and W (F x n) stored factor-major, plus the frozen baseline snapshot.
struct ModelParams {
  double mu = 0.0;
  std::vector<double> bu;  // length m
  std::vector<double> bs;  // length n
  std::size_t factors = 0;
  std::vector<double> p;   // F x m, p[f * m + u]
  std::vector<double> w;   // F x n, w[f * n + s]
  BaselineSnapshot frozen;

  std::size_t users() const { return bu.size(); }
  std::size_t services() const { return bs.size(); }
  double p_at(std::size_t f, std::size_t u) const { return p[f * users() + u]; }
  double w_at(std::size_t f, std::size_t s) const { return w[f * services() + s]; }

  /// Checkpoint text format: "m n F", mu, bu, bs, P row-major, W row-major,
  /// then the frozen baseline block (mu, bu, bs). 17 significant digits, so
  /// load(save(x)) reproduces the model exactly.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static ModelParams load(std::istream& in, const std::string& name = "<stream>");
  static ModelParams load(const std::string& path);
};

struct TrainTrace {
  std::vector<double> loss;   // per-epoch objective after the epoch's updates
  std::vector<double> alpha;  // learning rate used during that epoch
  bool converged = false;
  std::size_t best_epoch = 0;  // 1-based epoch with the lowest loss
  double initial_loss = 0.0;
};

/// mu + bu + bs (Eq. 5 style level estimate).
double baseline_estimate(const ModelParams& params, std::size_t u, std::size_t s);

/// Inner product of user u's and service s's factor vectors.
double lfm_term(const ModelParams& params, std::size_t u, std::size_t s);

/// Similarity-normalized sum of frozen-baseline residuals over the Top-k
/// neighbors of s that user u rated. 0 when no usable neighbor exists.
double neighbor_term(const QosMatrix& train, const SimilarityMatrix& sim,
                     const ModelParams& params, std::size_t u, std::size_t s, std::size_t k);

/// Unclamped hybrid prediction: baseline + beta * neighbor + (1-beta) * latent.
/// This is the quantity the training objective is written on.
double hybrid_predict_raw(const QosMatrix& train, const SimilarityMatrix& sim,
                          const ModelParams& params, const Hyperparams& hp, std::size_t u,
                          std::size_t s);

/// Served prediction: hybrid_predict_raw clamped to hp.prediction_floor,
/// QoS values being physically non-negative.
double hybrid_predict(const QosMatrix& train, const SimilarityMatrix& sim,
                      const ModelParams& params, const Hyperparams& hp, std::size_t u,
                      std::size_t s);

/// Regularized squared-error objective over the training cells, using the
/// unclamped prediction. Norms are squared Euclidean over all entries.
double hybrid_loss(const QosMatrix& train, const SimilarityMatrix& sim,
                   const ModelParams& params, const Hyperparams& hp);

/// Analytic gradient of hybrid_loss with respect to bu, bs, P, W (neighbor
/// residuals frozen). Exposed for finite-difference verification.
struct LossGradient {
  std::vector<double> bu, bs, p, w;
};
LossGradient hybrid_loss_gradient(const QosMatrix& train, const SimilarityMatrix& sim,
                                  const ModelParams& params, const Hyperparams& hp);

/// One stochastic step on a single training cell. `nbr` is the (frozen)
/// neighbor term for that cell. The factor updates use the pre-update p
/// values and carry the (1-beta) partial-derivative weight.
void sgd_cell_update(ModelParams& params, std::size_t u, std::size_t s, double q, double nbr,
                     double beta, double lambda, double alpha);

/// Invoked after every epoch of the main training phase with the epoch number
/// (1-based), the end-of-epoch loss, the learning rate used, and the current
/// parameters. Used by the convergence-trace command.
using EpochCallback =
    std::function<void(std::size_t epoch, double loss, double alpha, const ModelParams&)>;

/// Fits the hybrid model by two-phase SGD: a bias-only pretraining pass that
/// produces the frozen baseline snapshot, then the full model with P, W
/// initialized uniformly in [-0.01, 0.01] under hp.seed. Cells are visited in
/// a reshuffled order each epoch; the learning rate decays geometrically per
/// epoch; training stops when the relative loss change drops below hp.tol or
/// hp.max_epochs is reached (the best-so-far parameters are returned, with
/// trace.converged = false in the latter case). Throws std::runtime_error if
/// the loss turns non-finite.
std::pair<ModelParams, TrainTrace> train_hybrid(const QosMatrix& train,
                                                const SimilarityMatrix& sim,
                                                const Hyperparams& hp,
                                                const EpochCallback& on_epoch = {});

/// The completed matrix: observed training cells keep their values, every
/// other cell is filled with the (clamped) hybrid prediction.
QosMatrix complete_matrix(const QosMatrix& train, const SimilarityMatrix& sim,
                          const ModelParams& params, const Hyperparams& hp);

}  // namespace qosrec

#endif  // QOSREC_HYBRID_HPP_
