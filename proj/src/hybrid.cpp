#include "qosrec/hybrid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <utility>

#include "qosrec/rng.hpp"

namespace qosrec {

void Hyperparams::validate() const {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (!(alpha0 > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must be in [0, 1]");
  if (topk_neighbors < 1) throw std::invalid_argument("topk_neighbors must be >= 1");
  if (topk_list < 1) throw std::invalid_argument("topk_list must be >= 1");
  if (max_epochs < 1) throw std::invalid_argument("maxEpochs must be >= 1");
  if (!(decay > 0.0) || decay > 1.0) throw std::invalid_argument("decay must be in (0, 1]");
  if (tol < 0.0) throw std::invalid_argument("tol must be >= 0");
  if (!std::isfinite(lambda) || !std::isfinite(alpha0) || !std::isfinite(decay) ||
      !std::isfinite(tol) || !std::isfinite(prediction_floor)) {
    throw std::invalid_argument("hyperparameters must be finite");
  }
}

double baseline_estimate(const ModelParams& params, std::size_t u, std::size_t s) {
  return params.mu + params.bu[u] + params.bs[s];
}

double lfm_term(const ModelParams& params, std::size_t u, std::size_t s) {
  const std::size_t m = params.users();
  const std::size_t n = params.services();
  double dot = 0.0;
  for (std::size_t f = 0; f < params.factors; ++f) {
    dot += params.p[f * m + u] * params.w[f * n + s];
  }
  return dot;
}

double neighbor_term(const QosMatrix& train, const SimilarityMatrix& sim,
                     const ModelParams& params, std::size_t u, std::size_t s, std::size_t k) {
  const NeighborSet nbrs = top_k_neighbors(sim, s, k, u, &train);
  if (nbrs.neighbors.empty()) return 0.0;
  const double wsum = nbrs.weight_sum();
  if (wsum <= 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& nb : nbrs.neighbors) {
    const double residual = train.value(u, nb.service) - params.frozen.estimate(u, nb.service);
    acc += (nb.weight / wsum) * residual;
  }
  return acc;
}

double hybrid_predict_raw(const QosMatrix& train, const SimilarityMatrix& sim,
                          const ModelParams& params, const Hyperparams& hp, std::size_t u,
                          std::size_t s) {
  const double nbr =
      hp.beta != 0.0 ? neighbor_term(train, sim, params, u, s, hp.topk_neighbors) : 0.0;
  return baseline_estimate(params, u, s) + hp.beta * nbr + (1.0 - hp.beta) * lfm_term(params, u, s);
}

double hybrid_predict(const QosMatrix& train, const SimilarityMatrix& sim,
                      const ModelParams& params, const Hyperparams& hp, std::size_t u,
                      std::size_t s) {
  const double raw = hybrid_predict_raw(train, sim, params, hp, u, s);
  return raw < hp.prediction_floor ? hp.prediction_floor : raw;
}

namespace {

struct TrainCell {
  std::size_t u, s;
  double q;
};

std::vector<TrainCell> collect_cells(const QosMatrix& train) {
  std::vector<TrainCell> cells;
  cells.reserve(train.observed_count());
  for (std::size_t u = 0; u < train.users(); ++u) {
    for (std::size_t s = 0; s < train.services(); ++s) {
      if (train.observed(u, s)) cells.push_back({u, s, train.value(u, s)});
    }
  }
  return cells;
}

double squared_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// Objective over the given cells; `nbr` (aligned with cells) carries the
// frozen neighbor terms, empty when beta is 0.
double loss_over_cells(const std::vector<TrainCell>& cells, const std::vector<double>& nbr,
                       const ModelParams& params, const Hyperparams& hp) {
  double sq = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    const double raw = baseline_estimate(params, cell.u, cell.s) +
                       hp.beta * (nbr.empty() ? 0.0 : nbr[c]) +
                       (1.0 - hp.beta) * lfm_term(params, cell.u, cell.s);
    const double e = cell.q - raw;
    sq += e * e;
  }
  return sq + hp.lambda * (squared_norm(params.bu) + squared_norm(params.bs) +
                           squared_norm(params.p) + squared_norm(params.w));
}

double relative_change(double prev, double now) {
  if (prev == 0.0) return now == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(now - prev) / std::abs(prev);
}

}  // namespace

double hybrid_loss(const QosMatrix& train, const SimilarityMatrix& sim,
                   const ModelParams& params, const Hyperparams& hp) {
  const auto cells = collect_cells(train);
  std::vector<double> nbr;
  if (hp.beta != 0.0) {
    nbr.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      nbr[c] = neighbor_term(train, sim, params, cells[c].u, cells[c].s, hp.topk_neighbors);
    }
  }
  return loss_over_cells(cells, nbr, params, hp);
}

LossGradient hybrid_loss_gradient(const QosMatrix& train, const SimilarityMatrix& sim,
                                  const ModelParams& params, const Hyperparams& hp) {
  const std::size_t m = params.users();
  const std::size_t n = params.services();
  LossGradient g;
  g.bu.assign(m, 0.0);
  g.bs.assign(n, 0.0);
  g.p.assign(params.p.size(), 0.0);
  g.w.assign(params.w.size(), 0.0);

  for (const auto& cell : collect_cells(train)) {
    const double raw = hybrid_predict_raw(train, sim, params, hp, cell.u, cell.s);
    const double e = cell.q - raw;
    g.bu[cell.u] += -2.0 * e;
    g.bs[cell.s] += -2.0 * e;
    const double scale = -2.0 * e * (1.0 - hp.beta);
    for (std::size_t f = 0; f < params.factors; ++f) {
      g.p[f * m + cell.u] += scale * params.w[f * n + cell.s];
      g.w[f * n + cell.s] += scale * params.p[f * m + cell.u];
    }
  }
  for (std::size_t u = 0; u < m; ++u) g.bu[u] += 2.0 * hp.lambda * params.bu[u];
  for (std::size_t s = 0; s < n; ++s) g.bs[s] += 2.0 * hp.lambda * params.bs[s];
  for (std::size_t i = 0; i < g.p.size(); ++i) g.p[i] += 2.0 * hp.lambda * params.p[i];
  for (std::size_t i = 0; i < g.w.size(); ++i) g.w[i] += 2.0 * hp.lambda * params.w[i];
  return g;
}

void sgd_cell_update(ModelParams& params, std::size_t u, std::size_t s, double q, double nbr,
                     double beta, double lambda, double alpha) {
  const std::size_t m = params.users();
  const std::size_t n = params.services();
  const double raw = params.mu + params.bu[u] + params.bs[s] + beta * nbr +
                     (1.0 - beta) * lfm_term(params, u, s);
  const double e = q - raw;
  params.bu[u] += alpha * (e - lambda * params.bu[u]);
  params.bs[s] += alpha * (e - lambda * params.bs[s]);
  const double escale = e * (1.0 - beta);
  for (std::size_t f = 0; f < params.factors; ++f) {
    const double p_old = params.p[f * m + u];
    params.p[f * m + u] += alpha * (escale * params.w[f * n + s] - lambda * p_old);
    params.w[f * n + s] += alpha * (escale * p_old - lambda * params.w[f * n + s]);
  }
}

namespace {

// Bias-only pretraining: fits mu + bu + bs by the same SGD schedule, and the
// result becomes the frozen baseline snapshot.
void pretrain_baselines(const std::vector<TrainCell>& cells, ModelParams& params,
                        const Hyperparams& hp, Rng& rng) {
  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  auto bias_loss = [&] {
    double sq = 0.0;
    for (const auto& cell : cells) {
      const double e = cell.q - (params.mu + params.bu[cell.u] + params.bs[cell.s]);
      sq += e * e;
    }
    return sq + hp.lambda * (squared_norm(params.bu) + squared_norm(params.bs));
  };

  double alpha = hp.alpha0;
  double prev = bias_loss();
  for (std::size_t epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const auto& cell = cells[idx];
      const double e = cell.q - (params.mu + params.bu[cell.u] + params.bs[cell.s]);
      params.bu[cell.u] += alpha * (e - hp.lambda * params.bu[cell.u]);
      params.bs[cell.s] += alpha * (e - hp.lambda * params.bs[cell.s]);
    }
    const double now = bias_loss();
    if (!std::isfinite(now)) {
      throw std::runtime_error("bias pretraining diverged at epoch " + std::to_string(epoch) +
                               " (alpha=" + std::to_string(alpha) + ")");
    }
    alpha *= hp.decay;
    if (relative_change(prev, now) < hp.tol) break;
    prev = now;
  }
}

}  // namespace

std::pair<ModelParams, TrainTrace> train_hybrid(const QosMatrix& train,
                                                const SimilarityMatrix& sim,
                                                const Hyperparams& hp,
                                                const EpochCallback& on_epoch) {
  hp.validate();
  const auto cells = collect_cells(train);
  if (cells.empty()) throw std::invalid_argument("train_hybrid: empty training matrix");

  const std::size_t m = train.users();
  const std::size_t n = train.services();
  Rng rng(hp.seed);

  ModelParams params;
  params.mu = global_mean(train);
  params.bu.assign(m, 0.0);
  params.bs.assign(n, 0.0);
  params.factors = hp.factors;

  pretrain_baselines(cells, params, hp, rng);
  params.frozen = {params.mu, params.bu, params.bs};

  params.p.resize(hp.factors * m);
  params.w.resize(hp.factors * n);
  for (auto& v : params.p) v = rng.uniform(-0.01, 0.01);
  for (auto& v : params.w) v = rng.uniform(-0.01, 0.01);

  // The frozen snapshot makes the neighbor term constant for the whole main
  // phase, so it is computed once per training cell.
  std::vector<double> nbr;
  if (hp.beta != 0.0) {
    nbr.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      nbr[c] = neighbor_term(train, sim, params, cells[c].u, cells[c].s, hp.topk_neighbors);
    }
  }

  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainTrace trace;
  trace.initial_loss = loss_over_cells(cells, nbr, params, hp);

  ModelParams best = params;
  double best_loss = trace.initial_loss;
  double prev = trace.initial_loss;
  double alpha = hp.alpha0;

  for (std::size_t epoch = 1; epoch <= hp.max_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const auto& cell = cells[idx];
      sgd_cell_update(params, cell.u, cell.s, cell.q, nbr.empty() ? 0.0 : nbr[idx], hp.beta,
                      hp.lambda, alpha);
    }
    const double now = loss_over_cells(cells, nbr, params, hp);
    if (!std::isfinite(now)) {
      throw std::runtime_error("training diverged at epoch " + std::to_string(epoch) +
                               " (alpha=" + std::to_string(alpha) + ")");
    }
    trace.loss.push_back(now);
    trace.alpha.push_back(alpha);
    if (on_epoch) on_epoch(epoch, now, alpha, params);

    if (now < best_loss) {
      best_loss = now;
      best = params;
      trace.best_epoch = epoch;
    }
    alpha *= hp.decay;
    if (relative_change(prev, now) < hp.tol) {
      trace.converged = true;
      return {params, trace};
    }
    prev = now;
  }
  // max epochs without meeting tol: hand back the best parameters seen
  return {best, trace};
}

QosMatrix complete_matrix(const QosMatrix& train, const SimilarityMatrix& sim,
                          const ModelParams& params, const Hyperparams& hp) {
  QosMatrix full(train.users(), train.services());
  for (std::size_t u = 0; u < train.users(); ++u) {
    for (std::size_t s = 0; s < train.services(); ++s) {
      full.set(u, s, train.observed(u, s) ? train.value(u, s)
                                          : hybrid_predict(train, sim, params, hp, u, s));
    }
  }
  return full;
}

namespace {

void write_values(std::ostream& out, const std::vector<double>& v) {
  char buf[64];
  std::string line;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) line += ' ';
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    line += buf;
  }
  line += '\n';
  out << line;
}

std::vector<double> read_values(std::istream& in, std::size_t count, const std::string& name) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!(in >> v[i])) throw std::runtime_error(name + ": truncated model checkpoint");
  }
  return v;
}

}  // namespace

void ModelParams::save(std::ostream& out) const {
  char buf[64];
  out << users() << ' ' << services() << ' ' << factors << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", mu);
  out << buf << '\n';
  write_values(out, bu);
  write_values(out, bs);
  for (std::size_t f = 0; f < factors; ++f) {
    write_values(out, {p.begin() + f * users(), p.begin() + (f + 1) * users()});
  }
  for (std::size_t f = 0; f < factors; ++f) {
    write_values(out, {w.begin() + f * services(), w.begin() + (f + 1) * services()});
  }
  // frozen baseline block: needed to reproduce neighbor residuals exactly
  std::snprintf(buf, sizeof(buf), "%.17g", frozen.mu);
  out << buf << '\n';
  write_values(out, frozen.bu);
  write_values(out, frozen.bs);
}

void ModelParams::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save(out);
  if (!out) throw std::runtime_error("write failure on " + path);
}

ModelParams ModelParams::load(std::istream& in, const std::string& name) {
  std::size_t m = 0, n = 0, f = 0;
  if (!(in >> m >> n >> f)) throw std::runtime_error(name + ": bad model header");
  ModelParams params;
  params.factors = f;
  if (!(in >> params.mu)) throw std::runtime_error(name + ": truncated model checkpoint");
  params.bu = read_values(in, m, name);
  params.bs = read_values(in, n, name);
  params.p = read_values(in, f * m, name);
  params.w = read_values(in, f * n, name);
  if (!(in >> params.frozen.mu)) throw std::runtime_error(name + ": missing baseline snapshot");
  params.frozen.bu = read_values(in, m, name);
  params.frozen.bs = read_values(in, n, name);
  return params;
}

ModelParams ModelParams::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load(in, path);
}

}  // namespace qosrec
