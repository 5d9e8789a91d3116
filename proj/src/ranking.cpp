#include "qosrec/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qosrec {

namespace {

void sort_by_preference(std::vector<ScoredService>& entries, Preference direction) {
  std::sort(entries.begin(), entries.end(), [&](const ScoredService& a, const ScoredService& b) {
    if (a.score != b.score) {
      return direction == Preference::kSmallerIsBetter ? a.score < b.score : a.score > b.score;
    }
    return a.service < b.service;
  });
}

}  // namespace

RankedList rank_candidates(const QosMatrix& predicted, const QosMatrix& test, std::size_t u,
                           std::size_t k, Preference direction) {
  RankedList list;
  list.user = u;
  list.k = k;
  for (std::size_t s = 0; s < test.services(); ++s) {
    if (test.observed(u, s)) list.entries.push_back({s, predicted.value(u, s)});
  }
  sort_by_preference(list.entries, direction);
  if (list.entries.size() > k) list.entries.resize(k);
  return list;
}

IdealList ideal_list(const QosMatrix& test, std::size_t u, Preference direction) {
  IdealList list;
  list.user = u;
  for (std::size_t s = 0; s < test.services(); ++s) {
    if (test.observed(u, s)) list.entries.push_back({s, test.value(u, s)});
  }
  sort_by_preference(list.entries, direction);
  return list;
}

double dcg_at(const std::vector<double>& rels, std::size_t k) {
  if (k == 0) throw std::invalid_argument("dcg_at: k must be >= 1");
  if (rels.empty()) return 0.0;
  double dcg = rels[0];
  const std::size_t last = std::min(k, rels.size());
  for (std::size_t i = 2; i <= last; ++i) {
    dcg += rels[i - 1] / std::log2(static_cast<double>(i));
  }
  return dcg;
}

std::vector<double> relevance_transform(const std::vector<double>& truth, Preference direction,
                                        const RelevanceSpec& spec) {
  if (truth.empty()) throw std::invalid_argument("relevance_transform: empty value list");
  if (direction == Preference::kLargerIsBetter) {
    for (double q : truth) {
      if (q < 0.0) {
        throw std::invalid_argument("relevance_transform: negative value in larger-is-better mode");
      }
    }
    return truth;
  }
  std::vector<double> rels(truth.size(), 1.0);
  switch (spec.transform) {
    case RelevanceTransform::kLinearInverse: {
      const auto [lo, hi] = std::minmax_element(truth.begin(), truth.end());
      const double qmin = *lo, qmax = *hi;
      if (qmax > qmin) {
        for (std::size_t i = 0; i < truth.size(); ++i) {
          rels[i] = (qmax - truth[i]) / (qmax - qmin);
        }
      }
      break;
    }
    case RelevanceTransform::kReciprocal: {
      if (!(spec.epsilon > 0.0)) {
        throw std::invalid_argument("relevance_transform: reciprocal epsilon must be > 0");
      }
      for (std::size_t i = 0; i < truth.size(); ++i) rels[i] = 1.0 / (truth[i] + spec.epsilon);
      break;
    }
    case RelevanceTransform::kGlobalMaxMinus: {
      for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] > spec.global_max) {
          throw std::invalid_argument("relevance_transform: value above the global maximum");
        }
        rels[i] = spec.global_max - truth[i];
      }
      break;
    }
  }
  return rels;
}

double ndcg_at(const RankedList& ranked, const IdealList& ideal, std::size_t k,
               Preference direction, const RelevanceSpec& spec) {
  if (ideal.entries.empty()) throw std::invalid_argument("ndcg_at: empty ideal list");

  // relevances are defined over the user's whole candidate set
  std::vector<double> truth(ideal.entries.size());
  for (std::size_t i = 0; i < ideal.entries.size(); ++i) truth[i] = ideal.entries[i].score;
  const std::vector<double> ideal_rels = relevance_transform(truth, direction, spec);

  std::unordered_map<std::size_t, double> rel_of;
  rel_of.reserve(ideal.entries.size());
  for (std::size_t i = 0; i < ideal.entries.size(); ++i) {
    rel_of[ideal.entries[i].service] = ideal_rels[i];
  }

  std::vector<double> ranked_rels;
  ranked_rels.reserve(ranked.entries.size());
  for (const auto& e : ranked.entries) {
    auto it = rel_of.find(e.service);
    if (it == rel_of.end()) {
      throw std::invalid_argument("ndcg_at: ranked service missing from the candidate set");
    }
    ranked_rels.push_back(it->second);
  }

  const double dcg = ranked_rels.empty() ? 0.0 : dcg_at(ranked_rels, k);
  const double idcg = dcg_at(ideal_rels, k);
  if (idcg == 0.0) {
    if (dcg == 0.0) return 1.0;
    throw std::invalid_argument("ndcg_at: IDCG is zero but DCG is not");
  }
  return dcg / idcg;
}

namespace {

void check_pair(const std::vector<double>& predicted, const std::vector<double>& truth,
                const char* who) {
  if (predicted.empty()) throw std::invalid_argument(std::string(who) + ": empty input");
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument(std::string(who) + ": length mismatch");
  }
}

}  // namespace

double mae(const std::vector<double>& predicted, const std::vector<double>& truth) {
  check_pair(predicted, truth, "mae");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) sum += std::abs(predicted[i] - truth[i]);
  return sum / static_cast<double>(predicted.size());
}

double rmse(const std::vector<double>& predicted, const std::vector<double>& truth) {
  check_pair(predicted, truth, "rmse");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - truth[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(predicted.size()));
}

}  // namespace qosrec
