#ifndef QOSREC_RANKING_HPP_
#define QOSREC_RANKING_HPP_

#include <cstddef>
#include <vector>

#include "qosrec/qos_matrix.hpp"

namespace qosrec {

/// Preference direction of the QoS attribute: response time ranks ascending
/// (smaller is better), availability or throughput descending.
enum class Preference { kSmallerIsBetter, kLargerIsBetter };

struct ScoredService {
  std::size_t service = 0;
  double score = 0.0;  // predicted value for ranked lists, ground truth for ideal lists
};

/// Top-K recommendation list for one user, sorted in the attribute's
/// preference direction with index tie-break.
struct RankedList {
  std::size_t user = 0;
  std::size_t k = 0;
  std::vector<ScoredService> entries;
};

/// Every test candidate of the user sorted by ground truth in the same
/// preference direction; first entries form the ideal recommendation.
struct IdealList {
  std::size_t user = 0;
  std::vector<ScoredService> entries;
};

/// Ranks user u's test candidates by predicted value and keeps the top K.
/// Fewer than K candidates yields a shorter list.
RankedList rank_candidates(const QosMatrix& predicted, const QosMatrix& test, std::size_t u,
                           std::size_t k, Preference direction);

IdealList ideal_list(const QosMatrix& test, std::size_t u, Preference direction);

/// Discounted cumulative gain with the discount as printed: the first
/// position is undiscounted and position i >= 2 is divided by log2(i), so
/// positions 1 and 2 share weight 1.
double dcg_at(const std::vector<double>& rels, std::size_t k);

/// How ground-truth values become relevances for smaller-is-better
/// attributes (the published comparison never states its choice, and the
/// absolute NDCG level depends on it):
///  - kLinearInverse: (max - q) / (max - min) over the user's candidate set,
///    bounded to [0, 1]; all 1 when degenerate. The default.
///  - kReciprocal: 1 / (q + epsilon); concentrates relevance on the fastest
///    services the way a rating would.
///  - kGlobalMaxMinus: global_max - q, one shared scale for every user.
/// Larger-is-better attributes always use the raw value as the relevance.
enum class RelevanceTransform { kLinearInverse, kReciprocal, kGlobalMaxMinus };

struct RelevanceSpec {
  RelevanceTransform transform = RelevanceTransform::kLinearInverse;
  double epsilon = 0.01;     // kReciprocal offset, in QoS units
  double global_max = 0.0;   // kGlobalMaxMinus scale; must dominate the values
};

/// Maps ground-truth values to non-negative relevances over one user's
/// candidate set, per the spec above. Larger-is-better keeps raw values
/// (which must be >= 0).
std::vector<double> relevance_transform(const std::vector<double>& truth, Preference direction,
                                        const RelevanceSpec& spec = {});

/// NDCG-k of a predicted ranking against the ideal one. Relevances come from
/// relevance_transform over the full candidate set (the ideal list). Returns
/// 1 when both DCG and IDCG are zero; throws when only IDCG is.
double ndcg_at(const RankedList& ranked, const IdealList& ideal, std::size_t k,
               Preference direction, const RelevanceSpec& spec = {});

double mae(const std::vector<double>& predicted, const std::vector<double>& truth);
double rmse(const std::vector<double>& predicted, const std::vector<double>& truth);

}  // namespace qosrec

#endif  // QOSREC_RANKING_HPP_
