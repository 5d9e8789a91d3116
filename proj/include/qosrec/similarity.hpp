#ifndef QOSREC_SIMILARITY_HPP_
#define QOSREC_SIMILARITY_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qosrec/qos_matrix.hpp"

namespace qosrec {

enum class SimilarityKind { kKrcc, kPcc };

/// Two readings of the rank-correlation formula. kAsWritten follows the
/// printed definition: the discordance term compares within-user value
/// differences across user pairs. kColumnKendall is the textbook Kendall tau
/// between the two service columns. Ties count as concordant in both.
enum class KrccVariant { kAsWritten, kColumnKendall };

enum class Axis { kItem, kUser };

/// Symmetric similarity grid with NaN marking undefined pairs (fewer than two
/// co-observations, or zero variance for PCC). The diagonal is 1 where the
/// service has at least two observations, NaN otherwise.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(SimilarityKind kind, std::size_t n);

  SimilarityKind kind() const { return kind_; }
  std::size_t size() const { return n_; }

  double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  bool defined(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }

  /// Cache format: header "<KIND> <n>", then n rows of n values ("nan" for
  /// undefined), 17 significant digits so load(save(x)) is bit-exact.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static SimilarityMatrix load(std::istream& in, const std::string& name = "<stream>");
  static SimilarityMatrix load(const std::string& path);

 private:
  SimilarityKind kind_ = SimilarityKind::kKrcc;
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Rank-correlation similarity between services i and j over their common
/// users. Empty when fewer than two common users.
std::optional<double> krcc_similarity(const QosMatrix& train, std::size_t i, std::size_t j,
                                      KrccVariant variant = KrccVariant::kAsWritten);

/// Pearson correlation between items i,j (over common users) or users i,j
/// (over common services), means taken over the co-observed subset. Empty
/// when fewer than two co-observations or either variance is zero.
std::optional<double> pcc_similarity(const QosMatrix& train, std::size_t i, std::size_t j,
                                     Axis axis);

/// All-pairs similarity over the training matrix. Pairs are independent, so
/// jobs > 1 evaluates them on a small thread pool; assembly is deterministic.
SimilarityMatrix build_krcc_matrix(const QosMatrix& train,
                                   KrccVariant variant = KrccVariant::kAsWritten,
                                   int jobs = 1);
SimilarityMatrix build_pcc_matrix(const QosMatrix& train, Axis axis, int jobs = 1);

struct Neighbor {
  std::size_t service = 0;
  double weight = 0.0;
};

/// Up to k most similar services, strictly positive weights only, descending
/// by weight with index as tie-break. Never contains the target.
struct NeighborSet {
  std::size_t target = 0;
  std::vector<Neighbor> neighbors;
  double weight_sum() const;
};

/// Selects the Top-k neighbor set of service `target`. Undefined and
/// non-positive similarities are excluded even if fewer than k remain. When
/// rated_by is given, candidates are first restricted to the services that
/// user observed in train (train must be non-null then).
NeighborSet top_k_neighbors(const SimilarityMatrix& sim, std::size_t target, std::size_t k,
                            std::optional<std::size_t> rated_by = std::nullopt,
                            const QosMatrix* train = nullptr);

}  // namespace qosrec

#endif  // QOSREC_SIMILARITY_HPP_
