#ifndef QOSREC_PREDICTORS_HPP_
#define QOSREC_PREDICTORS_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qosrec/hybrid.hpp"
#include "qosrec/qos_matrix.hpp"
#include "qosrec/similarity.hpp"

namespace qosrec {

/// Requested method exists in the paper's comparison but is out of scope here.
class NotImplementedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Common interface for every rating predictor. fit() is single-threaded;
/// predict() is a pure read afterwards and always returns a finite value for
/// a non-empty training matrix (every method carries a fallback chain down to
/// the global training mean).
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual const std::string& name() const = 0;
  virtual void fit(const QosMatrix& train) = 0;
  virtual double predict(std::size_t u, std::size_t s) const = 0;
  /// Per-epoch training trace, model-based methods only.
  virtual const TrainTrace* trace() const { return nullptr; }
};

/// Per-run method configuration shared by the registry.
struct MethodOptions {
  Hyperparams hp;
  KrccVariant krcc_variant = KrccVariant::kAsWritten;
  double wsrec_lambda_mix = 0.5;
  /// Optional per-method neighbor-count override (Table 2 tunes each method
  /// separately); absent methods use hp.topk_neighbors.
  std::map<std::string, std::size_t> method_topk;
  int jobs = 1;  // similarity-build workers

  std::size_t neighbor_k(const std::string& method) const {
    auto it = method_topk.find(method);
    return it == method_topk.end() ? hp.topk_neighbors : it->second;
  }
};

/// The implemented method ids, in the paper's comparison order.
const std::vector<std::string>& registered_methods();

/// Builds a predictor by id. Throws NotImplementedError for the two
/// ranking-oriented comparison methods specified elsewhere (gm, cloudrank2)
/// and std::invalid_argument for anything else unknown.
std::unique_ptr<Predictor> make_predictor(const std::string& id, const MethodOptions& options);

/// WSRec mixing rule: confidence-weighted blend of the user- and item-based
/// predictions. con_u / con_i are the similarity-weighted means of the
/// positive neighbor similarities each component used.
double wsrec_blend(double upcc, double ipcc, double con_u, double con_i, double lambda_mix);

}  // namespace qosrec

#endif  // QOSREC_PREDICTORS_HPP_
