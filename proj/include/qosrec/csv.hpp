#ifndef QOSREC_CSV_HPP_
#define QOSREC_CSV_HPP_

#include <string>
#include <vector>

#include "qosrec/experiment.hpp"

namespace qosrec {

/// Fixed-format float for CSV cells: 6 significant digits, so output is
/// byte-identical across runs of the same configuration.
std::string csv_number(double v);

/// Per-repetition rows:
/// method,userNum,serviceNum,density,repetition,k,ndcg,mae,rmse,seed
std::string results_csv(const std::vector<EvalReport>& reports);

/// Repetition-averaged rows: method,userNum,density,k,ndcg_mean,ndcg_std
std::string summary_csv(const std::vector<EvalReport>& reports);

/// One row per method and density with an ndcg_<k> column per configured
/// depth: method,userNum,serviceNum,density,ndcg_<k1>,...,mae,rmse
std::string compare_csv(const std::vector<EvalReport>& reports);

/// One row per swept value (and density):
/// param,value,method,userNum,density,k,ndcg_mean,ndcg_std
std::string sweep_csv(const std::string& param, const std::vector<EvalReport>& reports);

/// Convergence rows: epoch,loss,alpha,ndcg_k
std::string trace_csv(const std::vector<TraceRow>& rows);

}  // namespace qosrec

#endif  // QOSREC_CSV_HPP_
