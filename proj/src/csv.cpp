#include "qosrec/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qosrec {

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string results_csv(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << "method,userNum,serviceNum,density,repetition,k,ndcg,mae,rmse,seed\n";
  for (const auto& report : reports) {
    const auto& cfg = report.config;
    for (const auto& run : report.per_run) {
      for (const auto& [k, ndcg] : run.ndcg) {
        out << report.method << ',' << cfg.user_num << ',' << cfg.service_num << ','
            << csv_number(cfg.density) << ',' << run.repetition << ',' << k << ','
            << csv_number(ndcg) << ',' << csv_number(run.mae) << ',' << csv_number(run.rmse)
            << ',' << run.seed << '\n';
      }
    }
  }
  return out.str();
}

std::string summary_csv(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << "method,userNum,density,k,ndcg_mean,ndcg_std\n";
  for (const auto& report : reports) {
    for (const auto& [k, mean] : report.ndcg_mean) {
      out << report.method << ',' << report.config.user_num << ','
          << csv_number(report.config.density) << ',' << k << ',' << csv_number(mean) << ','
          << csv_number(report.ndcg_std.at(k)) << '\n';
    }
  }
  return out.str();
}

std::string compare_csv(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << "method,userNum,serviceNum,density";
  if (!reports.empty()) {
    for (const auto& [k, mean] : reports.front().ndcg_mean) out << ",ndcg_" << k;
  }
  out << ",mae,rmse\n";
  for (const auto& report : reports) {
    const auto& cfg = report.config;
    out << report.method << ',' << cfg.user_num << ',' << cfg.service_num << ','
        << csv_number(cfg.density);
    for (const auto& [k, mean] : report.ndcg_mean) out << ',' << csv_number(mean);
    out << ',' << csv_number(report.mae) << ',' << csv_number(report.rmse) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const std::string& param, const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << "param,value,method,userNum,density,k,ndcg_mean,ndcg_std\n";
  for (const auto& report : reports) {
    const double value = report.swept_value.value_or(std::nan(""));
    for (const auto& [k, mean] : report.ndcg_mean) {
      out << param << ',' << csv_number(value) << ',' << report.method << ','
          << report.config.user_num << ',' << csv_number(report.config.density) << ',' << k
          << ',' << csv_number(mean) << ',' << csv_number(report.ndcg_std.at(k)) << '\n';
    }
  }
  return out.str();
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream out;
  out << "epoch,loss,alpha,ndcg_k\n";
  for (const auto& row : rows) {
    out << row.epoch << ',' << csv_number(row.loss) << ',' << csv_number(row.alpha) << ','
        << csv_number(row.ndcg) << '\n';
  }
  return out.str();
}

}  // namespace qosrec
