#ifndef QOSREC_RUN_CONFIG_HPP_
#define QOSREC_RUN_CONFIG_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "qosrec/experiment.hpp"

namespace qosrec {

/// A checked-in experiment description. Every ExperimentConfig and
/// Hyperparams field maps to a key; unspecified keys take the paper's
/// defaults (lambda=0.01, alpha=0.02, beta=0.6, F=50, Top-k=20, topK=20).
/// Unknown keys are rejected and every value is validated.
struct RunConfig {
  std::string dataset;                 // WS-Dream matrix path; may be overridden by the CLI
  std::vector<double> densities;       // explicit density grid; empty when not configured
  std::vector<std::string> methods;    // defaults to all implemented methods
  ExperimentConfig cfg;

  /// densities, or {cfg.density} when no grid was configured
  std::vector<double> density_grid() const {
    return densities.empty() ? std::vector<double>{cfg.density} : densities;
  }

  /// cfg with one density from the grid substituted
  ExperimentConfig at_density(double density) const {
    ExperimentConfig c = cfg;
    c.density = density;
    return c;
  }
};

RunConfig parse_run_config(std::istream& in, const std::string& name = "<stream>");
RunConfig load_run_config(const std::string& path);

}  // namespace qosrec

#endif  // QOSREC_RUN_CONFIG_HPP_
