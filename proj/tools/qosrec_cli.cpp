// Command-line front end: dataset inspection, method comparisons, parameter
// sweeps and convergence traces, all emitting CSV for external plotting.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qosrec/csv.hpp"
#include "qosrec/experiment.hpp"
#include "qosrec/run_config.hpp"

namespace {

using namespace qosrec;

struct CommonFlags {
  std::string config_path;
  std::string dataset;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config file (JSON)")->required();
  cmd->add_option("--dataset", flags.dataset, "WS-Dream matrix file (overrides the config)");
  cmd->add_option("--seed", flags.seed, "base seed (overrides the config)");
  cmd->add_option("--jobs", flags.jobs, "worker threads for repetitions and similarity rows");
  cmd->add_option("--out", flags.out_dir, "directory for CSV output files");
}

RunConfig load_config(const CommonFlags& flags) {
  RunConfig rc = load_run_config(flags.config_path);
  if (!flags.dataset.empty()) rc.dataset = flags.dataset;
  if (flags.seed) {
    rc.cfg.base_seed = *flags.seed;
    rc.cfg.method.hp.seed = *flags.seed;
  }
  if (flags.jobs) {
    rc.cfg.jobs = *flags.jobs;
    rc.cfg.method.jobs = *flags.jobs;
  }
  if (rc.dataset.empty()) {
    throw std::invalid_argument("no dataset given (config key 'dataset' or --dataset)");
  }
  return rc;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failure on " + path.string());
  std::cerr << "wrote " << path.string() << "\n";
}

// accepts "a,b,c" lists and "lo:hi:step" ranges
std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  const auto parse_one = [&](const std::string& tok) {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
    return v;
  };
  try {
    if (text.find(':') != std::string::npos) {
      const auto a = text.find(':');
      const auto b = text.find(':', a + 1);
      if (b == std::string::npos) throw std::invalid_argument("range needs lo:hi:step");
      const double lo = parse_one(text.substr(0, a));
      const double hi = parse_one(text.substr(a + 1, b - a - 1));
      const double step = parse_one(text.substr(b + 1));
      if (!(step > 0.0) || hi < lo) throw std::invalid_argument("range needs lo <= hi, step > 0");
      for (double v = lo; v <= hi + 1e-9 * step; v += step) values.push_back(v);
    } else {
      std::size_t pos = 0;
      while (pos <= text.size()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        const std::string tok = text.substr(pos, comma - pos);
        if (tok.empty()) throw std::invalid_argument("empty list entry");
        values.push_back(parse_one(tok));
        pos = comma + 1;
      }
    }
  } catch (const std::exception& e) {
    throw std::invalid_argument("malformed values '" + text + "': " + e.what());
  }
  if (values.empty()) throw std::invalid_argument("empty value list");
  return values;
}

std::vector<std::string> dedupe_methods(const std::vector<std::string>& methods) {
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (const auto& m : methods) {
    if (seen.insert(m).second) {
      unique.push_back(m);
    } else {
      std::cerr << "warning: method '" << m << "' requested twice, keeping one\n";
    }
  }
  return unique;
}

int cmd_inspect(const std::string& path) {
  const QosMatrix m = parse_wsdream_matrix(path);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double sum = 0.0;
  const std::size_t count = m.observed_count();
  for (std::size_t u = 0; u < m.users(); ++u) {
    for (std::size_t s = 0; s < m.services(); ++s) {
      if (!m.observed(u, s)) continue;
      const double v = m.value(u, s);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
  }
  const double density = static_cast<double>(count) /
                         (static_cast<double>(m.users()) * static_cast<double>(m.services()));
  std::cout << path << ":\n"
            << "  users:    " << m.users() << "\n"
            << "  services: " << m.services() << "\n"
            << "  observed: " << count << " (density " << csv_number(density) << ")\n";
  if (count > 0) {
    std::cout << "  value min/mean/max: " << csv_number(lo) << " / "
              << csv_number(sum / static_cast<double>(count)) << " / " << csv_number(hi) << "\n";
  }
  return 0;
}

int cmd_compare(const CommonFlags& flags, const std::vector<std::string>& method_override) {
  RunConfig rc = load_config(flags);
  if (!method_override.empty()) rc.methods = method_override;
  const std::vector<std::string> methods = dedupe_methods(rc.methods);
  const QosMatrix source = parse_wsdream_matrix(rc.dataset);

  std::vector<EvalReport> reports;
  for (double density : rc.density_grid()) {
    for (const auto& method : methods) {
      reports.push_back(run_experiment(source, rc.at_density(density), method));
    }
  }

  const std::string table = compare_csv(reports);
  std::cout << table;
  if (!flags.out_dir.empty()) {
    write_file(flags.out_dir, "compare.csv", table);
    write_file(flags.out_dir, "results.csv", results_csv(reports));
    write_file(flags.out_dir, "summary.csv", summary_csv(reports));
  }

  // per density and depth, name the winner on stderr
  for (double density : rc.density_grid()) {
    for (std::size_t k : rc.cfg.ndcg_ks) {
      const EvalReport* best = nullptr;
      for (const auto& r : reports) {
        if (r.config.density != density) continue;
        if (!best || r.ndcg_mean.at(k) > best->ndcg_mean.at(k)) best = &r;
      }
      if (best) {
        std::cerr << "best ndcg_" << k << " @ density " << csv_number(density) << ": "
                  << best->method << " (" << csv_number(best->ndcg_mean.at(k)) << ")\n";
      }
    }
  }
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& method, const std::string& param,
              const std::string& values_text) {
  RunConfig rc = load_config(flags);
  const std::vector<double> values = parse_values(values_text);
  const QosMatrix source = parse_wsdream_matrix(rc.dataset);

  std::vector<EvalReport> reports;
  for (double density : rc.density_grid()) {
    auto batch = parameter_sweep(source, rc.at_density(density), method, param, values);
    for (auto& r : batch) reports.push_back(std::move(r));
  }
  const std::string table = sweep_csv(param, reports);
  std::cout << table;
  if (!flags.out_dir.empty()) write_file(flags.out_dir, "sweep_" + param + ".csv", table);
  return 0;
}

int cmd_trace(const CommonFlags& flags) {
  RunConfig rc = load_config(flags);
  const QosMatrix source = parse_wsdream_matrix(rc.dataset);
  // the densities of the convergence study, unless the config pins its own
  const std::vector<double> densities =
      rc.densities.empty() ? std::vector<double>{0.1, 0.2, 0.3, 0.4} : rc.densities;
  const std::string dir = flags.out_dir.empty() ? "." : flags.out_dir;
  for (double density : densities) {
    const auto rows = convergence_trace(source, rc.at_density(density));
    const int pct = static_cast<int>(std::lround(density * 100.0));
    write_file(dir, "trace_density" + std::to_string(pct) + ".csv", trace_csv(rows));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoS-aware Web service recommendation benchmark"};
  app.require_subcommand(1);

  std::string inspect_path;
  CLI::App* inspect = app.add_subcommand("inspect", "summarize a WS-Dream matrix file");
  inspect->add_option("file", inspect_path, "matrix file")->required();

  CommonFlags compare_flags;
  std::vector<std::string> compare_methods;
  CLI::App* compare = app.add_subcommand("compare", "repetition-averaged method comparison");
  add_common(compare, compare_flags);
  compare->add_option("--methods", compare_methods,
                      "method ids (default: config or all implemented)")
      ->delimiter(',');

  CommonFlags sweep_flags;
  std::string sweep_method = "2rhyrec";
  std::string sweep_param;
  std::string sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one model parameter");
  add_common(sweep, sweep_flags);
  sweep->add_option("--method", sweep_method, "method id (default 2rhyrec)");
  sweep->add_option("--param", sweep_param, "topK | beta | F | topk_neighbors")->required();
  sweep->add_option("--values", sweep_values, "comma list or lo:hi:step range")->required();

  CommonFlags trace_flags;
  CLI::App* trace = app.add_subcommand("trace", "per-epoch convergence trace");
  add_common(trace, trace_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (inspect->parsed()) return cmd_inspect(inspect_path);
    if (compare->parsed()) return cmd_compare(compare_flags, compare_methods);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_method, sweep_param, sweep_values);
    if (trace->parsed()) return cmd_trace(trace_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
