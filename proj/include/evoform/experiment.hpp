#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "evoform/convergence_study.hpp"

namespace evoform {

// Raised for malformed configs: unknown keys, bad values, missing files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value experiment description. Full-line '#' comments allowed.
struct ExperimentConfig {
  std::string scenario = "constant";
  std::map<std::string, std::string> params;  // forwarded to the scenario registry
  int triple_size = 15;
  std::string u0 = "mode_1";
  std::string load = "zero";
  std::string kind = "both";       // step | linear | both
  std::vector<int> n_list = {4, 8, 16, 32};
  int steps_per_interval = 64;
  double theta = 0.5;
  std::string reference = "auto";  // auto | oracle | fine
  std::string output;              // CSV path; empty writes to the provided stream
  unsigned long seed = 0;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Exact header row of result CSVs.
const std::string& csv_header();
void write_csv_record(std::ostream& out, const ConvergenceRecord& record);

// Runs the sweep described by the config file. Rows go to the file named by
// `output`, or to `out` when none is set. Returns a process exit code:
// 0 success, 2 config error, 3 solver failure (partial CSV, '# aborted:' row).
int run_experiment(const std::string& config_path, int threads, std::ostream& out,
                   std::ostream& diagnostics);

}  // namespace evoform
