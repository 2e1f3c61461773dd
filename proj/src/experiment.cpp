#include "evoform/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "evoform/random.hpp"
#include "evoform/registry.hpp"
#include "evoform/scenarios.hpp"

namespace evoform {

namespace {

using Vec = DenseVector<double>;
using Fn = std::function<Vec(double)>;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double parsed = to_double(key, value);
  const int rounded = static_cast<int>(parsed);
  if (static_cast<double>(rounded) != parsed)
    throw ConfigError("expected integer for '" + key + "': " + value);
  return rounded;
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) out.push_back(to_int(key, trim(item)));
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

void validate(const ExperimentConfig& config) {
  if (config.triple_size < 1 || config.triple_size > 63)
    throw ConfigError("triple_size must lie in [1, 63]");
  if (config.kind != "step" && config.kind != "linear" && config.kind != "both")
    throw ConfigError("kind must be step, linear, or both");
  if (config.reference != "auto" && config.reference != "oracle" &&
      config.reference != "fine")
    throw ConfigError("reference must be auto, oracle, or fine");
  if (config.theta < 0.5 || config.theta > 1.0)
    throw ConfigError("theta must lie in [0.5, 1]");
  if (config.steps_per_interval < 1)
    throw ConfigError("steps_per_interval must be positive");
  int previous = 0;
  for (int n : config.n_list) {
    if (n <= previous)
      throw ConfigError("n_list must be strictly increasing and positive");
    previous = n;
  }
}

Vec make_initial(const std::string& preset, const GelfandTriple<double>& triple,
                 unsigned long seed) {
  if (preset == "zero") return Vec::Zero(triple.dim);
  if (preset == "constant") return Vec::Ones(triple.dim);
  if (preset == "random") {
    SeededRng rng(seed);
    return rng.gaussian_vector<double>(triple.dim);
  }
  if (preset.rfind("mode_", 0) == 0) {
    const int k = to_int("u0", preset.substr(5));
    if (k < 1 || k > static_cast<int>(triple.dim))
      throw ConfigError("mode index out of range: " + preset);
    return eigenmode(triple, triple.gram_V, k);
  }
  throw ConfigError("unknown initial state preset: " + preset);
}

Fn make_load(const std::string& preset, const GelfandTriple<double>& triple,
             unsigned long seed) {
  if (preset == "zero") return Fn{};
  Vec profile;
  if (preset == "constant") {
    profile = Vec::Ones(triple.dim);
  } else if (preset == "random") {
    SeededRng rng(seed + 1);
    profile = rng.gaussian_vector<double>(triple.dim);
  } else if (preset.rfind("mode_", 0) == 0) {
    const int k = to_int("f", preset.substr(5));
    if (k < 1 || k > static_cast<int>(triple.dim))
      throw ConfigError("mode index out of range: " + preset);
    profile = eigenmode(triple, triple.gram_V, k);
  } else {
    throw ConfigError("unknown load preset: " + preset);
  }
  return [profile](double) { return profile; };
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second)
      throw ConfigError("duplicate key: " + key);

    if (key == "scenario") {
      config.scenario = value;
    } else if (key.rfind("param.", 0) == 0) {
      const std::string name = key.substr(6);
      if (name.empty()) throw ConfigError("empty parameter name in '" + key + "'");
      config.params[name] = value;
    } else if (key == "horizon" || key == "omega") {
      config.params[key] = value;
    } else if (key == "triple_size") {
      config.triple_size = to_int(key, value);
    } else if (key == "u0") {
      config.u0 = value;
    } else if (key == "f") {
      config.load = value;
    } else if (key == "kind") {
      config.kind = value;
    } else if (key == "n_list") {
      config.n_list = to_int_list(key, value);
    } else if (key == "steps_per_interval") {
      config.steps_per_interval = to_int(key, value);
    } else if (key == "theta") {
      config.theta = to_double(key, value);
    } else if (key == "reference") {
      config.reference = value;
    } else if (key == "output") {
      config.output = value;
    } else if (key == "seed") {
      config.seed = static_cast<unsigned long>(to_int(key, value));
    } else {
      throw ConfigError("unknown key: " + key);
    }
  }
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

const std::string& csv_header() {
  static const std::string header =
      "kind,n_intervals,mesh,mrVVdual_error,l2V_error,l2H_error,h1H_norm,"
      "supV_norm,energy_residual,apriori_supV_ok,apriori_h1_ok,wall_seconds";
  return header;
}

void write_csv_record(std::ostream& out, const ConvergenceRecord& record) {
  out << kind_name(record.kind) << ',' << record.n_intervals << ','
      << format_double(record.mesh) << ',' << format_double(record.mrVVdual_error)
      << ',' << format_double(record.l2V_error) << ','
      << format_double(record.l2H_error) << ',' << format_double(record.h1H_norm)
      << ',' << format_double(record.supV_norm) << ','
      << format_double(record.energy_residual) << ','
      << (record.apriori_supV_ok ? "true" : "false") << ','
      << (record.apriori_h1_ok ? "true" : "false") << ','
      << format_double(record.wall_seconds) << '\n';
}

int run_experiment(const std::string& config_path, int threads, std::ostream& out,
                   std::ostream& diagnostics) {
  ExperimentConfig config;
  GelfandTriple<double> triple;
  Scenario<double> scenario;
  Vec u0;
  Fn load;
  ReferenceKind reference = ReferenceKind::FineGrid;
  try {
    config = load_config(config_path);
    triple = build_fem_triple<double>(config.triple_size);
    scenario = make_scenario(config.scenario, config.params, triple);
    if (scenario.family.omega != 0.0)
      throw ConfigError("sweeps require omega=0; rescale through the shift helper");
    u0 = make_initial(config.u0, triple, config.seed);
    load = make_load(config.load, triple, config.seed);
    if (config.reference == "oracle" && !scenario.separable)
      throw ConfigError("scenario '" + config.scenario +
                        "' has no separable oracle; use reference=fine");
    const bool use_oracle =
        config.reference == "oracle" ||
        (config.reference == "auto" && scenario.separable.has_value());
    reference = use_oracle ? ReferenceKind::SpectralOracle : ReferenceKind::FineGrid;
  } catch (const std::exception& error) {
    diagnostics << "config error: " << error.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!config.output.empty()) {
    file.open(config.output, std::ios::binary);
    if (!file) {
      diagnostics << "config error: cannot open output file: " << config.output
                  << '\n';
      return 2;
    }
  }
  std::ostream& csv = config.output.empty() ? out : file;

  StudyOptions options;
  options.steps_per_interval = config.steps_per_interval;
  options.theta = config.theta;
  options.threads = std::max(1, threads);

  std::vector<ApproximantKind> kinds;
  if (config.kind == "step" || config.kind == "both")
    kinds.push_back(ApproximantKind::Step);
  if (config.kind == "linear" || config.kind == "both")
    kinds.push_back(ApproximantKind::Linear);

  csv << csv_header() << '\n';
  for (ApproximantKind kind : kinds) {
    std::vector<ConvergenceRecord> records;
    try {
      records = convergence_study(scenario, load, u0, kind, config.n_list, triple,
                                  reference, options);
    } catch (const std::exception& error) {
      csv << "# aborted: " << error.what() << '\n';
      csv.flush();
      diagnostics << "solver failure: " << error.what() << '\n';
      return 3;
    }
    for (const ConvergenceRecord& record : records) write_csv_record(csv, record);
  }
  csv.flush();
  return 0;
}

}  // namespace evoform
