#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "evoform/experiment.hpp"
#include "evoform/registry.hpp"
#include "evoform/verify.hpp"

namespace {

int env_threads() {
  const char* value = std::getenv("EVOFORM_THREADS");
  if (value == nullptr) return 1;
  return std::max(1, std::atoi(value));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolution-by-forms toolkit: convergence sweeps and self checks"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "execute a sweep described by a config file");
  run->add_option("config", config_path, "flat key=value config file")->required();

  unsigned long seed = 0;
  bool inject_fault = false;
  CLI::App* verify = app.add_subcommand("verify", "run the deterministic property suite");
  verify->add_option("--seed", seed, "sampling seed for the property suite");
  verify->add_flag("--inject-fault", inject_fault)->group("");

  CLI::App* scenarios = app.add_subcommand("scenarios", "list registered scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return evoform::run_experiment(config_path, env_threads(), std::cout, std::cerr);
    if (verify->parsed()) {
      const evoform::VerifyResult result = evoform::run_verify(seed, inject_fault);
      std::cout << result.report;
      return result.all_passed ? 0 : 1;
    }
    if (scenarios->parsed()) {
      for (const auto& info : evoform::scenario_registry())
        std::cout << info.name << "\n  " << info.summary << "\n  defaults: "
                  << info.defaults << "\n";
      return 0;
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
  return 0;
}
