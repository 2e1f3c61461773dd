#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "evoform/experiment.hpp"
#include "evoform/registry.hpp"
#include "evoform/verify.hpp"

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string drop_last_column(const std::string& row) {
  return row.substr(0, row.rfind(','));
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

}  // namespace

TEST_CASE("config parser applies defaults and overrides") {
  std::istringstream in(
      "# demo configuration\n"
      "scenario = jump_coeff\n"
      "param.times = 0.25\n"
      "param.values = 1,2\n"
      "n_list = 2,4,8\n"
      "kind = step\n"
      "theta = 1\n"
      "seed = 9\n");
  const auto config = evoform::parse_config(in);
  CHECK(config.scenario == "jump_coeff");
  CHECK(config.params.at("times") == "0.25");
  CHECK(config.params.at("values") == "1,2");
  CHECK(config.n_list == std::vector<int>{2, 4, 8});
  CHECK(config.kind == "step");
  CHECK(config.theta == 1.0);
  CHECK(config.seed == 9);
  // untouched defaults
  CHECK(config.triple_size == 15);
  CHECK(config.steps_per_interval == 64);
  CHECK(config.reference == "auto");
  CHECK(config.u0 == "mode_1");
  CHECK(config.load == "zero");
  CHECK(config.output.empty());
}

TEST_CASE("config parser rejects malformed input") {
  auto expect_reject = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(evoform::parse_config(in), evoform::ConfigError);
  };
  expect_reject("bogus_key = 1\n");
  expect_reject("scenario = constant\nscenario = linear_coeff\n");
  expect_reject("theta = 0.25\n");
  expect_reject("theta = 1.5\n");
  expect_reject("n_list = 8,4\n");
  expect_reject("n_list = 4,,8\n");
  expect_reject("n_list =\n");
  expect_reject("triple_size = 0\n");
  expect_reject("triple_size = 64\n");
  expect_reject("steps_per_interval = 0\n");
  expect_reject("kind = cubic\n");
  expect_reject("reference = tea_leaves\n");
  expect_reject("just a line without equals\n");
  expect_reject("param. = 1\n");
}

TEST_CASE("registry builds scenarios with overridden parameters") {
  const auto triple = evoform::build_fem_triple<double>(7);
  const auto sc = evoform::make_scenario(
      "jump_coeff", {{"times", "0.2,0.6"}, {"values", "1,2,4"}, {"horizon", "2"}},
      triple);
  CHECK(sc.name == "jump_coeff");
  CHECK(sc.family.horizon == 2.0);
  CHECK(sc.family.jump_times == std::vector<double>{0.2, 0.6});
  CHECK((sc.family.evaluate(1.9) - 4.0 * triple.gram_V).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(sc.separable.has_value());

  const auto constant = evoform::make_scenario("constant", {{"c", "3"}}, triple);
  CHECK(constant.family.alpha == doctest::Approx(3.0));
  CHECK(constant.family.bound_M == doctest::Approx(3.0));

  const auto shifted = evoform::make_scenario("linear_coeff", {{"omega", "1"}}, triple);
  CHECK(shifted.family.omega == 1.0);
  CHECK_FALSE(shifted.separable.has_value());

  CHECK_THROWS(evoform::make_scenario("warp_drive", {}, triple));
  CHECK_THROWS(evoform::make_scenario("constant", {{"banana", "1"}}, triple));
  CHECK_THROWS(evoform::make_scenario("jump_coeff",
                                      {{"times", "0.5"}, {"values", "1"}}, triple));
  CHECK_THROWS(evoform::make_scenario("constant", {{"c", "-1"}}, triple));
}

TEST_CASE("registry lists every scenario with defaults") {
  const auto& registry = evoform::scenario_registry();
  REQUIRE(registry.size() == 5);
  const auto triple = evoform::build_fem_triple<double>(3);
  for (const auto& info : registry) {
    CHECK_FALSE(info.summary.empty());
    CHECK_FALSE(info.defaults.empty());
    CHECK_NOTHROW(evoform::make_scenario(info.name, {}, triple));
  }
}

TEST_CASE("csv header is frozen") {
  CHECK(evoform::csv_header() ==
        "kind,n_intervals,mesh,mrVVdual_error,l2V_error,l2H_error,h1H_norm,"
        "supV_norm,energy_residual,apriori_supV_ok,apriori_h1_ok,wall_seconds");
}

TEST_CASE("experiments write schema-true deterministic csv") {
  const std::string cfg_path = "cli_sweep.cfg";
  write_file(cfg_path,
             "scenario = separable_spectral\n"
             "kind = both\n"
             "n_list = 2,4\n"
             "steps_per_interval = 16\n"
             "output = cli_sweep_a.csv\n");
  std::ostringstream out, diag;
  REQUIRE(evoform::run_experiment(cfg_path, 1, out, diag) == 0);

  const auto lines = read_lines("cli_sweep_a.csv");
  REQUIRE(lines.size() == 5);  // header + 2 kinds x 2 refinements
  CHECK(lines[0] == evoform::csv_header());
  CHECK(lines[1].rfind("step,2,0.5,", 0) == 0);
  CHECK(lines[2].rfind("step,4,0.25,", 0) == 0);
  CHECK(lines[3].rfind("linear,2,0.5,", 0) == 0);
  CHECK(lines[4].rfind("linear,4,0.25,", 0) == 0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].find("nan") == std::string::npos);
    CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 11);
  }

  // A second run with a different thread count matches except wall time.
  const std::string cfg_b = "cli_sweep_b.cfg";
  write_file(cfg_b,
             "scenario = separable_spectral\n"
             "kind = both\n"
             "n_list = 2,4\n"
             "steps_per_interval = 16\n"
             "output = cli_sweep_b.csv\n");
  REQUIRE(evoform::run_experiment(cfg_b, 3, out, diag) == 0);
  const auto again = read_lines("cli_sweep_b.csv");
  REQUIRE(again.size() == lines.size());
  for (std::size_t i = 1; i < lines.size(); ++i)
    CHECK(drop_last_column(lines[i]) == drop_last_column(again[i]));

  std::remove(cfg_path.c_str());
  std::remove(cfg_b.c_str());
  std::remove("cli_sweep_a.csv");
  std::remove("cli_sweep_b.csv");
}

TEST_CASE("experiments stream csv when no output file is set") {
  const std::string cfg_path = "cli_stdout.cfg";
  write_file(cfg_path,
             "scenario = constant\n"
             "kind = step\n"
             "n_list = 2\n"
             "steps_per_interval = 8\n");
  std::ostringstream out, diag;
  REQUIRE(evoform::run_experiment(cfg_path, 1, out, diag) == 0);
  const std::string text = out.str();
  CHECK(text.rfind(evoform::csv_header() + "\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  std::remove(cfg_path.c_str());
}

TEST_CASE("experiment exit codes distinguish config failures") {
  std::ostringstream out, diag;
  CHECK(evoform::run_experiment("no_such_file.cfg", 1, out, diag) == 2);
  CHECK(diag.str().find("config error") != std::string::npos);

  write_file("cli_bad_scenario.cfg", "scenario = warp_drive\n");
  CHECK(evoform::run_experiment("cli_bad_scenario.cfg", 1, out, diag) == 2);
  std::remove("cli_bad_scenario.cfg");

  write_file("cli_bad_omega.cfg", "omega = 2\n");
  CHECK(evoform::run_experiment("cli_bad_omega.cfg", 1, out, diag) == 2);
  std::remove("cli_bad_omega.cfg");

  write_file("cli_bad_key.cfg", "scenario = constant\nfrobnicate = yes\n");
  CHECK(evoform::run_experiment("cli_bad_key.cfg", 1, out, diag) == 2);
  std::remove("cli_bad_key.cfg");
}

TEST_CASE("verify report is reproducible and fault injection trips one check") {
  const auto first = evoform::run_verify(3);
  const auto second = evoform::run_verify(3);
  CHECK(first.all_passed);
  CHECK(first.report == second.report);
  CHECK(first.report.find("property suite, seed=3") == 0);
  CHECK(first.report.find("[FAIL]") == std::string::npos);
  CHECK(first.report.find("result: 22/22 passed") != std::string::npos);

  const auto faulty = evoform::run_verify(3, true);
  CHECK_FALSE(faulty.all_passed);
  CHECK(faulty.report.find("[FAIL] scenario_axioms") != std::string::npos);
  CHECK(faulty.report.find("injected_asymmetric") != std::string::npos);
  CHECK(faulty.report.find("result: 21/22 passed") != std::string::npos);
}
