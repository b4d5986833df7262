// Command-line experiment runner: repeated seeded tabu search runs on one of
// the registered problems, printed as a table and optionally saved as CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "mtts/experiment.hpp"

namespace ex = mtts::experiment;

int main(int argc, char** argv) {
  CLI::App app{"Single- and multi-thread tabu search experiment runner"};

  std::optional<std::string> problem, method, start, out, config_path;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::vector<std::string> overrides;
  bool timing = false;
  bool list = false;

  app.add_option("--problem", problem, "schwefel10 | bump20 | bump50 | circuit");
  app.add_option("--method", method, "single | multi");
  app.add_option("--runs", runs, "number of seeded runs");
  app.add_option("--seed", seed, "base seed; run i uses seed + i");
  app.add_option("--start", start, "seeded-fixed | random");
  app.add_option("--out", out, "write results as CSV to this path");
  app.add_option("--config", config_path, "key = value config file; flags take precedence");
  app.add_option("--set", overrides, "override any setting, key=value (repeatable)");
  app.add_option("--jobs", jobs, "run this many experiment runs in parallel");
  app.add_flag("--timing", timing, "record wall time per run in the output");
  app.add_flag("--list", list, "list registered problems and exit");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (auto name : ex::problem_names) std::cout << name << '\n';
    return 0;
  }

  ex::ExperimentSpec spec;
  try {
    std::vector<std::pair<std::string, std::string>> settings;
    if (config_path) {
      std::ifstream in(*config_path);
      if (!in) throw ex::ConfigError("cannot read config file " + *config_path);
      settings = ex::parse_config(in);
    }
    if (problem) settings.emplace_back("problem", *problem);
    if (method) settings.emplace_back("method", *method);
    if (runs) settings.emplace_back("runs", std::to_string(*runs));
    if (seed) settings.emplace_back("seed", std::to_string(*seed));
    if (start) settings.emplace_back("start", *start);
    if (out) settings.emplace_back("out", *out);
    if (jobs) settings.emplace_back("jobs", std::to_string(*jobs));
    if (timing) settings.emplace_back("timing", "true");
    for (const auto& kv : overrides) settings.push_back(ex::split_override(kv));

    for (const auto& [key, value] : settings) ex::apply_setting(spec, key, value);
    // Surface bad search settings as configuration errors before running.
    mtts::resolve(spec.search, ex::make_problem(spec.problem, spec.problem_options).objective.space);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const ex::ExperimentResult result = ex::run_experiment(spec);
    std::cout << ex::emit_table(result);
    if (spec.out) ex::emit_csv(result, *spec.out);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
