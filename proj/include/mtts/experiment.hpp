#pragma once

// Repeated seeded runs over the registered problems, summary statistics and
// CSV / plain-text reporting.

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "benchmarks.hpp"
#include "controller.hpp"
#include "core.hpp"
#include "hydraulic.hpp"
#include "multithread.hpp"
#include "search_config.hpp"

namespace mtts::experiment {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::array<std::string_view, 4> problem_names{"schwefel10", "bump20", "bump50",
                                                               "circuit"};

struct ProblemOptions {
  benchmarks::BumpVariant bump_variant = benchmarks::BumpVariant::printed;
  hydraulic::CircuitTargets circuit;
};

struct Problem {
  std::string name;
  Objective objective;
  StartPoint recommended_start;
  std::vector<std::string> param_names;
};

inline std::vector<std::string> indexed_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

inline Problem make_problem(std::string_view name, const ProblemOptions& options = {}) {
  Problem p;
  p.name = std::string(name);
  if (name == "schwefel10") {
    p.objective = benchmarks::make_schwefel_objective(10);
  } else if (name == "bump20" || name == "bump50") {
    const std::size_t n = name == "bump20" ? 20 : 50;
    p.objective = benchmarks::make_bump_objective(n, options.bump_variant);
    p.recommended_start = Vector(n, benchmarks::bump_recommended_start);
  } else if (name == "circuit") {
    p.objective = hydraulic::make_circuit_objective(options.circuit);
    p.param_names.assign(hydraulic::param_names.begin(), hydraulic::param_names.end());
  } else {
    throw ConfigError("unknown problem: " + std::string(name));
  }
  if (p.param_names.empty()) p.param_names = indexed_names(p.objective.space.dimension());
  return p;
}

enum class Method { single, multi };
enum class StartMode { seeded_fixed, random };

struct ExperimentSpec {
  std::string problem = "schwefel10";
  Method method = Method::single;
  std::optional<StartMode> start;  // default: seeded_fixed when the problem defines one
  int runs = 5;
  std::uint64_t base_seed = 42;
  SearchConfig search;
  ProblemOptions problem_options;
  bool lockstep = true;
  unsigned jobs = 1;
  bool record_timing = false;
  std::optional<std::string> out;
};

namespace detail {

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
  return value;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(text) + "'");
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

}  // namespace detail

/// Applies one `key = value` setting. Throws ConfigError on unknown keys or
/// unparsable values.
inline void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  using detail::parse_bool;
  using detail::parse_number;
  SearchConfig& s = spec.search;

  if (key == "problem") {
    if (std::find(problem_names.begin(), problem_names.end(), value) == problem_names.end())
      throw ConfigError("unknown problem: " + std::string(value));
    spec.problem = std::string(value);
  } else if (key == "method") {
    if (value == "single") spec.method = Method::single;
    else if (value == "multi") spec.method = Method::multi;
    else throw ConfigError("method must be single or multi");
  } else if (key == "start") {
    if (value == "seeded-fixed" || value == "seeded" || value == "fixed")
      spec.start = StartMode::seeded_fixed;
    else if (value == "random") spec.start = StartMode::random;
    else throw ConfigError("start must be seeded-fixed or random");
  } else if (key == "runs") {
    spec.runs = parse_number<int>(key, value);
    if (spec.runs < 1) throw ConfigError("runs must be >= 1");
  } else if (key == "seed") {
    spec.base_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    spec.out = std::string(value);
  } else if (key == "jobs") {
    spec.jobs = std::max(1u, parse_number<unsigned>(key, value));
  } else if (key == "timing") {
    spec.record_timing = parse_bool(key, value);
  } else if (key == "lockstep") {
    spec.lockstep = parse_bool(key, value);
  } else if (key == "n_tabu") {
    s.n_tabu = parse_number<std::size_t>(key, value);
  } else if (key == "m_elite") {
    s.m_elite = parse_number<std::size_t>(key, value);
  } else if (key == "k_pattern") {
    s.k_pattern = parse_number<double>(key, value);
  } else if (key == "step_initial") {
    s.step_initial = parse_number<double>(key, value);
  } else if (key == "step_reduce_factor") {
    s.step_reduce_factor = parse_number<double>(key, value);
  } else if (key == "step_min") {
    s.step_min = parse_number<double>(key, value);
  } else if (key == "intensify_threshold") {
    s.intensify_threshold = parse_number<int>(key, value);
  } else if (key == "diversify_threshold") {
    s.diversify_threshold = parse_number<int>(key, value);
  } else if (key == "reduce_threshold") {
    s.reduce_threshold = parse_number<int>(key, value);
  } else if (key == "max_evals") {
    s.max_evals = parse_number<std::uint64_t>(key, value);
  } else if (key == "match_tol") {
    s.match_tol = parse_number<double>(key, value);
  } else if (key == "improvement_tol") {
    s.improvement_tol = parse_number<double>(key, value);
  } else if (key == "bump_variant") {
    if (value == "printed") spec.problem_options.bump_variant = benchmarks::BumpVariant::printed;
    else if (value == "keane") spec.problem_options.bump_variant = benchmarks::BumpVariant::keane;
    else throw ConfigError("bump_variant must be printed or keane");
  } else if (key == "pump_speed") {
    spec.problem_options.circuit.pump_speed = parse_number<double>(key, value);
    if (!(spec.problem_options.circuit.pump_speed > 0.0)) throw ConfigError("pump_speed must be > 0");
  } else if (key == "omega1_target") {
    spec.problem_options.circuit.omega1_target = parse_number<double>(key, value);
  } else if (key == "omega2_target") {
    spec.problem_options.circuit.omega2_target = parse_number<double>(key, value);
  } else if (key == "starvation_policy") {
    try {
      spec.problem_options.circuit.policy = hydraulic::parse_starvation_policy(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    throw ConfigError("unknown setting: " + std::string(key));
  }
}

/// Parses `key = value` lines; `#` starts a comment.
inline std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    std::string_view v(line);
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = detail::trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = detail::trim(v.substr(0, eq));
    const auto value = detail::trim(v.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

/// Splits a `key=value` command-line override.
inline std::pair<std::string, std::string> split_override(std::string_view kv) {
  const auto eq = kv.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override must be key=value: " + std::string(kv));
  return {std::string(detail::trim(kv.substr(0, eq))), std::string(detail::trim(kv.substr(eq + 1)))};
}

struct ResultRow {
  int run_index = 0;  // 1-based
  std::uint64_t seed = 0;
  double best_value = 0.0;  // native sense
  std::uint64_t evals = 0;
  Vector best_params;
  double wall_ms = 0.0;
};

struct Summary {
  double mean_value = 0.0, median_value = 0.0, min_value = 0.0, max_value = 0.0;
  double mean_evals = 0.0, median_evals = 0.0, min_evals = 0.0, max_evals = 0.0;
};

struct ExperimentResult {
  std::vector<std::string> param_names;
  std::vector<ResultRow> rows;
  Summary summary;
  bool timing = false;
};

namespace detail {

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace detail

inline Summary summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("cannot summarize zero rows");
  std::vector<double> values, evals;
  for (const auto& r : rows) {
    values.push_back(r.best_value);
    evals.push_back(static_cast<double>(r.evals));
  }
  Summary s;
  s.mean_value = detail::mean(values);
  s.median_value = detail::median(values);
  s.min_value = *std::min_element(values.begin(), values.end());
  s.max_value = *std::max_element(values.begin(), values.end());
  s.mean_evals = detail::mean(evals);
  s.median_evals = detail::median(evals);
  s.min_evals = *std::min_element(evals.begin(), evals.end());
  s.max_evals = *std::max_element(evals.begin(), evals.end());
  return s;
}

/// One run of the experiment; depends only on the spec and the run index.
inline ResultRow run_one(const ExperimentSpec& spec, const Problem& problem, int run_index) {
  const StartMode start =
      spec.start.value_or(problem.recommended_start ? StartMode::seeded_fixed : StartMode::random);
  if (start == StartMode::seeded_fixed && !problem.recommended_start)
    throw ConfigError("problem " + problem.name + " has no recommended start point");
  const StartPoint fixed = start == StartMode::seeded_fixed ? problem.recommended_start : std::nullopt;

  SearchConfig cfg = spec.search;
  cfg.seed = spec.base_seed + static_cast<std::uint64_t>(run_index);

  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  if (spec.method == Method::single) {
    r = run_single(problem.objective, cfg, fixed);
  } else {
    // One thread from the recommended point (when seeded), the other random.
    MultiConfig m{cfg, fixed, std::nullopt, spec.lockstep};
    r = run_multi(problem.objective, m).combined;
  }
  const auto t1 = std::chrono::steady_clock::now();

  ResultRow row;
  row.run_index = run_index + 1;
  row.seed = cfg.seed;
  row.best_value = r.best_native;
  row.evals = r.evals;
  row.best_params = r.best_raw;
  row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.runs < 1) throw ConfigError("runs must be >= 1");
  const Problem problem = make_problem(spec.problem, spec.problem_options);
  resolve(spec.search, problem.objective.space);  // validate before spawning work

  ExperimentResult out;
  out.param_names = problem.param_names;
  out.timing = spec.record_timing;
  out.rows.resize(static_cast<std::size_t>(spec.runs));

  const unsigned workers = std::min<unsigned>(spec.jobs, static_cast<unsigned>(spec.runs));
  if (workers <= 1) {
    for (int i = 0; i < spec.runs; ++i) out.rows[i] = run_one(spec, problem, i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          try {
            for (int i = next++; i < spec.runs; i = next++) out.rows[i] = run_one(spec, problem, i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  out.summary = summarize(out.rows);
  return out;
}

/// Six significant digits, shared by the CSV and the terminal table.
inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace detail {

inline std::vector<std::vector<std::string>> cells(const ExperimentResult& r) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"run", "seed", "best_value", "evals", "wall_ms"};
  header.insert(header.end(), r.param_names.begin(), r.param_names.end());
  table.push_back(std::move(header));
  for (const auto& row : r.rows) {
    std::vector<std::string> line{std::to_string(row.run_index), std::to_string(row.seed),
                                  format_value(row.best_value), std::to_string(row.evals),
                                  r.timing ? format_value(row.wall_ms) : std::string()};
    for (double p : row.best_params) line.push_back(format_value(p));
    table.push_back(std::move(line));
  }
  table.push_back({"AVERAGE", "", format_value(r.summary.mean_value),
                   format_value(r.summary.mean_evals), "", ""});
  return table;
}

}  // namespace detail

inline std::string to_csv(const ExperimentResult& r) {
  if (r.rows.empty()) throw std::invalid_argument("no result rows to write");
  std::string out;
  for (const auto& line : detail::cells(r)) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += ',';
      out += line[i];
    }
    out += '\n';
  }
  return out;
}

/// Writes the CSV to `path`. Nothing is created when there are no rows.
inline void emit_csv(const ExperimentResult& r, const std::filesystem::path& path) {
  const std::string text = to_csv(r);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

inline std::string emit_table(const ExperimentResult& r) {
  if (r.rows.empty()) throw std::invalid_argument("no result rows to render");
  const auto table = detail::cells(r);
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& line : table)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());

  std::ostringstream os;
  for (const auto& line : table) {
    std::string text;
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string& cell = i < line.size() ? line[i] : std::string();
      if (i) text += "  ";
      text += std::string(width[i] - cell.size(), ' ') + cell;
    }
    text.erase(text.find_last_not_of(' ') + 1);
    os << text << '\n';
  }
  return os.str();
}

}  // namespace mtts::experiment
