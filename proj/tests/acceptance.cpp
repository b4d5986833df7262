// Acceptance gate. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mtts/mtts.hpp"

namespace {

using namespace mtts;
using namespace mtts::experiment;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, const std::string& line) { o.detail += "    " + line + "\n"; }

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    note(o, "violated: " + what);
  }
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string list(const std::vector<double>& v, const char* f = "%.6g") {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + fmt(f, x);
  return "[" + s + "]";
}

ExperimentResult run(std::string problem, Method method, std::optional<StartMode> start,
                     std::uint64_t max_evals = SearchConfig{}.max_evals) {
  ExperimentSpec s;
  s.problem = std::move(problem);
  s.method = method;
  s.start = start;
  s.runs = 5;
  s.base_seed = 42;
  s.search.max_evals = max_evals;
  s.problem_options.bump_variant = benchmarks::BumpVariant::keane;
  return run_experiment(s);
}

std::vector<double> values(const ExperimentResult& r) {
  std::vector<double> v;
  for (const auto& row : r.rows) v.push_back(row.best_value);
  return v;
}

std::vector<double> evals(const ExperimentResult& r) {
  std::vector<double> v;
  for (const auto& row : r.rows) v.push_back(static_cast<double>(row.evals));
  return v;
}

constexpr double schwefel_target = -4189.83;

Outcome schwefel_single() {
  Outcome o;
  const auto r = run("schwefel10", Method::single, std::nullopt);
  note(o, "best values: " + list(values(r), "%.4f"));
  note(o, "evaluations: " + list(evals(r), "%.0f") + fmt(", median %.0f", r.summary.median_evals));
  for (const auto& row : r.rows) {
    require(o, std::abs(row.best_value - schwefel_target) <= 0.1,
            fmt("seed %llu within 0.1 of optimum", (unsigned long long)row.seed));
    require(o, row.evals <= 40000, fmt("seed %llu within 40000 evals", (unsigned long long)row.seed));
  }
  require(o, r.summary.median_evals <= 20000, "median evaluations <= 20000");
  return o;
}

Outcome schwefel_multi() {
  Outcome o;
  const auto single = run("schwefel10", Method::single, std::nullopt);
  const auto multi = run("schwefel10", Method::multi, std::nullopt);
  note(o, "best values: " + list(values(multi), "%.4f"));
  note(o, "evaluations: " + list(evals(multi), "%.0f") +
              fmt(" vs single-thread median %.0f", single.summary.median_evals));
  for (const auto& row : multi.rows) {
    require(o, std::abs(row.best_value - schwefel_target) <= 0.1,
            fmt("seed %llu within 0.1 of optimum", (unsigned long long)row.seed));
    require(o, static_cast<double>(row.evals) > single.summary.median_evals,
            fmt("seed %llu uses more evaluations than the single-thread median",
                (unsigned long long)row.seed));
  }
  return o;
}

Outcome bump_ordering_and_cap() {
  Outcome o;
  const auto multi = run("bump20", Method::multi, std::nullopt);
  const auto single = run("bump20", Method::single, StartMode::random);
  note(o, "n=20 multi:         " + list(values(multi)) + fmt(", mean %.6g", multi.summary.mean_value));
  note(o, "n=20 single random: " + list(values(single)) + fmt(", mean %.6g", single.summary.mean_value));
  require(o, multi.summary.mean_value >= single.summary.mean_value,
          "multi-thread mean >= single-thread random-start mean");
  for (const auto* r : {&multi, &single})
    for (double v : values(*r)) require(o, v >= 0.5 && v <= 0.82, fmt("n=20 value %.6g in [0.5, 0.82]", v));

  const auto m50 = run("bump50", Method::multi, std::nullopt);
  const auto s50 = run("bump50", Method::single, std::nullopt);
  note(o, "n=50 multi:         " + list(values(m50)));
  note(o, "n=50 single seeded: " + list(values(s50)));
  for (const auto* r : {&m50, &s50})
    for (double v : values(*r)) require(o, v <= 0.82, fmt("n=50 value %.6g <= 0.82", v));
  return o;
}

Outcome bump_seeded_spread() {
  Outcome o;
  const auto r = run("bump20", Method::single, StartMode::seeded_fixed);
  const auto v = values(r);
  const double spread = r.summary.max_value - r.summary.min_value;
  note(o, "best values: " + list(v) + fmt(", spread %.4g", spread));
  require(o, spread <= 0.05, "spread <= 0.05");
  return o;
}

Outcome circuit() {
  Outcome o;
  const auto r = run("circuit", Method::multi, std::nullopt, 10000);
  const hydraulic::CircuitTargets t;
  int hits = 0;
  for (const auto& row : r.rows) {
    const auto s = hydraulic::simulate_steady(hydraulic::CircuitParams::from_vector(row.best_params), t);
    const double e1 = s.omega1 - t.omega1_target, e2 = s.omega2 - t.omega2_target;
    const bool ok = std::abs(e1) <= 0.5 && std::abs(e2) <= 0.5 && row.evals <= 10000 + 64;
    hits += ok;
    note(o, fmt("seed %llu: omega1 err %+.2e, omega2 err %+.2e, q_rv %.3g L/min, %llu evals%s",
                (unsigned long long)row.seed, e1, e2, s.q_rv, (unsigned long long)row.evals,
                ok ? "" : "  (miss)"));
  }
  require(o, hits >= 4, fmt("speed targets met on >= 4 of 5 seeds (got %d)", hits));
  return o;
}

// Compact re-checks of the invariants the unit suites cover in depth.
Outcome properties() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  {  // tabu FIFO and exclusion
    TabuList t(7, 0.0);
    std::vector<Vector> pushed;
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
      pushed.push_back({u(rng), u(rng)});
      t.push(pushed.back());
      const std::size_t keep = std::min<std::size_t>(7, pushed.size());
      ok &= t.size() == keep;
      for (std::size_t k = 0; k < keep; ++k) ok &= t.entries()[k] == pushed[pushed.size() - keep + k];
      ok &= t.is_tabu(pushed.back());
    }
    require(o, ok, "tabu list FIFO / exclusion");
  }
  {  // elite ordering and offer semantics
    IntermediateMemory m(10);
    bool ok = true;
    double best = INFINITY;
    for (int i = 0; i < 500; ++i) {
      const SearchPoint p{{u(rng), u(rng)}, u(rng), true};
      if (m.offer(p) == OfferResult::inserted) best = std::min(best, p.value);
      const auto e = m.snapshot();
      ok &= e.size() <= 10 && e.front().value == best;
      for (std::size_t k = 1; k < e.size(); ++k) ok &= e[k - 1].value <= e[k].value;
    }
    ok &= m.offer(SearchPoint{{0.5, 0.5}, -1.0, false}) == OfferResult::rejected;
    require(o, ok, "elite memory ordering / offer semantics");
  }
  {  // diversification provenance and uniformity
    const std::vector<SearchPoint> elite{{{0.1, 0.9}, 0, true}};
    int hits = 0;
    bool traced = true;
    for (int i = 0; i < 10000; ++i) {
      const Vector x = diversify(std::span<const SearchPoint>(elite), rng);
      traced &= (x[0] == 0.1 || x[0] == 0.9) && (x[1] == 0.1 || x[1] == 0.9);
      hits += x[0] == 0.1;
    }
    require(o, traced, "diversification provenance");
    require(o, std::abs(hits / 10000.0 - 0.5) <= 0.02, fmt("diversification uniformity (%.4f)", hits / 1e4));
  }
  {  // pattern-move collinearity
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      const Vector a{u(rng)}, b{u(rng)};
      ok &= pattern_move(a, b, 1.0)[0] == std::clamp(b[0] + (b[0] - a[0]), 0.0, 1.0);
    }
    require(o, ok, "pattern-move collinearity");
  }
  {  // exact flow conservation
    bool ok = true;
    std::uniform_real_distribution<double> disp(1, 1000), flow(10, 100);
    for (auto policy : {hydraulic::StarvationPolicy::proportional, hydraulic::StarvationPolicy::priority_valve1}) {
      hydraulic::CircuitTargets t;
      t.policy = policy;
      for (int i = 0; i < 100000; ++i) {
        const auto s = hydraulic::simulate_steady({disp(rng), disp(rng), disp(rng), flow(rng), flow(rng)}, t);
        ok &= s.q1 + s.q2 + s.q_rv == s.q_pump;
      }
    }
    require(o, ok, "flow conservation q1 + q2 + q_rv == q_pump");
  }
  {  // objective oracles
    double worst = 0;
    std::uniform_real_distribution<double> sx(-500, 500), bx(0.5, 6);
    for (int i = 0; i < 1000; ++i) {
      Vector x(10);
      double direct = 0;
      for (double& v : x) {
        v = sx(rng);
        direct -= v * std::sin(std::sqrt(std::abs(v)));
      }
      worst = std::max(worst, std::abs(benchmarks::schwefel(x) - direct) / std::max(1.0, std::abs(direct)));

      Vector y(20);
      double a = 0, b = 1, c = 0;
      for (int j = 0; j < 20; ++j) {
        y[j] = bx(rng);
        a += std::pow(std::cos(y[j]), 4);
        b *= std::pow(std::cos(y[j]), 2);
        c += (j + 1) * y[j] * y[j];
      }
      const double keane = std::abs(a - 2 * b) / std::sqrt(c);
      worst = std::max(worst, std::abs(benchmarks::bump_value(y, benchmarks::BumpVariant::keane) - keane) / keane);
    }
    require(o, worst <= 1e-9, fmt("objective oracles agree (worst rel err %.2e)", worst));
  }
  note(o, "tabu, elite, diversify, pattern, conservation, oracle checks run");
  return o;
}

Outcome determinism() {
  Outcome o;
  ExperimentSpec spec;
  spec.problem = "bump20";
  spec.method = Method::multi;
  spec.runs = 3;
  spec.search.max_evals = 20000;
  const auto a = to_csv(run_experiment(spec));
  spec.jobs = 3;
  const auto b = to_csv(run_experiment(spec));
  require(o, a == b, "byte-identical CSV across repeats");

  const auto objective = benchmarks::make_schwefel_objective(2);
  MultiConfig m;
  m.base.seed = 11;
  m.start_a = Vector{100.0, 100.0};
  m.start_b = Vector{100.0, 100.0};
  const auto r1 = run_multi(objective, m);
  const auto r2 = run_multi(objective, m);
  bool same = r1.collisions == r2.collisions && r1.combined.best.x == r2.combined.best.x &&
              r1.combined.evals == r2.combined.evals && r1.stages.size() == r2.stages.size();
  for (std::size_t k = 0; same && k < r1.stages.size(); ++k)
    same = r1.stages[k].a == r2.stages[k].a && r1.stages[k].b == r2.stages[k].b;
  note(o, fmt("lockstep run: %zu collisions, %zu stages", r1.collisions.size(), r1.stages.size()));
  require(o, same, "lockstep multi-thread runs bit-reproducible including collisions");
  require(o, !r1.collisions.empty(), "collision log exercised");
  return o;
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
    {1, {"Schwefel single-thread reaches the optimum", schwefel_single}},
    {2, {"Schwefel multi-thread reaches the optimum with more evaluations", schwefel_multi}},
    {3, {"Bump multi >= single random; values within bounds", bump_ordering_and_cap}},
    {4, {"Bump seeded single-thread spread", bump_seeded_spread}},
    {5, {"Circuit surrogate speed targets", circuit}},
    {6, {"Property suites", properties}},
    {7, {"Determinism", determinism}},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (selected.empty())
    for (const auto& [n, _] : criteria) selected.push_back(n);

  int failed = 0;
  for (int n : selected) {
    const auto it = criteria.find(n);
    if (it == criteria.end()) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o.pass = false;
      note(o, std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %d: %s\n%s", o.pass ? "PASS" : "FAIL", n, it->second.first,
                o.detail.c_str());
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
