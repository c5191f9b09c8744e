// breach: fair max-min diversification from the command line.
//
//   breach gen   --n 1000 --m 3 --seed 7 --output points.csv
//   breach run   --input points.csv --k 20 [--slack 0.2 | --constraints c.txt]
//   breach bench --sizes 1000 --colors 2,3,5 --ks 10,20 --output bench.csv
//
// Exit codes: 0 feasible, 2 infeasible, 3 input error, 4 oracle guard
// exceeded (bench with exact rows requested).

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "breach.hpp"

namespace {

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInputError = 3;
constexpr int kExitOracleGuard = 4;

struct RunArgs {
  std::string input;
  std::string color_column = "color";
  std::vector<std::string> features;
  std::size_t k = 0;
  double slack = 0.2;
  std::string constraints;
  std::string variant = "fast";
  std::string prune_mode = "furthest";
  double epsilon = 0.1;
  std::size_t T = 20;
  std::size_t dec_repeats = 3;
  bool theory_repeats = false;
  bool no_sweep = false;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string output;
  bool no_timings = false;
};

// Writes to `path`, or stdout when empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw breach::io::InputError("cannot write '" + path + "'");
  fn(out);
}

breach::BreachConfig solver_config(const RunArgs& a) {
  breach::BreachConfig c;
  c.variant = a.variant == "slow" ? breach::Variant::Slow : breach::Variant::Fast;
  c.prune_mode = a.prune_mode == "arbitrary" ? breach::PruneMode::ArbitraryOrder
                                             : breach::PruneMode::FurthestPoint;
  c.epsilon = a.epsilon;
  c.T = a.T;
  c.dec_repeats = a.dec_repeats;
  c.repeat_policy = a.theory_repeats ? breach::RepeatPolicy::Theory
                                     : breach::RepeatPolicy::Practical;
  c.gamma2_sweep = !a.no_sweep;
  c.master_seed = a.seed;
  c.threads = a.threads;
  return c;
}

int run_command(const RunArgs& a) {
  using nlohmann::ordered_json;
  breach::io::LabelledDataset data = breach::io::load_csv(a.input, a.color_column, a.features);
  breach::BreachConfig cfg = solver_config(a);

  ordered_json config = breach::io::config_json(cfg);
  config["input"] = a.input;
  config["color_column"] = a.color_column;
  config["k"] = a.k;
  if (a.constraints.empty())
    config["fairness"] = {{"proportional", a.slack}};
  else
    config["fairness"] = {{"constraints", a.constraints}};

  breach::Solution solution;
  try {
    breach::FairnessSpec spec =
        a.constraints.empty()
            ? breach::proportional_spec(data.dataset, a.k, a.slack)
            : breach::io::load_constraints(a.constraints, a.k, data.color_labels);
    solution = breach::solve(data.dataset, spec, cfg);
  } catch (const breach::InfeasibleSpec& e) {
    solution.feasible = false;
    solution.reason = e.what();
  }

  breach::io::ResultOptions opts;
  opts.include_timings = !a.no_timings;
  ordered_json result = breach::io::result_json(solution, data, config, opts);
  with_output(a.output, [&](std::ostream& out) { out << result.dump(2) << '\n'; });
  if (!solution.feasible) std::cerr << "infeasible: " << solution.reason << '\n';
  return solution.feasible ? kExitFeasible : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair max-min diversification (BREACH)"};
  app.require_subcommand(1);

  breach::io::SyntheticParams gen;
  std::string gen_output;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic Gaussian-cloud points");
  gen_cmd->add_option("--n", gen.n, "Number of points")->required();
  gen_cmd->add_option("--m", gen.num_colors, "Number of colors")->required();
  gen_cmd->add_option("--clouds", gen.num_clouds, "Number of Gaussian clouds")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen_output, "Output CSV (default stdout)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Select k diverse points under fairness bounds");
  run_cmd->add_option("-i,--input", run.input, "Input CSV with a header row")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--color-column", run.color_column, "Categorical color column")
      ->capture_default_str();
  run_cmd->add_option("--features", run.features, "Feature columns (default: all others)")
      ->delimiter(',');
  run_cmd->add_option("-k,--k", run.k, "Number of points to select")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* slack_opt = run_cmd->add_option("--slack", run.slack,
                                        "Proportional-representation slack in [0, 1)")
                        ->capture_default_str();
  run_cmd->add_option("--constraints", run.constraints,
                      "Bounds file with lines color_id,lower,upper")
      ->check(CLI::ExistingFile)
      ->excludes(slack_opt);
  run_cmd->add_option("--variant", run.variant, "fast or slow")
      ->check(CLI::IsMember({"fast", "slow"}))
      ->capture_default_str();
  run_cmd->add_option("--prune", run.prune_mode, "furthest or arbitrary")
      ->check(CLI::IsMember({"furthest", "arbitrary"}))
      ->capture_default_str();
  run_cmd->add_option("--epsilon", run.epsilon, "Grid ratio")->capture_default_str();
  run_cmd->add_option("-T,--T", run.T, "Repetition multiplier (theory budget T*m)")
      ->capture_default_str();
  run_cmd->add_option("--dec-repeats", run.dec_repeats, "Decompositions per candidate")
      ->capture_default_str();
  run_cmd->add_flag("--theory-repeats", run.theory_repeats, "Use T*m decompositions");
  run_cmd->add_flag("--no-gamma2-sweep", run.no_sweep, "Only the variant's base gamma2");
  run_cmd->add_option("--seed", run.seed, "Master seed")->capture_default_str();
  run_cmd->add_option("--threads", run.threads, "Worker threads")->capture_default_str();
  run_cmd->add_option("-o,--output", run.output, "Result JSON path (default stdout)");
  run_cmd->add_flag("--no-timings", run.no_timings, "Write zero timings");

  breach::bench::BenchConfig bench;
  std::vector<std::string> bench_algorithms;
  std::string bench_output;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark on synthetic instances");
  bench_cmd->add_option("--sizes", bench.sizes, "Values of n")->delimiter(',');
  bench_cmd->add_option("--colors", bench.colors, "Values of m")->delimiter(',');
  bench_cmd->add_option("--ks", bench.ks, "Values of k")->delimiter(',');
  bench_cmd->add_option("--algorithms", bench_algorithms,
                        "breach-fast,breach-slow,gmm,exact (default fast,gmm,exact)")
      ->delimiter(',');
  bench_cmd->add_option("--reps", bench.repetitions, "Repetitions per setting")
      ->capture_default_str();
  bench_cmd->add_option("--slack", bench.slack, "Proportional slack")->capture_default_str();
  bench_cmd->add_option("--epsilon", bench.solver.epsilon, "Grid ratio")->capture_default_str();
  bench_cmd->add_option("--dec-repeats", bench.solver.dec_repeats, "Decompositions per candidate")
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench.solver.threads, "Worker threads")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("-o,--output", bench_output, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*gen_cmd) {
      breach::Dataset ds = breach::io::gen_synthetic(gen);
      with_output(gen_output, [&](std::ostream& out) {
        breach::io::write_csv(out, ds, breach::io::numeric_labels(ds.num_colors()));
      });
      return 0;
    }
    if (*run_cmd) return run_command(run);
    if (*bench_cmd) {
      if (!bench_algorithms.empty()) {
        bench.algorithms.clear();
        for (const auto& a : bench_algorithms)
          bench.algorithms.push_back(breach::bench::parse_algorithm(a));
      }
      auto report = breach::bench::run_bench(bench);
      with_output(bench_output,
                  [&](std::ostream& out) { breach::bench::write_bench_csv(out, report); });
      bool exact_requested = !bench_algorithms.empty() &&
                             std::find(bench.algorithms.begin(), bench.algorithms.end(),
                                       breach::bench::Algorithm::Exact) != bench.algorithms.end();
      return exact_requested && report.oracle_guard_hit ? kExitOracleGuard : 0;
    }
  } catch (const breach::io::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const breach::InvalidInput& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const breach::InfeasibleSpec& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  }
  return 0;
}
