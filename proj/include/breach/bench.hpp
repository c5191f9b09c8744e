#pragma once

// Benchmark harness over synthetic Gaussian-cloud instances. Emits one CSV
// row per (algorithm, n, m, k):
//
//   algorithm,n,m,k,repetitions,feasible_runs,mean_diversity,mean_time_ms,note
//
// mean_diversity averages feasible runs only ("inf" if every feasible run
// picked a single point, empty if none was feasible). `note` is empty or one
// of: oracle-guard (exact rows skipped), infeasible-spec (some repetition
// drew data the proportional bounds cannot meet), no-feasible-run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "breach/breach.hpp"
#include "breach/io.hpp"
#include "breach/oracle.hpp"

namespace breach::bench {

enum class Algorithm { BreachFast, BreachSlow, Gmm, Exact };

inline const char* name(Algorithm a) {
  switch (a) {
    case Algorithm::BreachFast: return "breach-fast";
    case Algorithm::BreachSlow: return "breach-slow";
    case Algorithm::Gmm: return "gmm";
    case Algorithm::Exact: return "exact";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "breach-fast" || s == "fast") return Algorithm::BreachFast;
  if (s == "breach-slow" || s == "slow") return Algorithm::BreachSlow;
  if (s == "gmm") return Algorithm::Gmm;
  if (s == "exact") return Algorithm::Exact;
  throw InvalidInput("unknown algorithm '" + s + "'");
}

struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> colors;
  std::vector<std::size_t> ks;
  std::vector<Algorithm> algorithms{Algorithm::BreachFast, Algorithm::Gmm,
                                    Algorithm::Exact};
  std::size_t repetitions = 5;
  double slack = 0.2;
  BreachConfig solver;  // variant is overridden per algorithm
  std::uint64_t seed = 0;
};

struct BenchRow {
  Algorithm algorithm{};
  std::size_t n = 0, m = 0, k = 0;
  std::size_t repetitions = 0;
  std::size_t feasible_runs = 0;
  double mean_diversity = 0.0;
  double mean_time_ms = 0.0;
  std::string note;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  bool oracle_guard_hit = false;
};

inline BenchReport run_bench(const BenchConfig& cfg) {
  BenchReport report;
  for (std::size_t n : cfg.sizes)
    for (std::size_t m : cfg.colors)
      for (std::size_t k : cfg.ks) {
        std::vector<BenchRow> rows;
        for (Algorithm a : cfg.algorithms) rows.push_back(BenchRow{a, n, m, k, 0, 0, 0.0, 0.0, {}});
        std::vector<double> div_sum(rows.size(), 0.0), time_sum(rows.size(), 0.0);
        std::vector<std::size_t> timed(rows.size(), 0), spec_failures(rows.size(), 0);
        std::vector<char> guard_hit(rows.size(), 0);

        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
          io::SyntheticParams sp;
          sp.n = n;
          sp.num_colors = m;
          sp.seed = derive_seed(cfg.seed, {n, m, k, rep});
          Dataset ds = io::gen_synthetic(sp);
          std::optional<FairnessSpec> spec;
          std::string spec_problem;
          try {
            spec = proportional_spec(ds, k, cfg.slack);
            spec_problem = availability_problem(ds, *spec);
          } catch (const InfeasibleSpec&) {
            spec_problem = "infeasible-spec";
          }

          for (std::size_t a = 0; a < rows.size(); ++a) {
            BenchRow& row = rows[a];
            ++row.repetitions;
            if (guard_hit[a]) continue;
            auto t0 = std::chrono::steady_clock::now();
            std::optional<double> score;
            if (row.algorithm == Algorithm::Gmm) {
              score = diversity(ds, gmm(ds, std::min(k, n), 0));
            } else if (!spec_problem.empty()) {
              ++spec_failures[a];
            } else if (row.algorithm == Algorithm::Exact) {
              try {
                if (auto r = exact_fmmd(ds, *spec)) score = r->value;
              } catch (const OracleGuardExceeded&) {
                guard_hit[a] = 1;
                report.oracle_guard_hit = true;
                continue;
              }
            } else {
              BreachConfig bc = cfg.solver;
              bc.variant = row.algorithm == Algorithm::BreachSlow ? Variant::Slow : Variant::Fast;
              bc.master_seed = derive_seed(cfg.seed, {n, m, k, rep, a});
              Solution s = solve(ds, *spec, bc);
              if (s.feasible) score = s.score;
            }
            time_sum[a] += std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
            ++timed[a];
            if (score) {
              ++row.feasible_runs;
              div_sum[a] += *score;
            }
          }
        }
        for (std::size_t a = 0; a < rows.size(); ++a) {
          BenchRow& row = rows[a];
          if (row.feasible_runs > 0)
            row.mean_diversity = div_sum[a] / static_cast<double>(row.feasible_runs);
          if (timed[a] > 0) row.mean_time_ms = time_sum[a] / static_cast<double>(timed[a]);
          if (guard_hit[a])
            row.note = "oracle-guard";
          else if (spec_failures[a] > 0)
            row.note = "infeasible-spec";
          else if (row.feasible_runs == 0 && row.repetitions > 0)
            row.note = "no-feasible-run";
          report.rows.push_back(row);
        }
      }
  return report;
}

inline void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "algorithm,n,m,k,repetitions,feasible_runs,mean_diversity,mean_time_ms,note\n";
  for (const auto& r : report.rows) {
    out << name(r.algorithm) << ',' << r.n << ',' << r.m << ',' << r.k << ','
        << r.repetitions << ',' << r.feasible_runs << ',';
    if (r.feasible_runs > 0) {
      if (std::isinf(r.mean_diversity))
        out << "inf";
      else
        out << io::detail::format_double(r.mean_diversity);
    }
    out << ',' << io::detail::format_double(r.mean_time_ms) << ',' << r.note << '\n';
  }
}

}  // namespace breach::bench
