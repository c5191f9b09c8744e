// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "breach.hpp"
#include "test_support.hpp"

namespace {

using namespace breach;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome prune_separation() {
  Rng rng(1001);
  std::size_t violations = 0, instances = 0;
  auto t0 = Clock::now();
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t m = 1 + rng.below(8);
    std::size_t n = m + rng.below(201 - m);
    Dataset ds = testing::random_dataset(rng, n, m);
    double gamma = rng.uniform(0.05, 5.0);
    std::size_t budget = 1 + rng.below(n);
    for (auto mode : {PruneMode::ArbitraryOrder, PruneMode::FurthestPoint}) {
      ++instances;
      auto u = prune(ds, PruneParams{gamma, budget, mode});
      for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t b = a + 1; b < u.size(); ++b)
          if (ds.color(u[a]) == ds.color(u[b]) && ds.distance_unchecked(u[a], u[b]) < gamma)
            ++violations;
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {violations == 0 && secs < 10.0,
          fmt("%zu prune runs, %zu close same-color pairs, %.2f s (limit 10 s)", instances,
              violations, secs)};
}

Outcome decomposition_separation() {
  Rng rng(1002);
  std::size_t separation_failures = 0, diameter_failures = 0;
  auto t0 = Clock::now();
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t m = 2 + rng.below(9);
    std::size_t n = 2 + rng.below(150);
    Dataset ds = testing::random_dataset(rng, std::max(n, m), m);
    std::vector<Index> all(ds.size());
    std::iota(all.begin(), all.end(), Index{0});
    double gamma = rng.uniform(0.5, 20.0);
    Rng dec_rng = rng.substream({static_cast<std::uint64_t>(trial)});
    Decomposition dec = ckr_decompose(ds, all, gamma, m, dec_rng);
    if (!cluster_separation_check(ds, dec, gamma * compute_alpha(m).alpha)) ++separation_failures;
    for (const auto& cl : dec.clusters)
      for (std::size_t a = 0; a < cl.size(); ++a)
        for (std::size_t b = a + 1; b < cl.size(); ++b)
          if (!(ds.distance_unchecked(cl[a], cl[b]) < gamma)) ++diameter_failures;
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {separation_failures == 0 && diameter_failures == 0 && secs < 30.0,
          fmt("500 decompositions, %zu separation failures, %zu wide same-cluster pairs, "
              "%.2f s (limit 30 s)",
              separation_failures, diameter_failures, secs)};
}

Outcome flow_equivalence() {
  Rng rng(1003);
  std::size_t disagreements = 0, invalid = 0, feasible = 0, done = 0;
  while (done < 200) {
    std::size_t m = 1 + rng.below(4);
    Dataset ds = testing::random_dataset(rng, m + rng.below(18), m);
    auto clusters = testing::random_clusters(rng, ds, 1 + rng.below(8));
    FairnessSpec spec = testing::random_feasible_spec(rng, ds, 6);
    bool oracle;
    try {
      oracle = exact_assignment_feasible(ds, clusters, spec);
    } catch (const OracleGuardExceeded&) {
      continue;
    }
    ++done;
    FlowNetwork net = build_flow_network(ds, clusters, spec);
    FlowResult flow = max_flow_integral(net);
    bool full = flow.value == static_cast<Capacity>(spec.k());
    if (full != oracle) ++disagreements;
    if (full) {
      ++feasible;
      auto s = extract_solution(ds, clusters, net, flow, spec);
      if (!s || !validate(ds, *s, spec)) ++invalid;
    }
  }
  return {disagreements == 0 && invalid == 0,
          fmt("200 configurations (%zu feasible), %zu disagreements, %zu invalid extractions",
              feasible, disagreements, invalid)};
}

Outcome approximation() {
  Rng rng(1004);
  std::size_t slow_ok = 0, fast_ok = 0;
  auto t0 = Clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 2 + rng.below(3);
    std::size_t n = m + rng.below(17 - m);
    Dataset ds = testing::random_dataset(rng, n, m);
    FairnessSpec spec = testing::random_feasible_spec(rng, ds, m);
    auto opt = exact_fmmd(ds, spec);
    double root = std::sqrt(std::log(static_cast<double>(m)));
    for (auto variant : {Variant::Slow, Variant::Fast}) {
      BreachConfig cfg;
      cfg.variant = variant;
      cfg.T = 20;
      cfg.epsilon = 0.05;
      cfg.repeat_policy = RepeatPolicy::Theory;
      cfg.master_seed = static_cast<std::uint64_t>(trial);
      Solution s = solve(ds, spec, cfg);
      double denom = variant == Variant::Slow ? 3.0 * m * 1.05 : 5.0 * m * 1.05;
      bool ok = opt && s.feasible && validate(ds, s.indices, spec) &&
                s.score >= root * opt->value / denom;
      (variant == Variant::Slow ? slow_ok : fast_ok) += ok;
    }
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return {slow_ok >= 95 && fast_ok >= 95 && secs < 300.0,
          fmt("slow %zu/100, fast %zu/100 within bound (need 95), %.2f s (limit 300 s)", slow_ok,
              fast_ok, secs)};
}

// Frequency with which a fixed optimal set lands one point per cluster and
// no point on a guard, decomposing every point at the slow variant's scale.
Outcome decomposition_success() {
  std::string detail;
  bool pass = true;
  for (std::size_t m = 2; m <= 4; ++m) {
    Rng rng(1005 + m);
    std::size_t hits = 0;
    const std::size_t trials = 2000;
    for (std::size_t t = 0; t < trials; ++t) {
      Dataset ds = testing::random_dataset(rng, m + rng.below(17 - m), m);
      FairnessSpec spec(m, std::vector<std::size_t>(m, 1), std::vector<std::size_t>(m, 1));
      auto opt = exact_fmmd(ds, spec);
      std::vector<Index> all(ds.size());
      std::iota(all.begin(), all.end(), Index{0});
      Rng dec_rng = rng.substream({t});
      Decomposition dec = ckr_decompose(ds, all, opt->value / 3.0, m, dec_rng);
      hits += testing::survives_one_per_cluster(dec, opt->indices);
    }
    double freq = static_cast<double>(hits) / trials;
    double need = 1.0 / (4.0 * m);
    pass &= freq >= need;
    detail += fmt("%sm=%zu %.3f (need %.3f)", detail.empty() ? "" : ", ", m, freq, need);
  }
  return {pass, detail + " over 2000 trials each"};
}

Outcome gmm_half() {
  Rng rng(1006);
  std::size_t failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + rng.below(13);
    Dataset ds = testing::random_dataset(rng, n, 1);
    std::size_t k = 2 + rng.below(n - 1);
    auto opt = exact_fmmd(ds, FairnessSpec(k, {0}, {k}));
    if (!opt || diversity(ds, gmm(ds, k)) < opt->value / 2.0) ++failures;
  }
  return {failures == 0, fmt("100 instances, %zu below half of the optimum", failures)};
}

std::string result_bytes(const Dataset& ds, const FairnessSpec& spec, BreachConfig cfg) {
  io::LabelledDataset data{ds, io::numeric_labels(ds.num_colors())};
  io::ResultOptions opts;
  opts.include_timings = false;
  return io::result_json(solve(ds, spec, cfg), data, io::config_json(cfg), opts).dump(2);
}

Outcome determinism() {
  std::size_t mismatches = 0;
  for (std::uint64_t c = 0; c < 20; ++c) {
    io::SyntheticParams p;
    p.n = 80 + 10 * c;
    p.num_colors = 2 + c % 5;
    p.seed = c;
    Dataset ds = io::gen_synthetic(p);
    FairnessSpec spec = proportional_spec(ds, p.num_colors + c % 9, 0.2);
    BreachConfig cfg;
    cfg.variant = c % 2 ? Variant::Slow : Variant::Fast;
    cfg.master_seed = 100 + c;
    cfg.threads = 1;
    std::string a = result_bytes(ds, spec, cfg);
    std::string b = result_bytes(ds, spec, cfg);
    cfg.threads = 8;
    std::string d = result_bytes(ds, spec, cfg);
    mismatches += (a != b) + (a != d);
  }
  return {mismatches == 0, fmt("20 configurations, %zu mismatching outputs", mismatches)};
}

Outcome scalability() {
  io::SyntheticParams p;
  p.n = 10000;
  p.num_colors = 10;
  p.seed = 8;
  Dataset ds = io::gen_synthetic(p);
  FairnessSpec spec = proportional_spec(ds, 30, 0.2);
  BreachConfig cfg;
  cfg.variant = Variant::Fast;
  cfg.dec_repeats = 3;
  auto t0 = Clock::now();
  Solution s = solve(ds, spec, cfg);
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool ok = s.feasible && validate(ds, s.indices, spec) &&
            s.score >= s.provenance.certificate && secs < 60.0;
  return {ok, fmt("n=10000 m=10 k=30: feasible=%d, diversity %.4f, certificate %.4f, %.2f s "
                  "(limit 60 s)",
                  s.feasible, s.score, s.provenance.certificate, secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"pruning separation", prune_separation},
      {"decomposition separation", decomposition_separation},
      {"flow oracle equivalence", flow_equivalence},
      {"end-to-end approximation", approximation},
      {"decomposition success frequency", decomposition_success},
      {"gmm half-approximation", gmm_half},
      {"determinism", determinism},
      {"scalability smoke", scalability},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
