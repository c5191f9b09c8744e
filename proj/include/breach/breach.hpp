#pragma once

// The full solver: prune -> random decomposition -> max-flow assignment,
// repeated over a geometric grid of guesses for the optimal diversity.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "breach/assign.hpp"
#include "breach/core.hpp"
#include "breach/decompose.hpp"
#include "breach/oracle.hpp"
#include "breach/prune.hpp"
#include "breach/random.hpp"

namespace breach {

// Slow: prune at tau/3 with no budget, decompose at tau/3.
// Fast: prune at 2 tau/5 with budget k, decompose at tau/5.
enum class Variant { Slow, Fast };

// Practical: `dec_repeats` decompositions per candidate.
// Theory: T * m decompositions per candidate.
enum class RepeatPolicy { Practical, Theory };

struct BreachConfig {
  Variant variant = Variant::Fast;
  double epsilon = 0.1;
  std::size_t T = 20;
  std::size_t dec_repeats = 3;
  RepeatPolicy repeat_policy = RepeatPolicy::Practical;
  bool gamma2_sweep = true;
  PruneMode prune_mode = PruneMode::FurthestPoint;
  std::uint64_t master_seed = 0;
  // Worker threads for grid candidates. Results do not depend on it.
  std::size_t threads = 1;

  void check() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw InvalidInput("epsilon must be positive");
    if (T == 0) throw InvalidInput("T must be >= 1");
    if (dec_repeats == 0) throw InvalidInput("dec_repeats must be >= 1");
    if (threads == 0) throw InvalidInput("threads must be >= 1");
  }

  std::size_t repeats_for(std::size_t num_colors) const {
    return repeat_policy == RepeatPolicy::Theory ? T * num_colors : dec_repeats;
  }
};

inline const char* to_string(Variant v) { return v == Variant::Slow ? "slow" : "fast"; }

inline double variant_gamma1(Variant v, double tau) {
  return v == Variant::Slow ? tau / 3.0 : 2.0 * tau / 5.0;
}
inline double variant_gamma2(Variant v, double tau) {
  return v == Variant::Slow ? tau / 3.0 : tau / 5.0;
}
inline std::size_t variant_budget(Variant v, const Dataset& ds,
                                  const FairnessSpec& spec) {
  return v == Variant::Slow ? ds.size() : spec.k();
}

namespace detail {

struct Attempt {
  std::vector<Index> indices;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
};

// Up to `repeats` decompositions of the pruned space at threshold
// gamma2 * alpha, each followed by the flow assignment. Repetition r draws
// from the substream seed_for(r). Returns the first feasible set.
template <typename SeedFor>
std::optional<Attempt> decompose_and_assign(const Dataset& ds,
                                            const FairnessSpec& spec,
                                            const LocalDistances& dist,
                                            double gamma2,
                                            const AlphaParams& alpha,
                                            std::size_t repeats,
                                            SeedFor seed_for) {
  if (dist.size() < spec.k()) return std::nullopt;
  ThresholdGraph g = build_threshold_graph(dist, gamma2 * alpha.alpha);
  for (std::size_t r = 0; r < repeats; ++r) {
    std::uint64_t seed = seed_for(r);
    Rng rng(seed);
    Decomposition dec = ckr_decompose(g, alpha, rng);
    auto chosen = assign_clusters(ds, dec.clusters, spec);
    if (chosen) return Attempt{std::move(*chosen), r, seed};
  }
  return std::nullopt;
}

inline Solution make_solution(const Dataset& ds, std::vector<Index> indices) {
  Solution s;
  std::sort(indices.begin(), indices.end());
  s.score = diversity(ds, indices);
  s.indices = std::move(indices);
  s.feasible = true;
  return s;
}

inline Solution infeasible(std::string reason) {
  Solution s;
  s.feasible = false;
  s.reason = std::move(reason);
  return s;
}

struct DistanceRange {
  double min_nonzero = 0.0;  // 0 if every distance is 0
  double max = 0.0;
};

inline DistanceRange distance_range(const Dataset& ds) {
  DistanceRange r{kInfinity, 0.0};
  for (Index a = 0; a < ds.size(); ++a)
    for (Index b = a + 1; b < ds.size(); ++b) {
      double d = ds.distance_unchecked(a, b);
      if (d > 0.0) r.min_nonzero = std::min(r.min_nonzero, d);
      r.max = std::max(r.max, d);
    }
  if (r.max == 0.0) r.min_nonzero = 0.0;
  return r;
}

// Strictly better score wins; callers visit candidates in index order, so
// ties stay with the lower index.
inline bool improves(const std::optional<Solution>& incumbent, const Solution& s) {
  return !incumbent || s.score > incumbent->score;
}

template <typename Fn>
void run_parallel(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
}

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace detail

// One run of the pipeline for fixed thresholds: prune once with
// (gamma1, budget), then up to `repeats` decompositions at gamma2 with flow
// assignment. Repetition r uses rng.substream({r}). nullopt if none is
// feasible. Any returned set has diversity >= gamma2 * alpha.
inline std::optional<Solution> breach_fixed(const Dataset& ds,
                                            const FairnessSpec& spec,
                                            double gamma1, double gamma2,
                                            std::size_t budget,
                                            std::size_t repeats, const Rng& rng,
                                            PruneMode mode = PruneMode::ArbitraryOrder) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    throw InvalidInput("gamma1 and gamma2 must be positive");
  AlphaParams alpha = compute_alpha(spec.num_colors());
  std::vector<Index> pruned = prune(ds, PruneParams{gamma1, budget, mode});
  LocalDistances dist(ds, pruned);
  auto attempt = detail::decompose_and_assign(
      ds, spec, dist, gamma2, alpha, repeats,
      [&rng](std::size_t r) { return rng.substream({r}).seed(); });
  if (!attempt) return std::nullopt;
  Solution s = detail::make_solution(ds, std::move(attempt->indices));
  s.provenance.repetition = attempt->repetition;
  s.provenance.seed = attempt->seed;
  s.provenance.gamma1 = gamma1;
  s.provenance.gamma2 = gamma2;
  s.provenance.certificate = gamma2 * alpha.alpha;
  return s;
}

// Guesses tau_i = tau_0 (1 + eps)^i, tau_0 the smallest nonzero distance,
// ascending until even the smallest decomposition threshold exceeds the
// largest distance.
inline std::vector<double> tau_candidates(double min_nonzero, double max_distance,
                                          const BreachConfig& config,
                                          double alpha) {
  std::vector<double> taus;
  if (!(min_nonzero > 0.0)) return taus;
  constexpr std::size_t kMaxCandidates = 100000;
  for (std::size_t i = 0; i < kMaxCandidates; ++i) {
    double tau = min_nonzero * std::pow(1.0 + config.epsilon, static_cast<double>(i));
    double gamma1 = variant_gamma1(config.variant, tau);
    double lowest_gamma2 = variant_gamma2(config.variant, tau);
    if (config.gamma2_sweep) lowest_gamma2 = std::min(lowest_gamma2, gamma1 / 2.0);
    if (i > 0 && lowest_gamma2 * alpha > max_distance) break;
    taus.push_back(tau);
  }
  return taus;
}

// gamma2 values tried for one tau: the variant's base value, plus (with the
// sweep on) gamma1/2 * (1 + eps)^j up to gamma1/alpha. Ascending, base
// included exactly once.
inline std::vector<double> gamma2_candidates(double tau, const BreachConfig& config,
                                             double alpha) {
  double base = variant_gamma2(config.variant, tau);
  std::vector<double> out{base};
  if (!config.gamma2_sweep) return out;
  double gamma1 = variant_gamma1(config.variant, tau);
  double lo = gamma1 / 2.0, hi = gamma1 / alpha;
  for (std::size_t j = 0;; ++j) {
    double g = lo * std::pow(1.0 + config.epsilon, static_cast<double>(j));
    if (g > hi * (1.0 + 1e-12)) break;
    out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <= 1e-12 * std::max(a, b);
                        }),
            out.end());
  return out;
}

// Runs every (tau, gamma2) candidate and keeps the feasible set with the
// highest diversity; ties go to the lowest (tau index, gamma2 index).
// The decomposition for (i, j, r) draws from
// derive_seed(master_seed, {i, j, r}).
inline Solution grid_search(const Dataset& ds, const FairnessSpec& spec,
                            const BreachConfig& config) {
  config.check();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = spec.num_colors();
  AlphaParams alpha = compute_alpha(m);
  detail::DistanceRange range = detail::distance_range(ds);

  if (range.max == 0.0) {
    // All points coincide: every feasible set scores the same.
    std::vector<std::vector<Index>> singletons;
    for (Index i = 0; i < ds.size(); ++i) singletons.push_back({i});
    auto chosen = assign_clusters(ds, singletons, spec);
    if (!chosen) return detail::infeasible("no feasible assignment exists");
    Solution s = detail::make_solution(ds, std::move(*chosen));
    s.timings.total_ms = detail::elapsed_ms(start);
    return s;
  }

  std::vector<double> taus =
      tau_candidates(range.min_nonzero, range.max, config, alpha.alpha);
  const std::size_t repeats = config.repeats_for(m);
  const std::size_t budget = variant_budget(config.variant, ds, spec);

  struct ItemResult {
    std::optional<Solution> best;
    double prune_ms = 0.0;
    double search_ms = 0.0;
  };
  std::vector<ItemResult> results(taus.size());

  detail::run_parallel(taus.size(), config.threads, [&](std::size_t i) {
    ItemResult& out = results[i];
    const double tau = taus[i];
    const double gamma1 = variant_gamma1(config.variant, tau);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Index> pruned =
        prune(ds, PruneParams{gamma1, budget, config.prune_mode});
    LocalDistances dist(ds, pruned);
    out.prune_ms = detail::elapsed_ms(t0);

    auto t1 = std::chrono::steady_clock::now();
    auto gammas = gamma2_candidates(tau, config, alpha.alpha);
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      auto attempt = detail::decompose_and_assign(
          ds, spec, dist, gammas[j], alpha, repeats, [&](std::size_t r) {
            return derive_seed(config.master_seed, {i, j, r});
          });
      if (!attempt) continue;
      Solution s = detail::make_solution(ds, std::move(attempt->indices));
      if (!detail::improves(out.best, s)) continue;
      s.provenance = Provenance{i,
                                j,
                                attempt->repetition,
                                attempt->seed,
                                tau,
                                gamma1,
                                gammas[j],
                                gammas[j] * alpha.alpha};
      out.best = std::move(s);
    }
    out.search_ms = detail::elapsed_ms(t1);
  });

  std::optional<Solution> best;
  Timings timings;
  for (auto& r : results) {
    timings.prune_ms += r.prune_ms;
    timings.search_ms += r.search_ms;
    if (r.best && detail::improves(best, *r.best)) best = std::move(r.best);
  }
  Solution s = best ? std::move(*best)
                    : detail::infeasible("no grid candidate produced a feasible set");
  s.timings = timings;
  s.timings.total_ms = detail::elapsed_ms(start);
  return s;
}

struct ExtendedInstance {
  Dataset dataset;
  FairnessSpec spec;
};

// For k > m, pads the color universe to k colors; the padding colors have no
// points and bounds (0, 0). Identity otherwise.
inline ExtendedInstance extend_for_large_k(const Dataset& ds,
                                           const FairnessSpec& spec) {
  if (spec.k() <= ds.num_colors()) return {ds, spec};
  return {ds.with_num_colors(spec.k()), spec.with_num_colors(spec.k())};
}

// Public entry point. Single-color inputs bypass the decomposition (alpha is
// undefined for m = 1) and use the greedy furthest-point set. Returns an
// infeasible Solution, with a reason, when no feasible set is found.
inline Solution solve(const Dataset& ds, const FairnessSpec& spec,
                      const BreachConfig& config) {
  config.check();
  const auto start = std::chrono::steady_clock::now();
  if (spec.num_colors() != ds.num_colors())
    throw InvalidInput("spec covers " + std::to_string(spec.num_colors()) +
                       " colors but the dataset has " +
                       std::to_string(ds.num_colors()));
  if (std::string problem = availability_problem(ds, spec); !problem.empty())
    return detail::infeasible(problem);

  Solution s;
  if (ds.num_colors() == 1) {
    s = detail::make_solution(ds, spec.k() == 1 ? std::vector<Index>{0}
                                                : gmm(ds, spec.k(), 0));
  } else {
    ExtendedInstance inst = extend_for_large_k(ds, spec);
    s = grid_search(inst.dataset, inst.spec, config);
    if (s.feasible) s.score = diversity(ds, s.indices);
  }
  s.timings.total_ms = detail::elapsed_ms(start);
  return s;
}

}  // namespace breach
