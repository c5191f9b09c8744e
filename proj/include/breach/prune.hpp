#pragma once

// Per-color pruning: keep a subset in which any two points of the same color
// are at least gamma apart, while every dropped point stays within gamma of a
// kept point of its color (unless the per-color budget ran out first).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "breach/core.hpp"

namespace breach {

enum class PruneMode {
  // Colors are scanned one by one; the lowest-index unmarked point is taken.
  ArbitraryOrder,
  // One global greedy: always take the unmarked point (of a color still under
  // budget) that is furthest from everything kept so far.
  FurthestPoint,
};

struct PruneParams {
  double gamma = 0.0;
  std::size_t budget = 0;
  PruneMode mode = PruneMode::ArbitraryOrder;
};

namespace detail {

inline void check_prune_params(const PruneParams& params) {
  if (!(params.gamma >= 0.0) || !std::isfinite(params.gamma))
    throw InvalidInput("prune gamma must be finite and >= 0");
  if (params.budget == 0) throw InvalidInput("prune budget must be >= 1");
}

// The loop guard is "|U_i| <= b", so a color may receive b + 1 points.
inline std::vector<Index> prune_arbitrary(const Dataset& ds,
                                          std::span<const Index> candidates,
                                          const PruneParams& params) {
  std::vector<std::vector<Index>> by_color(ds.num_colors());
  for (Index i : candidates) by_color[ds.color(i)].push_back(i);

  std::vector<Index> kept;
  for (auto& members : by_color) {
    std::sort(members.begin(), members.end());
    std::vector<char> marked(members.size(), 0);
    std::size_t selected = 0;
    std::size_t cursor = 0;
    while (selected <= params.budget) {
      while (cursor < members.size() && marked[cursor]) ++cursor;
      if (cursor == members.size()) break;
      Index v = members[cursor];
      marked[cursor] = 1;
      for (std::size_t j = cursor + 1; j < members.size(); ++j)
        if (!marked[j] && ds.distance_unchecked(members[j], v) < params.gamma)
          marked[j] = 1;
      kept.push_back(v);
      ++selected;
    }
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// Gonzalez-style: min_dist[j] holds the distance from candidate j to the kept
// set and is refreshed after every pick, so each pick costs O(|candidates|).
// A color stops receiving points once it holds `budget` of them.
inline std::vector<Index> prune_furthest(const Dataset& ds,
                                         std::span<const Index> candidates,
                                         const PruneParams& params) {
  std::vector<Index> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end());
  const std::size_t count = order.size();

  std::vector<double> min_dist(count, kInfinity);
  std::vector<char> marked(count, 0);
  std::vector<std::size_t> taken(ds.num_colors(), 0);
  std::vector<Index> kept;

  auto select = [&](std::size_t pos) {
    Index v = order[pos];
    Color c = ds.color(v);
    kept.push_back(v);
    ++taken[c];
    marked[pos] = 1;
    for (std::size_t j = 0; j < count; ++j) {
      double d = ds.distance_unchecked(order[j], v);
      min_dist[j] = std::min(min_dist[j], d);
      if (!marked[j] && ds.color(order[j]) == c && d < params.gamma)
        marked[j] = 1;
    }
  };

  if (count == 0) return kept;
  select(0);
  for (;;) {
    std::size_t best = count;
    for (std::size_t j = 0; j < count; ++j) {
      if (marked[j] || taken[ds.color(order[j])] >= params.budget) continue;
      if (best == count || min_dist[j] > min_dist[best]) best = j;
    }
    if (best == count) break;
    select(best);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace detail

// Prunes the given candidate indices (need not be the whole dataset).
// Returns the kept indices sorted ascending.
inline std::vector<Index> prune(const Dataset& ds,
                                std::span<const Index> candidates,
                                const PruneParams& params) {
  detail::check_prune_params(params);
  for (Index i : candidates)
    if (i >= ds.size()) throw std::out_of_range("prune candidate out of range");
  return params.mode == PruneMode::FurthestPoint
             ? detail::prune_furthest(ds, candidates, params)
             : detail::prune_arbitrary(ds, candidates, params);
}

inline std::vector<Index> prune(const Dataset& ds, const PruneParams& params) {
  std::vector<Index> all(ds.size());
  std::iota(all.begin(), all.end(), Index{0});
  return prune(ds, all, params);
}

inline std::vector<Index> prune_furthest(const Dataset& ds, PruneParams params) {
  params.mode = PruneMode::FurthestPoint;
  return prune(ds, params);
}

}  // namespace breach
