#pragma once

// Reference solvers: exhaustive FMMD for small instances, exhaustive
// cluster-to-color assignment, and the greedy furthest-point heuristic (GMM).

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "breach/core.hpp"

namespace breach {

class OracleGuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kExactMaxPoints = 24;
inline constexpr double kExactMaxSubsets = 5e6;
inline constexpr double kAssignmentMaxChoices = 1e6;

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

struct ExactResult {
  double value = 0.0;
  std::vector<Index> indices;
};

// Best feasible k-subset by enumeration in lexicographic index order; ties go
// to the lexicographically first subset. nullopt if no subset is feasible.
// Throws OracleGuardExceeded when n > 24 and C(n, k) > 5e6.
inline std::optional<ExactResult> exact_fmmd(const Dataset& ds,
                                             const FairnessSpec& spec) {
  const std::size_t n = ds.size();
  const std::size_t k = spec.k();
  if (n > kExactMaxPoints && binomial(n, k) > kExactMaxSubsets)
    throw OracleGuardExceeded("C(" + std::to_string(n) + ", " +
                              std::to_string(k) + ") subsets exceed the oracle guard");
  if (spec.num_colors() < ds.num_colors())
    throw InvalidInput("spec has fewer colors than the dataset");
  if (k > n) return std::nullopt;

  std::vector<std::size_t> counts(spec.num_colors(), 0);
  std::vector<Index> current;
  current.reserve(k);
  std::optional<ExactResult> best;

  // `current_div` is the diversity of `current`. A branch whose diversity is
  // already <= the incumbent cannot win (ties keep the earlier subset).
  std::function<void(Index, double)> extend = [&](Index start, double current_div) {
    if (best && current_div <= best->value) return;
    if (current.size() == k) {
      for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] < spec.lower()[c]) return;
      best = ExactResult{current_div, current};
      return;
    }
    const std::size_t need = k - current.size();
    for (Index i = start; i + need <= n; ++i) {
      Color c = ds.color(i);
      if (counts[c] == spec.upper()[c]) continue;
      double div = current_div;
      for (Index j : current) div = std::min(div, ds.distance_unchecked(i, j));
      ++counts[c];
      current.push_back(i);
      extend(i + 1, div);
      current.pop_back();
      --counts[c];
    }
  };
  extend(0, kInfinity);
  return best;
}

// Whether some choice of at most one point per cluster (any color present in
// the cluster, or nothing) satisfies the spec. Exhaustive over all choices.
inline bool exact_assignment_feasible(const Dataset& ds,
                                      std::span<const std::vector<Index>> clusters,
                                      const FairnessSpec& spec) {
  std::vector<std::vector<Color>> options;
  double product = 1.0;
  for (const auto& cl : clusters) {
    if (cl.empty()) continue;
    std::vector<Color> colors;
    for (Index p : cl) colors.push_back(ds.color(p));
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    product *= static_cast<double>(colors.size() + 1);
    options.push_back(std::move(colors));
  }
  if (product > kAssignmentMaxChoices)
    throw OracleGuardExceeded("assignment enumeration exceeds the oracle guard");

  std::vector<std::size_t> counts(spec.num_colors(), 0);
  std::size_t total = 0;
  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == options.size()) {
      if (total != spec.k()) return false;
      for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] < spec.lower()[c] || counts[c] > spec.upper()[c]) return false;
      return true;
    }
    if (search(i + 1)) return true;
    if (total == spec.k()) return false;
    for (Color c : options[i]) {
      if (c >= counts.size() || counts[c] == spec.upper()[c]) continue;
      ++counts[c];
      ++total;
      bool ok = search(i + 1);
      --counts[c];
      --total;
      if (ok) return true;
    }
    return false;
  };
  return search(0);
}

// Greedy furthest-point selection ignoring colors: start at `seed_index`,
// then repeatedly add the point furthest from the chosen set (lowest index on
// ties). A 1/2-approximation for unconstrained max-min diversification.
inline std::vector<Index> gmm(const Dataset& ds, std::size_t k,
                              Index seed_index = 0) {
  const std::size_t n = ds.size();
  if (k == 0) throw InvalidInput("gmm needs k >= 1");
  if (k > n)
    throw InvalidInput("gmm k=" + std::to_string(k) + " exceeds n=" +
                       std::to_string(n));
  if (seed_index >= n) throw std::out_of_range("gmm seed index out of range");

  std::vector<Index> chosen{seed_index};
  std::vector<double> min_dist(n, kInfinity);
  std::vector<char> taken(n, 0);
  taken[seed_index] = 1;
  Index last = seed_index;
  while (chosen.size() < k) {
    Index best = n;
    for (Index i = 0; i < n; ++i) {
      if (taken[i]) continue;
      min_dist[i] = std::min(min_dist[i], ds.distance_unchecked(i, last));
      if (best == n || min_dist[i] > min_dist[best]) best = i;
    }
    taken[best] = 1;
    chosen.push_back(best);
    last = best;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace breach
