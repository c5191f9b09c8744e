#pragma once

// Random padded decomposition of a pruned point set. Points closer than
// gamma * alpha are joined in a threshold graph; a CKR partition (random
// center order, random hop radius R) splits it into balls, and the vertices
// at exactly hop distance R from their center are removed as guards so the
// remaining clusters are pairwise at least gamma * alpha apart.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "breach/core.hpp"
#include "breach/random.hpp"

namespace breach {

struct AlphaParams {
  double alpha = 0.0;
  std::size_t delta1 = 0;
  std::size_t delta2 = 0;
};

// alpha = sqrt(ln m) / m, delta1 = max(floor(1/(4 alpha)), 1),
// delta2 = floor(1/(2 alpha)).
inline AlphaParams compute_alpha(std::size_t num_colors) {
  if (num_colors < 2)
    throw InvalidInput("decomposition needs at least two colors");
  const double m = static_cast<double>(num_colors);
  AlphaParams p;
  p.alpha = std::sqrt(std::log(m)) / m;
  p.delta1 = std::max<std::size_t>(
      static_cast<std::size_t>(std::floor(1.0 / (4.0 * p.alpha))), 1);
  p.delta2 = static_cast<std::size_t>(std::floor(1.0 / (2.0 * p.alpha)));
  return p;
}

// Pairwise distances among a subset of the dataset, indexed locally.
class LocalDistances {
 public:
  LocalDistances(const Dataset& ds, std::span<const Index> vertices)
      : vertices_(vertices.begin(), vertices.end()),
        table_(vertices_.size() * vertices_.size(), 0.0) {
    const std::size_t n = vertices_.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        double d = ds.distance(vertices_[a], vertices_[b]);
        table_[a * n + b] = d;
        table_[b * n + a] = d;
      }
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<Index>& vertices() const noexcept { return vertices_; }
  double operator()(std::size_t a, std::size_t b) const noexcept {
    return table_[a * vertices_.size() + b];
  }

  double max_distance() const noexcept {
    double best = 0.0;
    for (double d : table_) best = std::max(best, d);
    return best;
  }

 private:
  std::vector<Index> vertices_;
  std::vector<double> table_;
};

// Unweighted graph on a vertex subset with an edge iff d(u, v) < theta.
// Adjacency is stored over local ids 0..|vertices|-1.
struct ThresholdGraph {
  std::vector<Index> vertices;
  std::vector<std::vector<std::uint32_t>> adjacency;
  double theta = 0.0;

  std::size_t size() const noexcept { return vertices.size(); }
  std::size_t num_edges() const noexcept {
    std::size_t twice = 0;
    for (const auto& nb : adjacency) twice += nb.size();
    return twice / 2;
  }
  bool has_edge(std::size_t a, std::size_t b) const {
    for (auto x : adjacency.at(a))
      if (x == b) return true;
    return false;
  }
};

inline ThresholdGraph build_threshold_graph(const LocalDistances& dist,
                                            double theta) {
  if (!(theta > 0.0)) throw InvalidInput("threshold must be positive");
  ThresholdGraph g;
  g.vertices = dist.vertices();
  g.theta = theta;
  g.adjacency.resize(dist.size());
  for (std::size_t a = 0; a < dist.size(); ++a)
    for (std::size_t b = a + 1; b < dist.size(); ++b)
      if (dist(a, b) < theta) {
        g.adjacency[a].push_back(static_cast<std::uint32_t>(b));
        g.adjacency[b].push_back(static_cast<std::uint32_t>(a));
      }
  return g;
}

inline ThresholdGraph build_threshold_graph(const Dataset& ds,
                                            std::span<const Index> vertices,
                                            double theta) {
  return build_threshold_graph(LocalDistances(ds, vertices), theta);
}

struct Decomposition {
  // D_1..D_n in center order; dataset indices, ascending within a cluster.
  // Empty clusters keep their position.
  std::vector<std::vector<Index>> clusters;
  std::vector<Index> guards;       // ascending
  std::size_t radius = 0;
  std::vector<Index> permutation;  // centers in visiting order
};

// Deterministic core of the partition: visits centers in `order` (local ids)
// with hop radius `radius`. Ball j takes every still-unassigned vertex within
// `radius` hops of its center; those at hop distance exactly `radius` become
// guards.
//
// The BFS from a later center does not expand a vertex that an earlier
// center already reached in as few hops: anything behind it was already
// assigned, so the unassigned part of the ball and its hop distances are
// unchanged.
inline Decomposition ckr_partition(const ThresholdGraph& g,
                                   std::span<const std::uint32_t> order,
                                   std::size_t radius) {
  const std::size_t n = g.size();
  if (order.size() != n)
    throw InvalidInput("center order must be a permutation of the vertices");
  constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

  Decomposition out;
  out.radius = radius;
  out.clusters.resize(n);
  out.permutation.reserve(n);

  std::vector<std::size_t> best_hops(n, kUnreached);
  std::vector<char> assigned(n, 0);
  std::vector<std::size_t> hops(n, 0);
  std::vector<std::uint32_t> frontier;
  frontier.reserve(n);

  for (std::size_t j = 0; j < n; ++j) {
    const std::uint32_t center = order[j];
    out.permutation.push_back(g.vertices[center]);
    frontier.clear();
    hops[center] = 0;
    best_hops[center] = 0;
    frontier.push_back(center);
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      std::uint32_t v = frontier[head];
      if (!assigned[v]) {
        assigned[v] = 1;
        if (hops[v] < radius)
          out.clusters[j].push_back(g.vertices[v]);
        else
          out.guards.push_back(g.vertices[v]);
      }
      if (hops[v] == radius) continue;
      for (std::uint32_t w : g.adjacency[v]) {
        std::size_t h = hops[v] + 1;
        if (h >= best_hops[w]) continue;
        best_hops[w] = h;
        hops[w] = h;
        frontier.push_back(w);
      }
    }
    std::sort(out.clusters[j].begin(), out.clusters[j].end());
  }
  std::sort(out.guards.begin(), out.guards.end());
  return out;
}

// Draws the center permutation (Fisher-Yates) and then R uniform on
// {delta1..delta2}, in that order, from `rng`.
inline Decomposition ckr_decompose(const ThresholdGraph& g,
                                   const AlphaParams& params, Rng& rng) {
  std::vector<std::uint32_t> order(g.size());
  std::iota(order.begin(), order.end(), std::uint32_t{0});
  rng.shuffle(std::span<std::uint32_t>(order));
  std::size_t radius = static_cast<std::size_t>(rng.between(params.delta1, params.delta2));
  return ckr_partition(g, order, radius);
}

// Full DEC step on the subset `vertices`: threshold gamma * alpha with alpha
// taken from `num_colors`.
inline Decomposition ckr_decompose(const Dataset& ds,
                                   std::span<const Index> vertices,
                                   double gamma, std::size_t num_colors,
                                   Rng& rng) {
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
  AlphaParams params = compute_alpha(num_colors);
  ThresholdGraph g = build_threshold_graph(ds, vertices, gamma * params.alpha);
  return ckr_decompose(g, params, rng);
}

// True iff every pair of points in different clusters is at least
// `threshold` apart.
inline bool cluster_separation_check(const Dataset& ds,
                                     const Decomposition& dec,
                                     double threshold) {
  std::vector<std::pair<Index, std::size_t>> labelled;
  for (std::size_t c = 0; c < dec.clusters.size(); ++c)
    for (Index i : dec.clusters[c]) labelled.emplace_back(i, c);
  for (std::size_t a = 0; a < labelled.size(); ++a)
    for (std::size_t b = a + 1; b < labelled.size(); ++b)
      if (labelled[a].second != labelled[b].second &&
          ds.distance_unchecked(labelled[a].first, labelled[b].first) < threshold)
        return false;
  return true;
}

}  // namespace breach
