#pragma once

// Assigning clusters to colors by maximum flow.
//
// Network layout (node ids):
//   0                    source s
//   1 .. C               one node per nonempty cluster
//   C+1 .. C+m           one node per color
//   C+m+1                slack z
//   C+m+2                sink t
// Arcs: s -> cluster (1), cluster -> color j (1, once per color present),
// color j -> t (lower_j), color j -> z (upper_j - lower_j), z -> t (k - sum lower).
// A flow of value k selects k clusters, one color each, within the bounds.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "breach/core.hpp"
#include "breach/max_flow.hpp"

namespace breach {

using Capacity = std::int64_t;

struct FlowArc {
  std::size_t from = 0;
  std::size_t to = 0;
  Capacity capacity = 0;
};

struct FlowNetwork {
  std::size_t num_nodes = 0;
  std::size_t source = 0;
  std::size_t slack = 0;
  std::size_t sink = 0;
  std::size_t num_colors = 0;
  // Position in the caller's cluster list of each cluster node.
  std::vector<std::size_t> cluster_positions;
  std::vector<FlowArc> arcs;
  // Per cluster node: (color, arc id) of its cluster -> color arcs.
  std::vector<std::vector<std::pair<Color, std::size_t>>> color_arcs;

  std::size_t cluster_node(std::size_t i) const noexcept { return 1 + i; }
  std::size_t color_node(Color c) const noexcept {
    return 1 + cluster_positions.size() + c;
  }
};

struct FlowResult {
  Capacity value = 0;
  std::vector<Capacity> arc_flows;  // parallel to FlowNetwork::arcs
};

inline FlowNetwork build_flow_network(const Dataset& ds,
                                      std::span<const std::vector<Index>> clusters,
                                      const FairnessSpec& spec) {
  if (spec.num_colors() < ds.num_colors())
    throw InvalidInput("spec has fewer colors than the dataset");
  FlowNetwork net;
  net.num_colors = spec.num_colors();
  for (std::size_t i = 0; i < clusters.size(); ++i)
    if (!clusters[i].empty()) net.cluster_positions.push_back(i);

  const std::size_t c = net.cluster_positions.size();
  const std::size_t m = net.num_colors;
  net.source = 0;
  net.slack = c + m + 1;
  net.sink = c + m + 2;
  net.num_nodes = c + m + 3;
  net.color_arcs.resize(c);

  auto add = [&net](std::size_t from, std::size_t to, Capacity cap) {
    net.arcs.push_back({from, to, cap});
    return net.arcs.size() - 1;
  };

  for (std::size_t i = 0; i < c; ++i) add(net.source, net.cluster_node(i), 1);
  std::vector<char> seen(m, 0);
  for (std::size_t i = 0; i < c; ++i) {
    const auto& members = clusters[net.cluster_positions[i]];
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<Color> present;
    for (Index p : members) {
      Color col = ds.color(p);
      if (!seen[col]) {
        seen[col] = 1;
        present.push_back(col);
      }
    }
    std::sort(present.begin(), present.end());
    for (Color col : present)
      net.color_arcs[i].emplace_back(col, add(net.cluster_node(i), net.color_node(col), 1));
  }
  for (std::size_t j = 0; j < m; ++j) {
    Color col = static_cast<Color>(j);
    add(net.color_node(col), net.sink, static_cast<Capacity>(spec.lower()[j]));
    add(net.color_node(col), net.slack,
        static_cast<Capacity>(spec.upper()[j] - spec.lower()[j]));
  }
  add(net.slack, net.sink, static_cast<Capacity>(spec.k() - spec.sum_lower()));
  return net;
}

inline FlowResult max_flow_integral(const FlowNetwork& net) {
  PushRelabel<Capacity> solver(net.num_nodes);
  for (const auto& a : net.arcs) solver.add_arc(a.from, a.to, a.capacity);
  FlowResult result;
  result.value = solver.solve(net.source, net.sink);
  result.arc_flows.reserve(net.arcs.size());
  for (std::size_t i = 0; i < net.arcs.size(); ++i)
    result.arc_flows.push_back(solver.flow(i));
  return result;
}

// One point per cluster that carries flow, of the color its flow goes to;
// the lowest index of that color inside the cluster. nullopt when the flow
// value is below k.
inline std::optional<std::vector<Index>> extract_solution(
    const Dataset& ds, std::span<const std::vector<Index>> clusters,
    const FlowNetwork& net, const FlowResult& flow, const FairnessSpec& spec) {
  if (flow.value < static_cast<Capacity>(spec.k())) return std::nullopt;
  std::vector<Index> chosen;
  chosen.reserve(spec.k());
  for (std::size_t i = 0; i < net.cluster_positions.size(); ++i) {
    for (const auto& [col, arc_id] : net.color_arcs[i]) {
      if (flow.arc_flows[arc_id] <= 0) continue;
      const auto& members = clusters[net.cluster_positions[i]];
      Index pick = members.front();
      bool found = false;
      for (Index p : members)
        if (ds.color(p) == col && (!found || p < pick)) {
          pick = p;
          found = true;
        }
      chosen.push_back(pick);
      break;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Build, solve and extract in one step.
inline std::optional<std::vector<Index>> assign_clusters(
    const Dataset& ds, std::span<const std::vector<Index>> clusters,
    const FairnessSpec& spec) {
  FlowNetwork net = build_flow_network(ds, clusters, spec);
  FlowResult flow = max_flow_integral(net);
  return extract_solution(ds, clusters, net, flow, spec);
}

}  // namespace breach
