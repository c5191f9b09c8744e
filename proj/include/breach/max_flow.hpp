#pragma once

// Integral maximum flow by FIFO push-relabel (Goldberg-Tarjan), O(V^3).
// Active vertices are processed in FIFO order and arcs in insertion order,
// so the resulting flow is a deterministic function of the network.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace breach {

template <typename Cap = std::int64_t>
class PushRelabel {
  static_assert(std::is_integral_v<Cap> && std::is_signed_v<Cap>);

 public:
  struct Arc {
    std::size_t to;
    std::size_t rev;  // index of the paired arc in adjacency_[to]
    Cap capacity;
    Cap flow;
    bool forward;
  };

  explicit PushRelabel(std::size_t num_nodes) : adjacency_(num_nodes) {}

  std::size_t num_nodes() const noexcept { return adjacency_.size(); }

  // Returns an id usable with flow(). Parallel arcs are allowed.
  std::size_t add_arc(std::size_t from, std::size_t to, Cap capacity) {
    if (from >= num_nodes() || to >= num_nodes())
      throw std::out_of_range("arc endpoint out of range");
    if (capacity < 0) throw std::invalid_argument("negative capacity");
    std::size_t from_pos = adjacency_[from].size();
    std::size_t to_pos = adjacency_[to].size() + (from == to ? 1 : 0);
    adjacency_[from].push_back({to, to_pos, capacity, 0, true});
    adjacency_[to].push_back({from, from_pos, 0, 0, false});
    arc_ids_.push_back({from, from_pos});
    return arc_ids_.size() - 1;
  }

  Cap flow(std::size_t arc_id) const {
    auto [node, pos] = arc_ids_.at(arc_id);
    return adjacency_[node][pos].flow;
  }

  const Arc& arc(std::size_t arc_id) const {
    auto [node, pos] = arc_ids_.at(arc_id);
    return adjacency_[node][pos];
  }

  std::size_t num_arcs() const noexcept { return arc_ids_.size(); }

  Cap solve(std::size_t source, std::size_t sink) {
    const std::size_t n = num_nodes();
    if (source >= n || sink >= n) throw std::out_of_range("terminal out of range");
    if (source == sink) return 0;
    for (auto& arcs : adjacency_)
      for (auto& a : arcs) a.flow = 0;

    height_.assign(n, 0);
    excess_.assign(n, 0);
    current_.assign(n, 0);
    std::deque<std::size_t> active;
    std::vector<char> queued(n, 0);
    height_[source] = n;

    for (auto& a : adjacency_[source]) {
      if (!a.forward || a.capacity == 0) continue;
      Cap delta = a.capacity;
      a.flow += delta;
      adjacency_[a.to][a.rev].flow -= delta;
      excess_[a.to] += delta;
      excess_[source] -= delta;
      if (a.to != sink && a.to != source && !queued[a.to]) {
        queued[a.to] = 1;
        active.push_back(a.to);
      }
    }

    while (!active.empty()) {
      std::size_t v = active.front();
      active.pop_front();
      queued[v] = 0;
      discharge(v, source, sink, active, queued);
    }
    return excess_[sink];
  }

 private:
  Cap residual(const Arc& a) const noexcept {
    return (a.forward ? a.capacity : Cap{0}) - a.flow;
  }

  void discharge(std::size_t v, std::size_t source, std::size_t sink,
                 std::deque<std::size_t>& active, std::vector<char>& queued) {
    auto& arcs = adjacency_[v];
    while (excess_[v] > 0) {
      if (current_[v] == arcs.size()) {
        relabel(v);
        current_[v] = 0;
        continue;
      }
      Arc& a = arcs[current_[v]];
      if (residual(a) > 0 && height_[v] == height_[a.to] + 1) {
        Cap delta = std::min(excess_[v], residual(a));
        a.flow += delta;
        adjacency_[a.to][a.rev].flow -= delta;
        excess_[v] -= delta;
        excess_[a.to] += delta;
        if (a.to != source && a.to != sink && !queued[a.to]) {
          queued[a.to] = 1;
          active.push_back(a.to);
        }
      } else {
        ++current_[v];
      }
    }
  }

  void relabel(std::size_t v) {
    std::size_t lowest = std::numeric_limits<std::size_t>::max();
    for (const auto& a : adjacency_[v])
      if (residual(a) > 0) lowest = std::min(lowest, height_[a.to]);
    if (lowest != std::numeric_limits<std::size_t>::max()) height_[v] = lowest + 1;
  }

  std::vector<std::vector<Arc>> adjacency_;
  std::vector<std::pair<std::size_t, std::size_t>> arc_ids_;
  std::vector<std::size_t> height_;
  std::vector<Cap> excess_;
  std::vector<std::size_t> current_;
};

}  // namespace breach
