#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "dsroq/constellation.hpp"

// K-shortest loop-free route candidates over a region topology. Arc cost is
// propagation delay plus one slot of transmission time, so candidate order
// matches end-to-end latency at unit service rate.

namespace dsroq {

struct NoRouteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RouteCandidate {
  int source = 0;
  int dest = 0;
  std::vector<int> arc_ids;        // in traversal order
  std::vector<int> node_ids;       // arc_ids.size() + 1 entries
  double total_prop_delay_s = 0.0;
  double total_cost = 0.0;

  int hop_count() const { return static_cast<int>(arc_ids.size()); }
};

namespace detail {

struct ArcGraph {
  int node_count = 0;
  // adjacency[u] lists (arc_id, v); arc ids index topo.arcs.
  std::vector<std::vector<std::pair<int, int>>> adjacency;
  std::vector<double> cost;
  std::vector<double> delay;
};

inline ArcGraph make_arc_graph(const RegionTopology& topo, double slot_s) {
  if (slot_s < 0.0) throw std::invalid_argument("slot duration must be nonnegative");
  ArcGraph g;
  g.node_count = topo.region_count();
  g.adjacency.resize(static_cast<size_t>(g.node_count));
  g.cost.resize(topo.arcs.size());
  g.delay.resize(topo.arcs.size());
  for (size_t a = 0; a < topo.arcs.size(); ++a) {
    const auto [u, v] = topo.arcs[a];
    g.adjacency[static_cast<size_t>(u)].push_back({static_cast<int>(a), v});
    g.delay[a] = topo.arc_delay_s[a];
    g.cost[a] = topo.arc_delay_s[a] + slot_s;
  }
  return g;
}

// Dijkstra with (distance, node) ordering so equal-cost paths resolve to the
// lowest-numbered next node, independent of adjacency insertion order.
// banned_arcs / banned_nodes support the spur computation in Yen's loop.
inline bool shortest_path(const ArcGraph& g, int src, int dst,
                          const std::set<int>& banned_arcs, const std::vector<char>& banned_nodes,
                          std::vector<int>& out_arcs) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<size_t>(g.node_count), inf);
  std::vector<int> parent_arc(static_cast<size_t>(g.node_count), -1);
  std::vector<int> parent_node(static_cast<size_t>(g.node_count), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[static_cast<size_t>(src)] = 0.0;
  heap.push({0.0, src});

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<size_t>(u)]) continue;
    if (u == dst) break;
    for (const auto& [arc, v] : g.adjacency[static_cast<size_t>(u)]) {
      if (banned_nodes[static_cast<size_t>(v)] || banned_arcs.count(arc)) continue;
      const double nd = d + g.cost[static_cast<size_t>(arc)];
      if (nd < dist[static_cast<size_t>(v)] - 1e-15) {
        dist[static_cast<size_t>(v)] = nd;
        parent_arc[static_cast<size_t>(v)] = arc;
        parent_node[static_cast<size_t>(v)] = u;
        heap.push({nd, v});
      }
    }
  }
  if (dist[static_cast<size_t>(dst)] == inf) return false;

  out_arcs.clear();
  for (int v = dst; v != src; v = parent_node[static_cast<size_t>(v)]) {
    out_arcs.push_back(parent_arc[static_cast<size_t>(v)]);
  }
  std::reverse(out_arcs.begin(), out_arcs.end());
  return true;
}

inline RouteCandidate make_candidate(const RegionTopology& topo, const ArcGraph& g, int src,
                                     int dst, const std::vector<int>& arcs) {
  RouteCandidate c;
  c.source = src;
  c.dest = dst;
  c.arc_ids = arcs;
  c.node_ids.push_back(src);
  for (int a : arcs) {
    c.total_prop_delay_s += g.delay[static_cast<size_t>(a)];
    c.total_cost += g.cost[static_cast<size_t>(a)];
    c.node_ids.push_back(topo.arcs[static_cast<size_t>(a)].second);
  }
  return c;
}

}  // namespace detail

// Yen's algorithm: up to k loop-free paths in nondecreasing cost order.
// Ties break on the lexicographically smallest arc-id sequence, making the
// candidate list reproducible across platforms. Throws NoRouteError when the
// destination is unreachable; fewer than k paths may exist.
inline std::vector<RouteCandidate> k_shortest_routes(const RegionTopology& topo, int src, int dst,
                                                     int k, double slot_s) {
  if (k < 1) throw std::invalid_argument("k_shortest_routes: k must be >= 1");
  const int n = topo.region_count();
  if (src < 0 || src >= n || dst < 0 || dst >= n) {
    throw std::invalid_argument("k_shortest_routes: endpoint out of range");
  }
  if (src == dst) throw std::invalid_argument("k_shortest_routes: source equals destination");

  const detail::ArcGraph g = detail::make_arc_graph(topo, slot_s);
  std::vector<char> no_banned_nodes(static_cast<size_t>(n), 0);
  std::vector<int> arcs;
  if (!detail::shortest_path(g, src, dst, {}, no_banned_nodes, arcs)) {
    throw NoRouteError("no route between regions");
  }

  std::vector<RouteCandidate> result;
  result.push_back(detail::make_candidate(topo, g, src, dst, arcs));

  auto path_less = [](const RouteCandidate& a, const RouteCandidate& b) {
    if (a.total_cost != b.total_cost) return a.total_cost < b.total_cost;
    return a.arc_ids < b.arc_ids;
  };
  // Candidate pool keyed by arc sequence to drop duplicates across spur roots.
  std::vector<RouteCandidate> pool;
  std::set<std::vector<int>> seen;
  seen.insert(arcs);

  while (static_cast<int>(result.size()) < k) {
    const RouteCandidate& prev = result.back();
    for (size_t spur = 0; spur < prev.arc_ids.size(); ++spur) {
      const int spur_node = prev.node_ids[spur];
      std::set<int> banned_arcs;
      for (const RouteCandidate& r : result) {
        if (r.arc_ids.size() > spur &&
            std::equal(r.arc_ids.begin(), r.arc_ids.begin() + static_cast<long>(spur),
                       prev.arc_ids.begin())) {
          banned_arcs.insert(r.arc_ids[spur]);
        }
      }
      std::vector<char> banned_nodes(static_cast<size_t>(n), 0);
      for (size_t i = 0; i < spur; ++i) banned_nodes[static_cast<size_t>(prev.node_ids[i])] = 1;

      std::vector<int> spur_arcs;
      if (!detail::shortest_path(g, spur_node, dst, banned_arcs, banned_nodes, spur_arcs)) {
        continue;
      }
      std::vector<int> full(prev.arc_ids.begin(), prev.arc_ids.begin() + static_cast<long>(spur));
      full.insert(full.end(), spur_arcs.begin(), spur_arcs.end());
      if (seen.insert(full).second) {
        pool.push_back(detail::make_candidate(topo, g, src, dst, full));
      }
    }
    if (pool.empty()) break;
    auto best = std::min_element(pool.begin(), pool.end(), path_less);
    result.push_back(*best);
    pool.erase(best);
  }
  return result;
}

// Evenly spaced bandwidth grid over [lo, hi] in packets per slot; grid[0] is
// always lo and grid[count-1] is hi.
inline std::vector<double> bandwidth_grid(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("bandwidth_grid: count must be >= 1");
  if (!(lo >= 0.0) || !(hi >= lo)) throw std::invalid_argument("bandwidth_grid: need 0 <= lo <= hi");
  std::vector<double> grid(static_cast<size_t>(count));
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  for (int i = 0; i < count; ++i) {
    grid[static_cast<size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  }
  return grid;
}

}  // namespace dsroq
