#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dsroq/qos.hpp"
#include "dsroq/routing.hpp"
#include "dsroq/simulator.hpp"
#include "dsroq/traffic.hpp"

// Joint route and bandwidth selection. A configuration assigns every flow one
// of its k candidate routes and one grid bandwidth; configurations are scored
// by simulating a scheduling window and combining the QoS objective with a
// capacity overbooking penalty. The search is a Monte Carlo tree over flows
// in descending weight order with epsilon-greedy descent, max-backup of node
// values, and a decaying exploration schedule.

namespace dsroq {

struct RewardBreakdown {
  double reward = 0.0;
  double objective = 0.0;
  double cost = 0.0;
};

struct AllocationProblem {
  RegionTopology topo;
  std::vector<FlowSpec> flows;                       // sorted by flow id
  std::vector<std::vector<RouteCandidate>> routes;   // per flow
  std::vector<std::vector<double>> bandwidths;       // per flow, packets per slot
  std::vector<int> decision_order;                   // flow indices, heaviest first
  SimConfig eval_cfg;
  double lambda = 1.0;

  int flow_count() const { return static_cast<int>(flows.size()); }

  int action_count(int flow_index) const {
    return static_cast<int>(routes[static_cast<size_t>(flow_index)].size() *
                            bandwidths[static_cast<size_t>(flow_index)].size());
  }
};

// Candidate routes and bandwidth grids for every flow. Decision depth d of
// the search tree corresponds to decision_order[d]; heavier flows choose
// first so their routes shape the residual capacity seen by lighter ones.
inline AllocationProblem make_problem(const RegionTopology& topo, std::vector<FlowSpec> flows,
                                      int route_candidates, int bandwidth_levels,
                                      const SimConfig& eval_cfg, double lambda) {
  if (route_candidates < 1) throw std::invalid_argument("make_problem: route_candidates >= 1");
  if (bandwidth_levels < 1) throw std::invalid_argument("make_problem: bandwidth_levels >= 1");
  std::sort(flows.begin(), flows.end(),
            [](const FlowSpec& a, const FlowSpec& b) { return a.flow.id < b.flow.id; });

  AllocationProblem p;
  p.topo = topo;
  p.flows = std::move(flows);
  p.eval_cfg = eval_cfg;
  p.lambda = lambda;
  for (const auto& spec : p.flows) {
    p.routes.push_back(k_shortest_routes(topo, spec.flow.source_region, spec.flow.dest_region,
                                         route_candidates, eval_cfg.slot_s));
    p.bandwidths.push_back(bandwidth_grid(spec.targets.throughput_min_pps,
                                          spec.targets.throughput_max_pps, bandwidth_levels));
  }
  p.decision_order.resize(p.flows.size());
  for (size_t i = 0; i < p.flows.size(); ++i) p.decision_order[i] = static_cast<int>(i);
  std::sort(p.decision_order.begin(), p.decision_order.end(), [&p](int a, int b) {
    const double wa = p.flows[static_cast<size_t>(a)].flow.weight;
    const double wb = p.flows[static_cast<size_t>(b)].flow.weight;
    if (wa != wb) return wa > wb;
    return p.flows[static_cast<size_t>(a)].flow.id < p.flows[static_cast<size_t>(b)].flow.id;
  });
  return p;
}

// actions[d] picks for flow decision_order[d]; decoded as route-major index.
inline std::vector<FlowAllocation> decode_actions(const AllocationProblem& p,
                                                  const std::vector<int>& actions) {
  if (static_cast<int>(actions.size()) != p.flow_count()) {
    throw std::invalid_argument("decode_actions: action count mismatch");
  }
  std::vector<FlowAllocation> alloc(p.flows.size());
  for (size_t d = 0; d < actions.size(); ++d) {
    const int f = p.decision_order[d];
    const auto& bws = p.bandwidths[static_cast<size_t>(f)];
    const int a = actions[d];
    if (a < 0 || a >= p.action_count(f)) throw std::invalid_argument("decode_actions: bad action");
    const int route_idx = a / static_cast<int>(bws.size());
    const int bw_idx = a % static_cast<int>(bws.size());
    alloc[static_cast<size_t>(f)] = {p.flows[static_cast<size_t>(f)].flow.id,
                                     p.routes[static_cast<size_t>(f)][static_cast<size_t>(route_idx)],
                                     bws[static_cast<size_t>(bw_idx)]};
  }
  return alloc;
}

// Relative overbooking summed over directed arcs: each arc contributes the
// allocated bandwidth above its capacity, normalized by that capacity.
inline double capacity_cost(const RegionTopology& topo, const std::vector<FlowAllocation>& alloc) {
  if (!(topo.link_capacity_pps > 0.0)) {
    throw std::invalid_argument("capacity_cost: capacity must be positive");
  }
  std::vector<double> load(topo.arcs.size(), 0.0);
  for (const auto& a : alloc) {
    for (int arc : a.route.arc_ids) load[static_cast<size_t>(arc)] += a.bandwidth_pps;
  }
  double cost = 0.0;
  for (double l : load) {
    cost += std::max(0.0, l - topo.link_capacity_pps) / topo.link_capacity_pps;
  }
  return cost;
}

inline double reward_value(double objective, double cost, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("reward_value: lambda must be >= 0");
  return objective - lambda * cost;
}

// Best-seen backup: a node's value is the highest reward of any episode that
// passed through it.
inline double q_update(double q, double reward) { return std::max(q, reward); }

// Scores one configuration: a fresh simulator runs a single scheduling window
// under the queue-aware policy with a fixed arrival stream, so equal
// configurations always earn equal rewards and results can be cached.
inline RewardBreakdown reward_for_config(const AllocationProblem& p,
                                         const std::vector<int>& actions) {
  const std::vector<FlowAllocation> alloc = decode_actions(p, actions);
  SimConfig cfg = p.eval_cfg;
  cfg.policy = SchedulingPolicy::Lyapunov;
  NetworkSim sim(p.topo, p.flows, cfg);
  sim.apply_allocation(alloc);
  sim.run(cfg.window_slots);

  const WindowMetrics& wm = sim.windows().back();
  std::vector<double> weights(p.flows.size());
  std::vector<double> scores(p.flows.size());
  for (size_t i = 0; i < p.flows.size(); ++i) {
    weights[i] = p.flows[i].flow.weight;
    scores[i] =
        score_flow_window(wm.per_flow[i], p.flows[i].targets, cfg.score_bounds).omega_total;
  }
  RewardBreakdown r;
  r.objective = objective(weights, scores, cfg.score_bounds);
  r.cost = capacity_cost(p.topo, alloc);
  r.reward = reward_value(r.objective, r.cost, p.lambda);
  return r;
}

struct MctsParams {
  double eps0 = 0.5;
  double a0 = 100.0;
  double b0 = 10.0;
  double eps_min = 0.05;
};

// Exploration probability for episode z, decaying with log10(z/a0 + b0).
inline double epsilon_schedule(long long z, const MctsParams& params) {
  const double arg = static_cast<double>(z) / params.a0 + params.b0;
  if (!(arg > 0.0)) throw std::invalid_argument("epsilon_schedule: log argument must be > 0");
  return std::max(1.0 - params.eps0 * std::log10(arg), params.eps_min);
}

struct EpisodeRecord {
  int episode = 0;
  double reward = 0.0;
  double objective = 0.0;
  double cost = 0.0;
  double epsilon = 0.0;
};

struct TrainResult {
  std::vector<int> best_actions;
  std::vector<FlowAllocation> best_allocation;
  RewardBreakdown best;
  std::vector<EpisodeRecord> trace;
};

namespace detail {

// Node value is the best reward seen through the node, not a running mean:
// the final answer is the single best configuration, so backup keeps the max.
struct MctsNode {
  double q = -std::numeric_limits<double>::infinity();
  std::map<int, std::unique_ptr<MctsNode>> children;
};

}  // namespace detail

// Epsilon-greedy tree search over per-flow actions. Each episode walks root
// to leaf: below the explored frontier the walk is uniform (and the visited
// nodes join the tree), inside it the walk exploits the best child except
// with probability epsilon. The leaf configuration is simulated, then its
// reward backs up the path via max. Returns the best configuration found and
// the per-episode trace.
inline TrainResult train(const AllocationProblem& p, int episodes, const MctsParams& params,
                         uint64_t seed, const std::vector<int>* warm_start = nullptr) {
  if (episodes < 1) throw std::invalid_argument("train: episodes must be >= 1");
  const int depth = p.flow_count();
  if (depth < 1) throw std::invalid_argument("train: no flows");

  RandomStream rng(seed);
  auto root = std::make_unique<detail::MctsNode>();
  std::map<std::vector<int>, RewardBreakdown> cache;
  TrainResult result;
  result.best.reward = -std::numeric_limits<double>::infinity();

  auto evaluate = [&](const std::vector<int>& actions) -> RewardBreakdown {
    auto it = cache.find(actions);
    if (it != cache.end()) return it->second;
    const RewardBreakdown r = reward_for_config(p, actions);
    cache.emplace(actions, r);
    return r;
  };
  auto backpropagate = [](std::vector<detail::MctsNode*>& path, double reward) {
    for (detail::MctsNode* n : path) n->q = q_update(n->q, reward);
  };
  auto note_best = [&result](const std::vector<int>& actions, const RewardBreakdown& r) {
    if (r.reward > result.best.reward) {
      result.best = r;
      result.best_actions = actions;
    }
  };

  bool warm_ok = warm_start && static_cast<int>(warm_start->size()) == depth;
  for (int d = 0; warm_ok && d < depth; ++d) {
    const int a = (*warm_start)[static_cast<size_t>(d)];
    warm_ok = a >= 0 && a < p.action_count(p.decision_order[static_cast<size_t>(d)]);
  }
  if (warm_ok) {
    std::vector<detail::MctsNode*> path = {root.get()};
    detail::MctsNode* node = root.get();
    for (int d = 0; d < depth; ++d) {
      auto& child = node->children[(*warm_start)[static_cast<size_t>(d)]];
      if (!child) child = std::make_unique<detail::MctsNode>();
      node = child.get();
      path.push_back(node);
    }
    const RewardBreakdown r = evaluate(*warm_start);
    backpropagate(path, r.reward);
    note_best(*warm_start, r);
  }

  result.trace.reserve(static_cast<size_t>(episodes));
  for (int z = 0; z < episodes; ++z) {
    const double eps = epsilon_schedule(z, params);
    std::vector<detail::MctsNode*> path = {root.get()};
    std::vector<int> actions(static_cast<size_t>(depth));
    detail::MctsNode* node = root.get();
    for (int d = 0; d < depth; ++d) {
      const int count = p.action_count(p.decision_order[static_cast<size_t>(d)]);
      int a;
      if (node->children.empty() || rng.next_double() < eps) {
        a = static_cast<int>(rng.next_below(static_cast<uint32_t>(count)));
      } else {
        a = node->children.begin()->first;
        double best_q = node->children.begin()->second->q;
        for (const auto& [action, child] : node->children) {
          if (child->q > best_q) {
            best_q = child->q;
            a = action;
          }
        }
      }
      auto& child = node->children[a];
      if (!child) child = std::make_unique<detail::MctsNode>();
      node = child.get();
      path.push_back(node);
      actions[static_cast<size_t>(d)] = a;
    }

    const RewardBreakdown r = evaluate(actions);
    backpropagate(path, r.reward);
    note_best(actions, r);
    result.trace.push_back({z, r.reward, r.objective, r.cost, eps});
  }

  result.best_allocation = decode_actions(p, result.best_actions);
  return result;
}

// Greedy baseline: flows pick routes one at a time in strict class order
// (expedited, then assured, then best effort). Route preference mixes
// normalized fixed delay with the congestion committed by earlier flows, and
// the bandwidth is the largest grid level fitting the route's residual
// capacity (the lowest level when nothing fits).
inline std::vector<FlowAllocation> baseline_sequential(const AllocationProblem& p) {
  std::vector<int> order(p.flows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&p](int a, int b) {
    const auto& fa = p.flows[static_cast<size_t>(a)].flow;
    const auto& fb = p.flows[static_cast<size_t>(b)].flow;
    if (fa.traffic_class != fb.traffic_class) return fa.traffic_class < fb.traffic_class;
    return fa.id < fb.id;
  });

  std::vector<double> load(p.topo.arcs.size(), 0.0);
  std::vector<FlowAllocation> alloc(p.flows.size());
  for (int f : order) {
    const auto& spec = p.flows[static_cast<size_t>(f)];
    const auto& candidates = p.routes[static_cast<size_t>(f)];
    const double zd = spec.targets.zeta[0];
    const double zt = spec.targets.zeta[1];
    const double budget = spec.targets.latency_max_s;

    int best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < candidates.size(); ++c) {
      double cost = 0.0;
      for (int arc : candidates[c].arc_ids) {
        const double fixed = p.topo.arc_delay_s[static_cast<size_t>(arc)] + p.eval_cfg.slot_s;
        cost += zd * (fixed / budget) +
                zt * (load[static_cast<size_t>(arc)] / p.topo.link_capacity_pps);
      }
      if (cost < best_cost - 1e-15) {
        best_cost = cost;
        best = static_cast<int>(c);
      }
    }

    const RouteCandidate& route = candidates[static_cast<size_t>(best)];
    double residual = std::numeric_limits<double>::infinity();
    for (int arc : route.arc_ids) {
      residual = std::min(residual, p.topo.link_capacity_pps - load[static_cast<size_t>(arc)]);
    }
    const auto& grid = p.bandwidths[static_cast<size_t>(f)];
    double bw = grid.front();
    for (double level : grid) {
      if (level <= residual + 1e-12) bw = level;
    }
    for (int arc : route.arc_ids) load[static_cast<size_t>(arc)] += bw;
    alloc[static_cast<size_t>(f)] = {spec.flow.id, route, bw};
  }
  return alloc;
}

}  // namespace dsroq
