#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dsroq/qos.hpp"
#include "dsroq/routing.hpp"
#include "dsroq/traffic.hpp"

// Per-link packet scheduling. The default policy serves, each slot, the flow
// with the largest weighted sum of (a) the delay-score drop its head packet
// would suffer by waiting one more slot and (b) the flow's virtual backlog.
// Greedy per-slot maximization of that quantity is exactly the minimizer of
// the one-slot queue-drift-plus-penalty bound, so no lookahead is needed.

namespace dsroq {

struct InfeasibleBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Queueing-delay budget for one hop, in slots. When a route's fixed delay
// already exceeds the flow's latency ceiling no queueing budget exists;
// such hops score omega_min regardless of actual waiting time.
struct PerHopBounds {
  double min_slots = 0.0;
  double max_slots = 0.0;
  bool feasible = true;
};

// Splits the end-to-end queueing budget (latency target minus the route's
// propagation and per-hop transmission time) evenly across hops, then scales
// each hop's share by its utilization relative to the route-mean utilization:
// queues form on the busy links, so those hops receive more of the budget.
// Utilizations come from the committed allocation (load / capacity); an empty
// span or an idle route means a factor of 1 everywhere.
inline std::vector<PerHopBounds> compute_per_hop_bounds(const RouteCandidate& route,
                                                        const QosTargets& targets, double slot_s,
                                                        std::span<const double> hop_utilization = {},
                                                        bool throw_if_infeasible = true) {
  if (!(slot_s > 0.0)) throw std::invalid_argument("compute_per_hop_bounds: slot_s must be > 0");
  const int hops = route.hop_count();
  if (hops < 1) throw std::invalid_argument("compute_per_hop_bounds: empty route");
  if (!hop_utilization.empty() && static_cast<int>(hop_utilization.size()) != hops) {
    throw std::invalid_argument("compute_per_hop_bounds: utilization list must match hop count");
  }

  const double fixed_slots = route.total_prop_delay_s / slot_s + hops;
  const double max_budget = targets.latency_max_s / slot_s - fixed_slots;
  const double min_budget = targets.latency_min_s / slot_s - fixed_slots;

  std::vector<PerHopBounds> bounds(static_cast<size_t>(hops));
  if (max_budget <= 0.0) {
    if (throw_if_infeasible) {
      throw InfeasibleBudgetError("route fixed delay exceeds the flow latency ceiling");
    }
    for (auto& b : bounds) b = {0.0, 0.0, false};
    return bounds;
  }

  double mean_utilization = 0.0;
  if (!hop_utilization.empty()) {
    for (double u : hop_utilization) {
      if (u < 0.0) throw std::invalid_argument("compute_per_hop_bounds: negative utilization");
      mean_utilization += u;
    }
    mean_utilization /= hops;
  }
  for (int h = 0; h < hops; ++h) {
    double factor = 1.0;
    if (mean_utilization > 0.0) factor = hop_utilization[static_cast<size_t>(h)] / mean_utilization;
    auto& b = bounds[static_cast<size_t>(h)];
    b.max_slots = max_budget / hops * factor;
    b.min_slots = std::max(0.0, min_budget / hops * factor);
    // A zero-utilization hop on an otherwise loaded route gets no budget;
    // treat it like an exhausted one so scoring floors instead of throwing.
    b.feasible = b.max_slots > 0.0;
    if (!b.feasible) b.min_slots = 0.0;
  }
  return bounds;
}

// V' = max(V + arrivals - service, 0). V grows while a flow receives less
// service than its allocation and decays once the deficit is repaid.
inline double update_virtual_queue(double v, double allocated_pps, double served) {
  if (v < 0.0) throw std::invalid_argument("update_virtual_queue: negative backlog");
  return std::max(v + allocated_pps - served, 0.0);
}

// Delay score of one hop as a function of queueing delay in slots.
inline double per_hop_delay_score(double delay_slots, const PerHopBounds& bounds,
                                  const ScoreBounds& sb = {}) {
  if (!bounds.feasible) return sb.omega_min;
  return map_score(delay_slots, bounds.min_slots, bounds.max_slots,
                   ScoreOrientation::LowerIsBetter, sb);
}

struct QueuedPacket {
  long long generation_slot = 0;
  long long enqueue_slot = 0;
  int route_version = 0;
  int hop_index = 0;
};

// Per-flow state attached to one link.
struct LinkFlowState {
  int flow_id = 0;
  double weight = 1.0;
  double zeta_delta = 0.0;
  double zeta_tau = 0.0;
  TrafficClass traffic_class = TrafficClass::BE;
  double allocated_pps = 0.0;
  PerHopBounds bounds;
  double virtual_queue = 0.0;
  std::deque<QueuedPacket> queue;
};

// Priority of serving a flow now rather than next slot: the weighted delay
// score lost by its head packet waiting one more slot, plus the weighted
// virtual backlog. Zero-queue flows are never candidates.
inline double marginal_gain(const LinkFlowState& f, long long now, const ScoreBounds& sb = {}) {
  if (f.queue.empty()) return 0.0;
  const double waited = static_cast<double>(now - f.queue.front().enqueue_slot);
  const double score_now = per_hop_delay_score(waited, f.bounds, sb);
  const double score_later = per_hop_delay_score(waited + 1.0, f.bounds, sb);
  return f.weight * (f.zeta_delta * (score_now - score_later) + f.zeta_tau * f.virtual_queue);
}

enum class SchedulingPolicy { Lyapunov, Fifo, StrictPriority };

struct LinkState {
  std::vector<LinkFlowState> flows;  // sorted by flow_id
  int buffer_capacity = 1024;
  int drop_cursor = 0;  // flow id, persists across overflow rounds

  int occupancy() const {
    int total = 0;
    for (const auto& f : flows) total += static_cast<int>(f.queue.size());
    return total;
  }

  LinkFlowState* find(int flow_id) {
    auto it = std::lower_bound(flows.begin(), flows.end(), flow_id,
                               [](const LinkFlowState& f, int id) { return f.flow_id < id; });
    if (it == flows.end() || it->flow_id != flow_id) return nullptr;
    return &*it;
  }
};

struct TransmittedPacket {
  int flow_id = 0;
  QueuedPacket packet;
};

// Serves at most one packet on the link for slot `now` and advances every
// flow's virtual queue (served flows repay one unit). Selection ties resolve
// by higher weight then lower flow id so runs are reproducible.
inline std::optional<TransmittedPacket> schedule_slot(LinkState& link, SchedulingPolicy policy,
                                                      long long now, const ScoreBounds& sb = {}) {
  int selected = -1;
  switch (policy) {
    case SchedulingPolicy::Lyapunov: {
      double best_gain = 0.0;
      for (size_t i = 0; i < link.flows.size(); ++i) {
        const auto& f = link.flows[i];
        if (f.queue.empty()) continue;
        const double gain = marginal_gain(f, now, sb);
        if (selected < 0 || gain > best_gain + 1e-12 ||
            (std::abs(gain - best_gain) <= 1e-12 &&
             f.weight > link.flows[static_cast<size_t>(selected)].weight)) {
          selected = static_cast<int>(i);
          best_gain = gain;
        }
      }
      break;
    }
    case SchedulingPolicy::Fifo: {
      long long best_slot = 0;
      for (size_t i = 0; i < link.flows.size(); ++i) {
        const auto& f = link.flows[i];
        if (f.queue.empty()) continue;
        if (selected < 0 || f.queue.front().enqueue_slot < best_slot) {
          selected = static_cast<int>(i);
          best_slot = f.queue.front().enqueue_slot;
        }
      }
      break;
    }
    case SchedulingPolicy::StrictPriority: {
      int best_rank = 0;
      long long best_slot = 0;
      for (size_t i = 0; i < link.flows.size(); ++i) {
        const auto& f = link.flows[i];
        if (f.queue.empty()) continue;
        const int rank = static_cast<int>(f.traffic_class);
        if (selected < 0 || rank < best_rank ||
            (rank == best_rank && f.queue.front().enqueue_slot < best_slot)) {
          selected = static_cast<int>(i);
          best_rank = rank;
          best_slot = f.queue.front().enqueue_slot;
        }
      }
      break;
    }
  }

  std::optional<TransmittedPacket> out;
  if (selected >= 0) {
    auto& f = link.flows[static_cast<size_t>(selected)];
    out = TransmittedPacket{f.flow_id, f.queue.front()};
    f.queue.pop_front();
  }
  for (size_t i = 0; i < link.flows.size(); ++i) {
    auto& f = link.flows[i];
    const double served = static_cast<int>(i) == selected ? 1.0 : 0.0;
    f.virtual_queue = update_virtual_queue(f.virtual_queue, f.allocated_pps, served);
  }
  return out;
}

struct DroppedPacket {
  int flow_id = 0;
  QueuedPacket packet;
};

// Tail-drops packets round-robin across flows until occupancy fits the
// buffer. The cursor persists across calls so no single flow absorbs every
// overflow round.
inline std::vector<DroppedPacket> drop_overflow(LinkState& link) {
  std::vector<DroppedPacket> dropped;
  int excess = link.occupancy() - link.buffer_capacity;
  if (excess <= 0 || link.flows.empty()) return dropped;

  size_t i = 0;
  while (i < link.flows.size() && link.flows[i].flow_id < link.drop_cursor) ++i;
  if (i == link.flows.size()) i = 0;

  while (excess > 0) {
    auto& f = link.flows[i];
    if (!f.queue.empty()) {
      dropped.push_back({f.flow_id, f.queue.back()});
      f.queue.pop_back();
      --excess;
      link.drop_cursor = f.flow_id + 1;
    }
    i = (i + 1) % link.flows.size();
  }
  return dropped;
}

}  // namespace dsroq
