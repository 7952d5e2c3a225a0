#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "dsroq/constellation.hpp"
#include "dsroq/qos.hpp"
#include "dsroq/routing.hpp"
#include "dsroq/scheduler.hpp"
#include "dsroq/traffic.hpp"

// Slot-stepped packet simulator over a region topology. Each slot runs four
// phases in a fixed order: packet arrivals, transit deliveries, per-link
// scheduling, then buffer overflow drops. A packet transmitted at slot t
// reaches the next region at t + 1 + ceil(propagation / slot). Queues and
// virtual backlogs are keyed by region arc, so they survive handover and
// reallocation; in-flight packets finish on the route version they started.

namespace dsroq {

struct FlowSpec {
  AggregatedFlow flow;
  QosTargets targets;
};

struct FlowAllocation {
  int flow_id = 0;
  RouteCandidate route;
  double bandwidth_pps = 0.0;
};

struct SimConfig {
  double slot_s = 1e-3;
  int buffer_capacity = 1024;
  int window_slots = 500;
  long long audit_interval = 1000;
  SchedulingPolicy policy = SchedulingPolicy::Lyapunov;
  ScoreBounds score_bounds;
  uint64_t arrival_seed = 0;

  void validate() const {
    if (!(slot_s > 0.0)) throw std::invalid_argument("SimConfig: slot_s must be > 0");
    if (buffer_capacity < 1) throw std::invalid_argument("SimConfig: buffer_capacity must be >= 1");
    if (window_slots < 2) throw std::invalid_argument("SimConfig: window_slots must be > 1");
    if (audit_interval < 1) throw std::invalid_argument("SimConfig: audit_interval must be >= 1");
  }
};

struct FlowTotals {
  long long generated = 0;
  long long delivered = 0;
  long long dropped = 0;
  long long latency_slot_sum = 0;  // delivered packets only
};

class NetworkSim {
 public:
  NetworkSim(RegionTopology topo, std::vector<FlowSpec> flows, SimConfig cfg)
      : topo_(std::move(topo)), cfg_(cfg) {
    cfg_.validate();
    if (flows.empty()) throw std::invalid_argument("NetworkSim: no flows");
    std::sort(flows.begin(), flows.end(),
              [](const FlowSpec& a, const FlowSpec& b) { return a.flow.id < b.flow.id; });
    for (size_t i = 0; i + 1 < flows.size(); ++i) {
      if (flows[i].flow.id == flows[i + 1].flow.id) {
        throw std::invalid_argument("NetworkSim: duplicate flow id");
      }
    }
    for (auto& spec : flows) {
      spec.targets.validate();
      FlowRuntime rt;
      rt.spec = spec;
      rt.arrivals.stream_seed = derive_seed(cfg_.arrival_seed, static_cast<uint64_t>(spec.flow.id));
      flows_.push_back(std::move(rt));
    }
    links_.resize(topo_.arcs.size());
    for (auto& link : links_) link.buffer_capacity = cfg_.buffer_capacity;
    totals_.resize(flows_.size());
    window_acc_.resize(flows_.size());
  }

  // Installs routes and bandwidths for the coming interval, recomputing
  // per-hop budgets against the current arc delays and the utilization each
  // arc carries under this allocation. Flows keep their history: packets
  // already in the network finish on the version they carry, and a link entry
  // created by an old version persists with zero allocation so leftover
  // packets still drain.
  void apply_allocation(const std::vector<FlowAllocation>& alloc) {
    std::vector<double> utilization(topo_.arcs.size(), 0.0);
    for (const auto& a : alloc) {
      for (int arc : a.route.arc_ids) {
        if (arc < 0 || arc >= static_cast<int>(topo_.arcs.size())) {
          throw std::invalid_argument("apply_allocation: arc id out of range");
        }
        utilization[static_cast<size_t>(arc)] += a.bandwidth_pps / topo_.link_capacity_pps;
      }
    }
    for (const auto& a : alloc) {
      FlowRuntime& rt = runtime_for(a.flow_id);
      if (a.route.hop_count() < 1) throw std::invalid_argument("apply_allocation: empty route");
      if (a.bandwidth_pps < 0.0) throw std::invalid_argument("apply_allocation: negative bandwidth");

      RouteAssignment version;
      version.arc_ids = a.route.arc_ids;
      version.bandwidth_pps = a.bandwidth_pps;
      version.prop_slots.reserve(version.arc_ids.size());
      std::vector<double> route_utilization;
      route_utilization.reserve(version.arc_ids.size());
      for (int arc : version.arc_ids) {
        version.prop_slots.push_back(prop_slots(topo_.arc_delay_s[static_cast<size_t>(arc)]));
        route_utilization.push_back(utilization[static_cast<size_t>(arc)]);
      }
      version.bounds = compute_per_hop_bounds(a.route, rt.spec.targets, cfg_.slot_s,
                                              route_utilization,
                                              /*throw_if_infeasible=*/false);
      rt.versions.push_back(std::move(version));
      rt.arrivals.mean_rate_pps = a.bandwidth_pps;

      // Entries on arcs leaving the new route stop accumulating backlog.
      for (auto& link : links_) {
        if (LinkFlowState* entry = link.find(a.flow_id)) entry->allocated_pps = 0.0;
      }
      const RouteAssignment& v = rt.versions.back();
      for (size_t h = 0; h < v.arc_ids.size(); ++h) {
        LinkFlowState& entry = ensure_entry(v.arc_ids[static_cast<size_t>(h)], rt);
        entry.allocated_pps = v.bandwidth_pps;
        entry.bounds = v.bounds[h];
      }
    }
  }

  // Updates arc propagation delays at a topology snapshot boundary. Applies
  // to route versions installed afterwards; packets in transit keep the
  // arrival slot computed when they were transmitted.
  void set_arc_delays(const std::vector<double>& arc_delay_s) {
    if (arc_delay_s.size() != topo_.arc_delay_s.size()) {
      throw std::invalid_argument("set_arc_delays: arc count mismatch");
    }
    topo_.arc_delay_s = arc_delay_s;
  }

  void step() {
    // Phase 1: new packets enter the first hop of the flow's current route.
    for (size_t i = 0; i < flows_.size(); ++i) {
      FlowRuntime& rt = flows_[i];
      if (rt.versions.empty()) continue;
      const int n = sample_arrivals(rt.arrivals, slot_);
      if (n == 0) continue;
      const int version = static_cast<int>(rt.versions.size()) - 1;
      const int arc = rt.versions.back().arc_ids.front();
      LinkFlowState& entry = ensure_entry(arc, rt);
      for (int p = 0; p < n; ++p) {
        entry.queue.push_back({slot_, slot_, version, 0});
      }
      totals_[i].generated += n;
      window_acc_[i].generated += n;
    }

    // Phase 2: transit packets land, either at the destination or in the
    // next hop's queue.
    if (auto it = transit_.find(slot_); it != transit_.end()) {
      for (const TransitPacket& t : it->second) {
        FlowRuntime& rt = runtime_for(t.flow_id);
        const RouteAssignment& v = rt.versions[static_cast<size_t>(t.route_version)];
        if (t.hop_index == static_cast<int>(v.arc_ids.size())) {
          const size_t i = index_for(t.flow_id);
          totals_[i].delivered += 1;
          totals_[i].latency_slot_sum += slot_ - t.generation_slot;
          window_acc_[i].delivered += 1;
          window_acc_[i].latency_slot_sum += slot_ - t.generation_slot;
        } else {
          LinkFlowState& entry = ensure_entry(v.arc_ids[static_cast<size_t>(t.hop_index)], rt);
          entry.queue.push_back({t.generation_slot, slot_, t.route_version, t.hop_index});
        }
      }
      transit_.erase(it);
    }

    // Phase 3: each link serves at most one packet.
    for (size_t a = 0; a < links_.size(); ++a) {
      auto sent = schedule_slot(links_[a], cfg_.policy, slot_, cfg_.score_bounds);
      if (!sent) continue;
      const FlowRuntime& rt = runtime_for(sent->flow_id);
      const RouteAssignment& v = rt.versions[static_cast<size_t>(sent->packet.route_version)];
      const int hop = sent->packet.hop_index;
      const long long arrive = slot_ + 1 + v.prop_slots[static_cast<size_t>(hop)];
      transit_[arrive].push_back(
          {sent->flow_id, sent->packet.route_version, hop + 1, sent->packet.generation_slot});
    }

    // Phase 4: buffers shed overflow round-robin across flows.
    for (auto& link : links_) {
      for (const DroppedPacket& d : drop_overflow(link)) {
        const size_t i = index_for(d.flow_id);
        totals_[i].dropped += 1;
        window_acc_[i].dropped += 1;
      }
    }

    ++slot_;
    if (slot_ % cfg_.window_slots == 0) flush_window();
    if (slot_ % cfg_.audit_interval == 0) audit();
  }

  void run(long long slots) {
    if (slots < 0) throw std::invalid_argument("run: negative slot count");
    for (long long s = 0; s < slots; ++s) step();
  }

  // Packets currently inside the network (queued or in transit), per flow,
  // ordered by flow id.
  std::vector<long long> in_flight() const {
    std::vector<long long> counts(flows_.size(), 0);
    for (const auto& link : links_) {
      for (const auto& entry : link.flows) {
        counts[index_for(entry.flow_id)] += static_cast<long long>(entry.queue.size());
      }
    }
    for (const auto& [slot, packets] : transit_) {
      for (const TransitPacket& t : packets) counts[index_for(t.flow_id)] += 1;
    }
    return counts;
  }

  // Packet conservation: every generated packet is delivered, dropped, or
  // still inside the network. Counter drift means a bookkeeping bug, so it
  // stops the run rather than skewing results.
  void audit() const {
    const std::vector<long long> inside = in_flight();
    for (size_t i = 0; i < flows_.size(); ++i) {
      const FlowTotals& t = totals_[i];
      if (t.generated != t.delivered + t.dropped + inside[i]) {
        throw std::logic_error("packet conservation violated for flow " +
                               std::to_string(flows_[i].spec.flow.id));
      }
    }
  }

  long long slot() const { return slot_; }
  const std::vector<FlowTotals>& totals() const { return totals_; }
  const std::vector<WindowMetrics>& windows() const { return windows_; }
  std::vector<FlowSpec> flow_specs() const {
    std::vector<FlowSpec> specs;
    specs.reserve(flows_.size());
    for (const auto& rt : flows_) specs.push_back(rt.spec);
    return specs;
  }
  const LinkState& link(int arc_id) const { return links_.at(static_cast<size_t>(arc_id)); }

 private:
  struct RouteAssignment {
    std::vector<int> arc_ids;
    std::vector<int> prop_slots;
    std::vector<PerHopBounds> bounds;
    double bandwidth_pps = 0.0;
  };

  struct FlowRuntime {
    FlowSpec spec;
    ArrivalProcess arrivals;
    std::vector<RouteAssignment> versions;
  };

  struct TransitPacket {
    int flow_id = 0;
    int route_version = 0;
    int hop_index = 0;
    long long generation_slot = 0;
  };

  struct WindowAccumulator {
    long long generated = 0;
    long long delivered = 0;
    long long dropped = 0;
    long long latency_slot_sum = 0;
  };

  int prop_slots(double delay_s) const {
    return static_cast<int>(std::ceil(delay_s / cfg_.slot_s - 1e-9));
  }

  size_t index_for(int flow_id) const {
    auto it = std::lower_bound(flows_.begin(), flows_.end(), flow_id,
                               [](const FlowRuntime& rt, int id) { return rt.spec.flow.id < id; });
    if (it == flows_.end() || it->spec.flow.id != flow_id) {
      throw std::invalid_argument("unknown flow id " + std::to_string(flow_id));
    }
    return static_cast<size_t>(it - flows_.begin());
  }

  FlowRuntime& runtime_for(int flow_id) { return flows_[index_for(flow_id)]; }
  const FlowRuntime& runtime_for(int flow_id) const { return flows_[index_for(flow_id)]; }

  // Creates the flow's entry on the arc if absent, keeping flows sorted by
  // id so scheduling tie-breaks are order-independent.
  LinkFlowState& ensure_entry(int arc_id, const FlowRuntime& rt) {
    LinkState& link = links_[static_cast<size_t>(arc_id)];
    if (LinkFlowState* entry = link.find(rt.spec.flow.id)) return *entry;
    LinkFlowState entry;
    entry.flow_id = rt.spec.flow.id;
    entry.weight = rt.spec.flow.weight;
    entry.zeta_delta = rt.spec.targets.zeta[0];
    entry.zeta_tau = rt.spec.targets.zeta[1];
    entry.traffic_class = rt.spec.flow.traffic_class;
    auto pos = std::lower_bound(
        link.flows.begin(), link.flows.end(), entry.flow_id,
        [](const LinkFlowState& f, int id) { return f.flow_id < id; });
    return *link.flows.insert(pos, std::move(entry));
  }

  void flush_window() {
    WindowMetrics wm;
    wm.window_slots = cfg_.window_slots;
    wm.per_flow.resize(flows_.size());
    for (size_t i = 0; i < flows_.size(); ++i) {
      const WindowAccumulator& acc = window_acc_[i];
      FlowWindowMetrics& m = wm.per_flow[i];
      m.generated = acc.generated;
      m.delivered = acc.delivered;
      m.dropped = acc.dropped;
      m.avg_latency_s = acc.delivered > 0
                            ? static_cast<double>(acc.latency_slot_sum) / acc.delivered * cfg_.slot_s
                            : 0.0;
      m.throughput_pps = static_cast<double>(acc.delivered) / cfg_.window_slots;
      m.drop_rate = acc.generated > 0 ? static_cast<double>(acc.dropped) / acc.generated : 0.0;
      window_acc_[i] = {};
    }
    windows_.push_back(std::move(wm));
  }

  RegionTopology topo_;
  SimConfig cfg_;
  std::vector<FlowRuntime> flows_;  // sorted by flow id
  std::vector<LinkState> links_;    // indexed by arc id
  std::map<long long, std::vector<TransitPacket>> transit_;
  std::vector<FlowTotals> totals_;
  std::vector<WindowAccumulator> window_acc_;
  std::vector<WindowMetrics> windows_;
  long long slot_ = 0;
};

}  // namespace dsroq
