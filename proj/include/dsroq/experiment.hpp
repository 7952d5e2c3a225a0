#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsroq/allocator.hpp"
#include "dsroq/config.hpp"
#include "dsroq/constellation.hpp"
#include "dsroq/qos.hpp"
#include "dsroq/simulator.hpp"
#include "dsroq/traffic.hpp"

// Scenario orchestration: builds the snapshot sequence, generates flows per
// iteration, trains one allocation per (iteration, snapshot), and evaluates
// the requested policies on identical arrival streams. One simulator spans a
// whole iteration, so queues and virtual backlogs migrate across handovers.

namespace dsroq {

// dsroq: searched allocation + queue-aware scheduling. dsroq_fifo: the same
// allocation with per-link FIFO. baseline: sequential greedy allocation with
// strict class priority.
enum class PolicyKind { Dsroq, DsroqFifo, Baseline };

inline const char* policy_name(PolicyKind p) {
  switch (p) {
    case PolicyKind::Dsroq: return "dsroq";
    case PolicyKind::DsroqFifo: return "dsroq_fifo";
    case PolicyKind::Baseline: return "baseline";
  }
  return "dsroq";
}

inline PolicyKind parse_policy(const std::string& name) {
  if (name == "dsroq") return PolicyKind::Dsroq;
  if (name == "dsroq_fifo") return PolicyKind::DsroqFifo;
  if (name == "baseline") return PolicyKind::Baseline;
  throw std::invalid_argument("unknown policy '" + name + "' (dsroq, dsroq_fifo, baseline)");
}

struct TraceRow {
  int episode = 0;
  double reward = 0.0;
  double violation = 0.0;
  double epsilon = 0.0;
};

struct ScoreRow {
  PolicyKind policy = PolicyKind::Dsroq;
  double ef_weight = 0.0;
  int iteration = 0;
  int snapshot = 0;
  int window = 0;  // within the snapshot
  int flow_id = 0;
  TrafficClass traffic_class = TrafficClass::BE;
  FlowScores scores;
};

struct FairnessRow {
  PolicyKind policy = PolicyKind::Dsroq;
  double ef_weight = 0.0;
  double fairness = 0.0;
  int iteration = 0;
};

struct ScenarioResult {
  std::vector<TraceRow> training_trace;  // iteration 0, snapshot 0
  std::vector<ScoreRow> scores;
  std::vector<FairnessRow> fairness;
};

// Geometry shared by every iteration: fixed region arcs, per-snapshot delays.
struct ScenarioContext {
  RegionTopology topo;
  std::vector<std::vector<double>> snapshot_delays;
  int region_count = 0;
};

inline ScenarioContext build_context(const ScenarioConfig& cfg) {
  const auto& cc = cfg.constellation;
  const SnapshotSequence seq = snapshot_sequence(cc.shell, cc.subgrid_rows, cc.subgrid_cols,
                                                 cc.anchor, cc.duration_s, cc.snapshot_interval_s);
  ScenarioContext ctx;
  ctx.topo = region_topology(seq.snapshots.front(), cc.subgrid_rows, cc.subgrid_cols);
  ctx.topo.link_capacity_pps = 1.0;
  for (const auto& snap : seq.snapshots) {
    ctx.snapshot_delays.push_back(region_arc_delays(snap, ctx.topo));
  }
  ctx.region_count = ctx.topo.region_count();
  return ctx;
}

inline std::vector<FlowSpec> build_flows(const ScenarioConfig& cfg, int region_count,
                                         uint64_t flow_seed) {
  const auto records = generate_flows(cfg.traffic.flow_count, cfg.traffic.mix, region_count,
                                      flow_seed);
  const auto aggregated = aggregate(records, cfg.traffic.profiles, cfg.traffic.class_weights);
  std::vector<FlowSpec> specs;
  specs.reserve(aggregated.size());
  for (const auto& f : aggregated) {
    specs.push_back({f, cfg.traffic.profiles[static_cast<size_t>(f.app)].targets});
  }
  return specs;
}

// Copy of the flow set with the expedited class rescheduled at a different
// weight. Only scheduling and the objective weighting see flow weights, so
// this is how trained allocations are re-evaluated in the weight sweep.
inline std::vector<FlowSpec> override_ef_weight(std::vector<FlowSpec> flows, double ef_weight) {
  if (!(ef_weight > 0.0)) throw std::invalid_argument("override_ef_weight: weight must be > 0");
  for (auto& spec : flows) {
    if (spec.flow.traffic_class == TrafficClass::EF) spec.flow.weight = ef_weight;
  }
  return flows;
}

namespace detail {

inline RegionTopology topo_at(const ScenarioContext& ctx, int snapshot) {
  RegionTopology topo = ctx.topo;
  topo.arc_delay_s = ctx.snapshot_delays[static_cast<size_t>(snapshot)];
  return topo;
}

inline SimConfig sim_config(const ScenarioConfig& cfg, SchedulingPolicy policy,
                            uint64_t arrival_seed) {
  SimConfig scfg;
  scfg.slot_s = cfg.simulator.slot_s();
  scfg.buffer_capacity = cfg.scheduler.buffer_capacity;
  scfg.window_slots = cfg.simulator.window_slots;
  scfg.audit_interval = cfg.simulator.audit_interval;
  scfg.policy = policy;
  scfg.score_bounds = cfg.qos;
  scfg.arrival_seed = arrival_seed;
  return scfg;
}

inline uint64_t stream(uint64_t seed, std::string_view tag, uint64_t a, uint64_t b = 0) {
  return derive_seed(derive_seed(derive_seed(seed, tag), a), b);
}

}  // namespace detail

inline AllocationProblem make_snapshot_problem(const ScenarioConfig& cfg,
                                               const ScenarioContext& ctx, int snapshot,
                                               const std::vector<FlowSpec>& flows,
                                               uint64_t train_arrival_seed) {
  const SimConfig eval_cfg =
      detail::sim_config(cfg, SchedulingPolicy::Lyapunov, train_arrival_seed);
  return make_problem(detail::topo_at(ctx, snapshot), flows, cfg.allocator.route_candidates,
                      cfg.allocator.bandwidth_levels, eval_cfg, cfg.allocator.lambda);
}

// Allocations for every snapshot of one iteration: the searched configuration
// (optionally warm-started from the previous snapshot's best) and the greedy
// baseline, plus the episode trace of the first snapshot's training run.
struct IterationPlan {
  std::vector<std::vector<FlowAllocation>> searched;  // per snapshot
  std::vector<std::vector<FlowAllocation>> greedy;
  std::vector<TraceRow> first_snapshot_trace;
};

inline IterationPlan plan_iteration(const ScenarioConfig& cfg, const ScenarioContext& ctx,
                                    const std::vector<FlowSpec>& flows, int iteration) {
  IterationPlan plan;
  std::vector<int> prev_best;
  const int snapshots = static_cast<int>(ctx.snapshot_delays.size());
  for (int k = 0; k < snapshots; ++k) {
    const uint64_t train_arrivals =
        detail::stream(cfg.seed, "train-arrivals", static_cast<uint64_t>(iteration),
                       static_cast<uint64_t>(k));
    const AllocationProblem problem = make_snapshot_problem(cfg, ctx, k, flows, train_arrivals);
    const uint64_t mcts_seed = detail::stream(cfg.seed, "mcts", static_cast<uint64_t>(iteration),
                                              static_cast<uint64_t>(k));
    const std::vector<int>* warm =
        cfg.allocator.warm_start && !prev_best.empty() ? &prev_best : nullptr;
    TrainResult trained = train(problem, cfg.allocator.episodes, cfg.allocator.mcts, mcts_seed, warm);
    if (k == 0) {
      plan.first_snapshot_trace.reserve(trained.trace.size());
      for (const auto& e : trained.trace) {
        plan.first_snapshot_trace.push_back({e.episode, e.reward, e.cost, e.epsilon});
      }
    }
    prev_best = trained.best_actions;
    plan.searched.push_back(std::move(trained.best_allocation));
    plan.greedy.push_back(baseline_sequential(problem));
  }
  return plan;
}

// Runs one policy over all snapshots in a single simulator and scores every
// window. Returns the rows plus the fairness index over per-flow mean scores.
inline void evaluate_policy(const ScenarioConfig& cfg, const ScenarioContext& ctx,
                            const std::vector<FlowSpec>& flows,
                            const std::vector<std::vector<FlowAllocation>>& alloc_per_snapshot,
                            SchedulingPolicy sched, PolicyKind label, double ef_weight,
                            int iteration, uint64_t arrival_seed, ScenarioResult& out) {
  NetworkSim sim(ctx.topo, flows, detail::sim_config(cfg, sched, arrival_seed));
  const int snapshots = static_cast<int>(ctx.snapshot_delays.size());
  const int windows = cfg.simulator.windows_per_snapshot;
  for (int k = 0; k < snapshots; ++k) {
    sim.set_arc_delays(ctx.snapshot_delays[static_cast<size_t>(k)]);
    sim.apply_allocation(alloc_per_snapshot[static_cast<size_t>(k)]);
    sim.run(static_cast<long long>(windows) * cfg.simulator.window_slots);
  }
  sim.audit();

  std::vector<double> score_sum(flows.size(), 0.0);
  const auto& all_windows = sim.windows();
  for (size_t w = 0; w < all_windows.size(); ++w) {
    const int snapshot = static_cast<int>(w) / windows;
    const int window_in_snapshot = static_cast<int>(w) % windows;
    for (size_t i = 0; i < flows.size(); ++i) {
      const FlowScores s =
          score_flow_window(all_windows[w].per_flow[i], flows[i].targets, cfg.qos);
      score_sum[i] += s.omega_total;
      out.scores.push_back({label, ef_weight, iteration, snapshot, window_in_snapshot,
                            flows[i].flow.id, flows[i].flow.traffic_class, s});
    }
  }

  std::vector<double> mean_scores(flows.size());
  for (size_t i = 0; i < flows.size(); ++i) {
    mean_scores[i] = score_sum[i] / static_cast<double>(all_windows.size());
  }
  out.fairness.push_back({label, ef_weight, fairness_index(mean_scores, cfg.qos), iteration});
}

inline uint64_t flow_seed_for_iteration(const ScenarioConfig& cfg, int iteration) {
  const uint64_t base = derive_seed(cfg.seed, "flows");
  return cfg.traffic.resample_flows ? derive_seed(base, static_cast<uint64_t>(iteration)) : base;
}

// Policy comparison: per iteration, one training pass feeds both searched
// variants while the baseline allocates greedily; all policies then see the
// same arrival stream.
inline ScenarioResult run_compare(const ScenarioConfig& cfg, const std::vector<PolicyKind>& policies,
                                  int iterations) {
  if (policies.empty()) throw std::invalid_argument("run_compare: no policies requested");
  if (iterations < 1) throw std::invalid_argument("run_compare: iterations must be >= 1");
  const ScenarioContext ctx = build_context(cfg);
  ScenarioResult result;
  for (int it = 0; it < iterations; ++it) {
    const auto flows = build_flows(cfg, ctx.region_count, flow_seed_for_iteration(cfg, it));
    const IterationPlan plan = plan_iteration(cfg, ctx, flows, it);
    if (it == 0) result.training_trace = plan.first_snapshot_trace;
    const uint64_t arrivals = detail::stream(cfg.seed, "arrivals", static_cast<uint64_t>(it));
    for (PolicyKind p : policies) {
      switch (p) {
        case PolicyKind::Dsroq:
          evaluate_policy(cfg, ctx, flows, plan.searched, SchedulingPolicy::Lyapunov, p,
                          cfg.traffic.class_weights.ef, it, arrivals, result);
          break;
        case PolicyKind::DsroqFifo:
          evaluate_policy(cfg, ctx, flows, plan.searched, SchedulingPolicy::Fifo, p,
                          cfg.traffic.class_weights.ef, it, arrivals, result);
          break;
        case PolicyKind::Baseline:
          evaluate_policy(cfg, ctx, flows, plan.greedy, SchedulingPolicy::StrictPriority, p,
                          cfg.traffic.class_weights.ef, it, arrivals, result);
          break;
      }
    }
  }
  return result;
}

// Training curve only: first iteration's flow set, first snapshot.
inline ScenarioResult run_train(const ScenarioConfig& cfg) {
  const ScenarioContext ctx = build_context(cfg);
  const auto flows = build_flows(cfg, ctx.region_count, flow_seed_for_iteration(cfg, 0));
  const uint64_t train_arrivals = detail::stream(cfg.seed, "train-arrivals", 0, 0);
  const AllocationProblem problem = make_snapshot_problem(cfg, ctx, 0, flows, train_arrivals);
  const uint64_t mcts_seed = detail::stream(cfg.seed, "mcts", 0, 0);
  const TrainResult trained = train(problem, cfg.allocator.episodes, cfg.allocator.mcts, mcts_seed);
  ScenarioResult result;
  result.training_trace.reserve(trained.trace.size());
  for (const auto& e : trained.trace) {
    result.training_trace.push_back({e.episode, e.reward, e.cost, e.epsilon});
  }
  return result;
}

// Weight sweep: allocations are trained once per iteration at the configured
// class weights, then re-evaluated with each test weight applied to the
// expedited class during scheduling.
inline ScenarioResult run_sweep(const ScenarioConfig& cfg, const std::vector<double>& ef_weights,
                                int iterations) {
  if (ef_weights.empty()) throw std::invalid_argument("run_sweep: ef_weights must be nonempty");
  if (iterations < 1) throw std::invalid_argument("run_sweep: iterations must be >= 1");
  const ScenarioContext ctx = build_context(cfg);
  ScenarioResult result;
  for (int it = 0; it < iterations; ++it) {
    const auto flows = build_flows(cfg, ctx.region_count, flow_seed_for_iteration(cfg, it));
    const IterationPlan plan = plan_iteration(cfg, ctx, flows, it);
    if (it == 0) result.training_trace = plan.first_snapshot_trace;
    const uint64_t arrivals = detail::stream(cfg.seed, "arrivals", static_cast<uint64_t>(it));
    for (double w : ef_weights) {
      evaluate_policy(cfg, ctx, override_ef_weight(flows, w), plan.searched,
                      SchedulingPolicy::Lyapunov, PolicyKind::Dsroq, w, it, arrivals, result);
    }
  }
  return result;
}

}  // namespace dsroq
