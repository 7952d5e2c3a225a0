#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsroq/allocator.hpp"
#include "dsroq/constellation.hpp"
#include "dsroq/qos.hpp"
#include "dsroq/scheduler.hpp"
#include "dsroq/simulator.hpp"
#include "dsroq/traffic.hpp"

// Scenario configuration: one JSON file drives every module. Parsing is
// strict: unknown keys anywhere are an error, so typos fail fast instead of
// silently running defaults.

namespace dsroq {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstellationConfig {
  ShellParams shell;
  int subgrid_rows = 4;
  int subgrid_cols = 4;
  SubgridAnchor anchor;
  double duration_s = 60.0;
  double snapshot_interval_s = 15.0;

  void validate() const {
    shell.validate();
    if (subgrid_rows < 1 || subgrid_cols < 1) {
      throw ConfigError("constellation: subgrid dimensions must be >= 1");
    }
    if (!(snapshot_interval_s > 0.0) || duration_s < snapshot_interval_s) {
      throw ConfigError("constellation: need snapshot_interval_s > 0 and duration_s >= interval");
    }
  }
};

struct TrafficConfig {
  int flow_count = 120;
  std::array<double, kAppCount> mix = {0.2, 0.2, 0.2, 0.4};
  std::array<AppProfile, kAppCount> profiles = default_profiles();
  ClassWeights class_weights;
  bool resample_flows = true;

  // Representative QoS bounds; editable, not ground truth. Latency and drop
  // ceilings relax from conversational video down to bulk transfer.
  static std::array<AppProfile, kAppCount> default_profiles() {
    std::array<AppProfile, kAppCount> p{};
    p[0] = {App::VC, TrafficClass::EF,
            {0.1, 0.3, 0.05, 0.25, 0.0, 0.02, {0.8, 0.1, 0.1}}};
    p[1] = {App::LS, TrafficClass::AF,
            {0.2, 1.0, 0.05, 0.3, 0.0, 0.05, {0.1, 0.45, 0.45}}};
    p[2] = {App::VoD, TrafficClass::AF,
            {0.3, 2.0, 0.05, 0.35, 0.0, 0.05, {0.1, 0.45, 0.45}}};
    p[3] = {App::FT, TrafficClass::BE,
            {0.5, 5.0, 0.02, 0.3, 0.0, 0.1, {0.1, 0.8, 0.1}}};
    return p;
  }

  void validate() const {
    if (flow_count < 1) throw ConfigError("traffic: flow_count must be >= 1");
    double total = 0.0;
    for (double m : mix) {
      if (m < 0.0) throw ConfigError("traffic: mix fractions must be nonnegative");
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("traffic: mix must sum to 1");
    for (int a = 0; a < kAppCount; ++a) {
      if (profiles[static_cast<size_t>(a)].app != static_cast<App>(a)) {
        throw ConfigError("traffic: profile order must be VC, LS, VoD, FT");
      }
      profiles[static_cast<size_t>(a)].validate();
    }
    class_weights.validate();
  }
};

struct AllocatorConfig {
  int route_candidates = 4;
  int bandwidth_levels = 5;
  int episodes = 300;
  double lambda = 1.0;
  MctsParams mcts;
  bool warm_start = false;

  void validate() const {
    if (route_candidates < 1) throw ConfigError("allocator: route_candidates must be >= 1");
    if (bandwidth_levels < 2) throw ConfigError("allocator: bandwidth_levels must be >= 2");
    if (episodes < 1) throw ConfigError("allocator: episodes must be >= 1");
    if (lambda < 0.0) throw ConfigError("allocator: lambda must be >= 0");
    if (!(mcts.eps0 > 0.0 && mcts.eps0 <= 1.0)) throw ConfigError("allocator: need 0 < epsilon0 <= 1");
    if (mcts.eps_min < 0.0 || mcts.eps_min >= 1.0) {
      throw ConfigError("allocator: need 0 <= epsilon_min < 1");
    }
    if (!(mcts.a0 > 0.0) || !(mcts.b0 > 0.0)) throw ConfigError("allocator: a0 and b0 must be > 0");
  }
};

struct SchedulerConfig {
  SchedulingPolicy policy = SchedulingPolicy::Lyapunov;
  int buffer_capacity = 1024;

  void validate() const {
    if (buffer_capacity < 1) throw ConfigError("scheduler: buffer_capacity must be >= 1");
  }
};

struct SimulatorConfig {
  double packet_size_bytes = 1500.0;
  double link_rate_mbps = 12.0;
  int window_slots = 500;
  int windows_per_snapshot = 5;
  long long audit_interval = 1000;

  double slot_s() const { return slot_seconds(packet_size_bytes, link_rate_mbps); }

  void validate() const {
    if (!(packet_size_bytes > 0.0) || !(link_rate_mbps > 0.0)) {
      throw ConfigError("simulator: packet_size_bytes and link_rate_mbps must be > 0");
    }
    if (window_slots < 2) throw ConfigError("simulator: window_slots must be > 1");
    if (windows_per_snapshot < 1) throw ConfigError("simulator: windows_per_snapshot must be >= 1");
    if (audit_interval < 1) throw ConfigError("simulator: audit_interval must be >= 1");
  }
};

struct SweepConfig {
  std::vector<double> ef_weights = {5.0, 10.0, 20.0};

  void validate() const {
    if (ef_weights.empty()) throw ConfigError("sweep: ef_weights must be nonempty");
    for (double w : ef_weights) {
      if (!(w > 0.0)) throw ConfigError("sweep: ef_weights must be positive");
    }
  }
};

struct ScenarioConfig {
  ConstellationConfig constellation;
  TrafficConfig traffic;
  ScoreBounds qos;
  AllocatorConfig allocator;
  SchedulerConfig scheduler;
  SimulatorConfig simulator;
  SweepConfig sweep;
  uint64_t seed = 1;
  std::string output_dir = "out";

  void validate() const {
    constellation.validate();
    traffic.validate();
    if (!(qos.omega_max > qos.omega_min)) throw ConfigError("qos: omega_max must exceed omega_min");
    allocator.validate();
    scheduler.validate();
    simulator.validate();
    sweep.validate();
    if (constellation.subgrid_rows * constellation.subgrid_cols < 2) {
      throw ConfigError("constellation: subgrid must contain at least 2 regions");
    }
  }
};

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                       const std::string& section) {
  if (!j.is_object()) throw ConfigError(section + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError(section + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for key '") + key + "'");
  }
}

template <typename T, size_t N>
std::array<T, N> get_array(const nlohmann::json& j, const char* key,
                           const std::array<T, N>& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != N) {
    throw ConfigError(std::string("key '") + key + "' must be an array of " + std::to_string(N));
  }
  std::array<T, N> out{};
  for (size_t i = 0; i < N; ++i) out[i] = v.at(i).get<T>();
  return out;
}

inline AppProfile parse_profile(const nlohmann::json& j, App app, const AppProfile& fallback) {
  check_keys(j, {"class", "zeta", "latency_bounds_s", "throughput_bounds_pps", "drop_bounds"},
             std::string("traffic.profiles.") + app_name(app));
  AppProfile p = fallback;
  p.app = app;
  if (j.contains("class")) {
    const std::string cls = j.at("class").get<std::string>();
    if (cls == "EF") p.traffic_class = TrafficClass::EF;
    else if (cls == "AF") p.traffic_class = TrafficClass::AF;
    else if (cls == "BE") p.traffic_class = TrafficClass::BE;
    else throw ConfigError("traffic profile class must be EF, AF, or BE");
  }
  const auto zeta = get_array<double, 3>(j, "zeta", p.targets.zeta);
  const auto lat = get_array<double, 2>(j, "latency_bounds_s",
                                        {p.targets.latency_min_s, p.targets.latency_max_s});
  const auto thr = get_array<double, 2>(j, "throughput_bounds_pps",
                                        {p.targets.throughput_min_pps, p.targets.throughput_max_pps});
  const auto drop = get_array<double, 2>(j, "drop_bounds", {p.targets.drop_min, p.targets.drop_max});
  p.targets.zeta = zeta;
  p.targets.latency_min_s = lat[0];
  p.targets.latency_max_s = lat[1];
  p.targets.throughput_min_pps = thr[0];
  p.targets.throughput_max_pps = thr[1];
  p.targets.drop_min = drop[0];
  p.targets.drop_max = drop[1];
  return p;
}

}  // namespace detail

inline ScenarioConfig parse_config(const nlohmann::json& j) {
  detail::check_keys(j,
                     {"seed", "output_dir", "constellation", "traffic", "qos", "allocator",
                      "scheduler", "simulator", "sweep"},
                     "config");
  ScenarioConfig cfg;
  cfg.seed = detail::get_or<uint64_t>(j, "seed", cfg.seed);
  cfg.output_dir = detail::get_or<std::string>(j, "output_dir", cfg.output_dir);

  if (j.contains("constellation")) {
    const auto& c = j.at("constellation");
    detail::check_keys(c,
                       {"plane_count", "sats_per_plane", "altitude_km", "inclination_deg",
                        "phasing_offset", "earth_radius_km", "subgrid_rows", "subgrid_cols",
                        "anchor_plane", "anchor_index", "duration_s", "snapshot_interval_s"},
                       "constellation");
    auto& cc = cfg.constellation;
    cc.shell.plane_count = detail::get_or(c, "plane_count", cc.shell.plane_count);
    cc.shell.sats_per_plane = detail::get_or(c, "sats_per_plane", cc.shell.sats_per_plane);
    cc.shell.altitude_km = detail::get_or(c, "altitude_km", cc.shell.altitude_km);
    cc.shell.inclination_deg = detail::get_or(c, "inclination_deg", cc.shell.inclination_deg);
    cc.shell.phasing_offset = detail::get_or(c, "phasing_offset", cc.shell.phasing_offset);
    cc.shell.earth_radius_km = detail::get_or(c, "earth_radius_km", cc.shell.earth_radius_km);
    cc.subgrid_rows = detail::get_or(c, "subgrid_rows", cc.subgrid_rows);
    cc.subgrid_cols = detail::get_or(c, "subgrid_cols", cc.subgrid_cols);
    cc.anchor.plane = detail::get_or(c, "anchor_plane", cc.anchor.plane);
    cc.anchor.index = detail::get_or(c, "anchor_index", cc.anchor.index);
    cc.duration_s = detail::get_or(c, "duration_s", cc.duration_s);
    cc.snapshot_interval_s = detail::get_or(c, "snapshot_interval_s", cc.snapshot_interval_s);
  }

  if (j.contains("traffic")) {
    const auto& t = j.at("traffic");
    detail::check_keys(t, {"flow_count", "mix", "profiles", "class_weights", "resample_flows"},
                       "traffic");
    auto& tc = cfg.traffic;
    tc.flow_count = detail::get_or(t, "flow_count", tc.flow_count);
    tc.mix = detail::get_array<double, 4>(t, "mix", tc.mix);
    tc.resample_flows = detail::get_or(t, "resample_flows", tc.resample_flows);
    if (t.contains("class_weights")) {
      const auto& w = t.at("class_weights");
      detail::check_keys(w, {"EF", "AF", "BE"}, "traffic.class_weights");
      tc.class_weights.ef = detail::get_or(w, "EF", tc.class_weights.ef);
      tc.class_weights.af = detail::get_or(w, "AF", tc.class_weights.af);
      tc.class_weights.be = detail::get_or(w, "BE", tc.class_weights.be);
    }
    if (t.contains("profiles")) {
      const auto& p = t.at("profiles");
      detail::check_keys(p, {"VC", "LS", "VoD", "FT"}, "traffic.profiles");
      for (int a = 0; a < kAppCount; ++a) {
        const char* name = kAppNames[static_cast<size_t>(a)];
        if (p.contains(name)) {
          tc.profiles[static_cast<size_t>(a)] = detail::parse_profile(
              p.at(name), static_cast<App>(a), tc.profiles[static_cast<size_t>(a)]);
        }
      }
    }
  }

  if (j.contains("qos")) {
    const auto& q = j.at("qos");
    detail::check_keys(q, {"omega_max", "omega_min"}, "qos");
    cfg.qos.omega_max = detail::get_or(q, "omega_max", cfg.qos.omega_max);
    cfg.qos.omega_min = detail::get_or(q, "omega_min", cfg.qos.omega_min);
  }

  if (j.contains("allocator")) {
    const auto& a = j.at("allocator");
    detail::check_keys(a,
                       {"route_candidates", "bandwidth_levels", "episodes", "lambda", "epsilon0",
                        "a0", "b0", "epsilon_min", "warm_start"},
                       "allocator");
    auto& ac = cfg.allocator;
    ac.route_candidates = detail::get_or(a, "route_candidates", ac.route_candidates);
    ac.bandwidth_levels = detail::get_or(a, "bandwidth_levels", ac.bandwidth_levels);
    ac.episodes = detail::get_or(a, "episodes", ac.episodes);
    ac.lambda = detail::get_or(a, "lambda", ac.lambda);
    ac.mcts.eps0 = detail::get_or(a, "epsilon0", ac.mcts.eps0);
    ac.mcts.a0 = detail::get_or(a, "a0", ac.mcts.a0);
    ac.mcts.b0 = detail::get_or(a, "b0", ac.mcts.b0);
    ac.mcts.eps_min = detail::get_or(a, "epsilon_min", ac.mcts.eps_min);
    ac.warm_start = detail::get_or(a, "warm_start", ac.warm_start);
  }

  if (j.contains("scheduler")) {
    const auto& s = j.at("scheduler");
    detail::check_keys(s, {"policy", "buffer_capacity"}, "scheduler");
    if (s.contains("policy")) {
      const std::string policy = s.at("policy").get<std::string>();
      if (policy == "lyapunov") cfg.scheduler.policy = SchedulingPolicy::Lyapunov;
      else if (policy == "fifo") cfg.scheduler.policy = SchedulingPolicy::Fifo;
      else if (policy == "strict_priority") cfg.scheduler.policy = SchedulingPolicy::StrictPriority;
      else throw ConfigError("scheduler: policy must be lyapunov, fifo, or strict_priority");
    }
    cfg.scheduler.buffer_capacity = detail::get_or(s, "buffer_capacity", cfg.scheduler.buffer_capacity);
  }

  if (j.contains("simulator")) {
    const auto& s = j.at("simulator");
    detail::check_keys(s,
                       {"packet_size_bytes", "link_rate_mbps", "window_slots",
                        "windows_per_snapshot", "audit_interval"},
                       "simulator");
    auto& sc = cfg.simulator;
    sc.packet_size_bytes = detail::get_or(s, "packet_size_bytes", sc.packet_size_bytes);
    sc.link_rate_mbps = detail::get_or(s, "link_rate_mbps", sc.link_rate_mbps);
    sc.window_slots = detail::get_or(s, "window_slots", sc.window_slots);
    sc.windows_per_snapshot = detail::get_or(s, "windows_per_snapshot", sc.windows_per_snapshot);
    sc.audit_interval = detail::get_or(s, "audit_interval", sc.audit_interval);
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    detail::check_keys(s, {"ef_weights"}, "sweep");
    cfg.sweep.ef_weights = detail::get_or(s, "ef_weights", cfg.sweep.ef_weights);
  }

  cfg.validate();
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

// Canonical serialization used for the manifest hash: object keys are sorted
// and all defaults are materialized, so two configs hash equal exactly when
// every effective setting matches.
inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  const auto& cc = cfg.constellation;
  j["constellation"] = {{"plane_count", cc.shell.plane_count},
                        {"sats_per_plane", cc.shell.sats_per_plane},
                        {"altitude_km", cc.shell.altitude_km},
                        {"inclination_deg", cc.shell.inclination_deg},
                        {"phasing_offset", cc.shell.phasing_offset},
                        {"earth_radius_km", cc.shell.earth_radius_km},
                        {"subgrid_rows", cc.subgrid_rows},
                        {"subgrid_cols", cc.subgrid_cols},
                        {"anchor_plane", cc.anchor.plane},
                        {"anchor_index", cc.anchor.index},
                        {"duration_s", cc.duration_s},
                        {"snapshot_interval_s", cc.snapshot_interval_s}};
  nlohmann::json profiles;
  for (int a = 0; a < kAppCount; ++a) {
    const AppProfile& p = cfg.traffic.profiles[static_cast<size_t>(a)];
    profiles[app_name(p.app)] = {
        {"class", class_name(p.traffic_class)},
        {"zeta", p.targets.zeta},
        {"latency_bounds_s", {p.targets.latency_min_s, p.targets.latency_max_s}},
        {"throughput_bounds_pps", {p.targets.throughput_min_pps, p.targets.throughput_max_pps}},
        {"drop_bounds", {p.targets.drop_min, p.targets.drop_max}}};
  }
  j["traffic"] = {{"flow_count", cfg.traffic.flow_count},
                  {"mix", cfg.traffic.mix},
                  {"profiles", profiles},
                  {"class_weights",
                   {{"EF", cfg.traffic.class_weights.ef},
                    {"AF", cfg.traffic.class_weights.af},
                    {"BE", cfg.traffic.class_weights.be}}},
                  {"resample_flows", cfg.traffic.resample_flows}};
  j["qos"] = {{"omega_max", cfg.qos.omega_max}, {"omega_min", cfg.qos.omega_min}};
  j["allocator"] = {{"route_candidates", cfg.allocator.route_candidates},
                    {"bandwidth_levels", cfg.allocator.bandwidth_levels},
                    {"episodes", cfg.allocator.episodes},
                    {"lambda", cfg.allocator.lambda},
                    {"epsilon0", cfg.allocator.mcts.eps0},
                    {"a0", cfg.allocator.mcts.a0},
                    {"b0", cfg.allocator.mcts.b0},
                    {"epsilon_min", cfg.allocator.mcts.eps_min},
                    {"warm_start", cfg.allocator.warm_start}};
  const char* policy = cfg.scheduler.policy == SchedulingPolicy::Lyapunov ? "lyapunov"
                       : cfg.scheduler.policy == SchedulingPolicy::Fifo   ? "fifo"
                                                                          : "strict_priority";
  j["scheduler"] = {{"policy", policy}, {"buffer_capacity", cfg.scheduler.buffer_capacity}};
  j["simulator"] = {{"packet_size_bytes", cfg.simulator.packet_size_bytes},
                    {"link_rate_mbps", cfg.simulator.link_rate_mbps},
                    {"window_slots", cfg.simulator.window_slots},
                    {"windows_per_snapshot", cfg.simulator.windows_per_snapshot},
                    {"audit_interval", cfg.simulator.audit_interval}};
  j["sweep"] = {{"ef_weights", cfg.sweep.ef_weights}};
  return j;
}

}  // namespace dsroq
