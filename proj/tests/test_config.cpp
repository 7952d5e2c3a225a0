#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "dsroq/config.hpp"

using namespace dsroq;
using nlohmann::json;

TEST_CASE("defaults validate and survive a serialization round trip") {
  ScenarioConfig cfg;
  REQUIRE_NOTHROW(cfg.validate());
  const json j = config_to_json(cfg);
  const ScenarioConfig back = parse_config(j);
  CHECK(config_to_json(back) == j);  // canonical form is a fixed point
}

TEST_CASE("empty document yields the defaults") {
  const ScenarioConfig cfg = parse_config(json::object());
  const ScenarioConfig defaults;
  CHECK(cfg.seed == defaults.seed);
  CHECK(cfg.traffic.flow_count == defaults.traffic.flow_count);
  CHECK(cfg.allocator.episodes == defaults.allocator.episodes);
  CHECK(config_to_json(cfg) == config_to_json(defaults));
}

TEST_CASE("unknown keys are rejected in every section") {
  CHECK_THROWS_AS(parse_config(json{{"sede", 3}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"constellation", {{"altitude", 550.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"traffic", {{"flows", 10}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"allocator", {{"epsilon", 0.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"scheduler", {{"buffer", 10}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"simulator", {{"slots", 10}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"sweep", {{"weights", json::array({1.0})}}}}), ConfigError);
  CHECK_THROWS_AS(
      parse_config(json{{"traffic", {{"profiles", {{"VC", {{"latency", json::array({0.1, 0.3})}}}}}}}}),
      ConfigError);
}

TEST_CASE("scalar overrides land in the right fields") {
  json j;
  j["seed"] = 42;
  j["output_dir"] = "results";
  j["constellation"]["subgrid_rows"] = 2;
  j["constellation"]["subgrid_cols"] = 3;
  j["traffic"]["flow_count"] = 50;
  j["traffic"]["class_weights"]["EF"] = 10.0;
  j["allocator"]["episodes"] = 77;
  j["allocator"]["epsilon_min"] = 0.0;
  j["scheduler"]["policy"] = "fifo";
  j["simulator"]["window_slots"] = 100;
  j["sweep"]["ef_weights"] = {5.0, 10.0};

  const ScenarioConfig cfg = parse_config(j);
  CHECK(cfg.seed == 42);
  CHECK(cfg.output_dir == "results");
  CHECK(cfg.constellation.subgrid_rows == 2);
  CHECK(cfg.constellation.subgrid_cols == 3);
  CHECK(cfg.traffic.flow_count == 50);
  CHECK(cfg.traffic.class_weights.ef == 10.0);
  CHECK(cfg.traffic.class_weights.af == 2.0);  // untouched default
  CHECK(cfg.allocator.episodes == 77);
  CHECK(cfg.allocator.mcts.eps_min == 0.0);
  CHECK(cfg.scheduler.policy == SchedulingPolicy::Fifo);
  CHECK(cfg.simulator.window_slots == 100);
  CHECK(cfg.sweep.ef_weights == std::vector<double>{5.0, 10.0});
}

TEST_CASE("traffic profiles parse class, weights, and bounds") {
  json j;
  j["traffic"]["profiles"]["VC"] = {{"class", "EF"},
                                    {"zeta", json::array({0.7, 0.2, 0.1})},
                                    {"latency_bounds_s", json::array({0.05, 0.2})},
                                    {"throughput_bounds_pps", json::array({0.1, 0.9})},
                                    {"drop_bounds", json::array({0.0, 0.01})}};
  const ScenarioConfig cfg = parse_config(j);
  const AppProfile& vc = cfg.traffic.profiles[0];
  CHECK(vc.traffic_class == TrafficClass::EF);
  CHECK(vc.targets.zeta == std::array<double, 3>{0.7, 0.2, 0.1});
  CHECK(vc.targets.latency_max_s == 0.2);
  CHECK(vc.targets.throughput_min_pps == 0.1);
  CHECK(vc.targets.drop_max == 0.01);
  // other profiles keep their defaults
  CHECK(cfg.traffic.profiles[3].traffic_class == TrafficClass::BE);

  json bad = j;
  bad["traffic"]["profiles"]["VC"]["class"] = "GOLD";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("scheduler policy names map to the enum") {
  for (auto [name, policy] : {std::pair<const char*, SchedulingPolicy>{"lyapunov", SchedulingPolicy::Lyapunov},
                              {"fifo", SchedulingPolicy::Fifo},
                              {"strict_priority", SchedulingPolicy::StrictPriority}}) {
    const ScenarioConfig cfg = parse_config(json{{"scheduler", {{"policy", name}}}});
    CHECK(cfg.scheduler.policy == policy);
  }
  CHECK_THROWS_AS(parse_config(json{{"scheduler", {{"policy", "wfq"}}}}), ConfigError);
}

TEST_CASE("validation rejects out-of-range sections") {
  CHECK_THROWS_AS(parse_config(json{{"traffic", {{"flow_count", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"traffic", {{"mix", json::array({0.5, 0.5, 0.5, 0.5})}}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"allocator", {{"bandwidth_levels", 1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"allocator", {{"lambda", -0.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"allocator", {{"epsilon0", 1.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"scheduler", {{"buffer_capacity", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"simulator", {{"window_slots", 1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"sweep", {{"ef_weights", json::array()}}}}), ConfigError);
  CHECK_THROWS_AS(
      parse_config(json{{"constellation", {{"subgrid_rows", 1}, {"subgrid_cols", 1}}}}),
      ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"qos", {{"omega_max", 1.0}, {"omega_min", 5.0}}}}),
                  ConfigError);
}

TEST_CASE("type mismatches carry the offending key") {
  try {
    parse_config(json{{"traffic", {{"flow_count", "many"}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("flow_count") != std::string::npos);
  }
}

TEST_CASE("slot length follows packet size and link rate") {
  SimulatorConfig sim;
  sim.packet_size_bytes = 1500;
  sim.link_rate_mbps = 12.0;
  CHECK(sim.slot_s() == Catch::Approx(1e-3).epsilon(1e-12));
  sim.link_rate_mbps = 24.0;
  CHECK(sim.slot_s() == Catch::Approx(0.5e-3).epsilon(1e-12));
}

TEST_CASE("load_config reads a file and propagates parse errors") {
  const std::string good_path = "/tmp/dsroq_test_good.json";
  {
    std::ofstream out(good_path);
    out << R"({"seed": 9, "allocator": {"episodes": 5}})";
  }
  const ScenarioConfig cfg = load_config(good_path);
  CHECK(cfg.seed == 9);
  CHECK(cfg.allocator.episodes == 5);

  const std::string bad_path = "/tmp/dsroq_test_bad.json";
  {
    std::ofstream out(bad_path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_config(bad_path), ConfigError);
  CHECK_THROWS_AS(load_config("/tmp/does_not_exist_dsroq.json"), ConfigError);
}
