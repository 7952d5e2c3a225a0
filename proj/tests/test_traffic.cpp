#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "dsroq/config.hpp"
#include "dsroq/traffic.hpp"

using namespace dsroq;

namespace {
const std::array<double, kAppCount> kDefaultMix = {0.2, 0.2, 0.2, 0.4};
}

TEST_CASE("mix split is exact for a divisible count") {
  const auto counts = mix_counts(10000, kDefaultMix);
  CHECK(counts[0] == 2000);
  CHECK(counts[1] == 2000);
  CHECK(counts[2] == 2000);
  CHECK(counts[3] == 4000);
}

TEST_CASE("mix split always sums to the requested count") {
  for (int count : {1, 3, 7, 97, 1001}) {
    const auto counts = mix_counts(count, kDefaultMix);
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == count);
  }
  const auto skewed = mix_counts(10, {0.05, 0.05, 0.05, 0.85});
  CHECK(skewed[0] + skewed[1] + skewed[2] + skewed[3] == 10);
}

TEST_CASE("mix validation rejects malformed fractions") {
  CHECK_THROWS_AS(mix_counts(10, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(mix_counts(10, {1.2, -0.2, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("generated flows respect the mix, the region range, and the seed") {
  const auto flows = generate_flows(1000, kDefaultMix, 16, 42);
  REQUIRE(flows.size() == 1000);
  std::array<int, kAppCount> per_app{};
  for (const auto& f : flows) {
    per_app[static_cast<size_t>(f.app)]++;
    REQUIRE(f.source_region >= 0);
    REQUIRE(f.source_region < 16);
    REQUIRE(f.dest_region >= 0);
    REQUIRE(f.dest_region < 16);
    REQUIRE(f.source_region != f.dest_region);
  }
  CHECK(per_app[0] == 200);
  CHECK(per_app[1] == 200);
  CHECK(per_app[2] == 200);
  CHECK(per_app[3] == 400);
  for (size_t i = 0; i < flows.size(); ++i) REQUIRE(flows[i].id == static_cast<int>(i));

  const auto again = generate_flows(1000, kDefaultMix, 16, 42);
  for (size_t i = 0; i < flows.size(); ++i) {
    REQUIRE(flows[i].source_region == again[i].source_region);
    REQUIRE(flows[i].dest_region == again[i].dest_region);
    REQUIRE(flows[i].app == again[i].app);
  }
  const auto other = generate_flows(1000, kDefaultMix, 16, 43);
  bool any_difference = false;
  for (size_t i = 0; i < flows.size(); ++i) {
    any_difference = any_difference || flows[i].source_region != other[i].source_region ||
                     flows[i].dest_region != other[i].dest_region;
  }
  CHECK(any_difference);
}

TEST_CASE("flow generation rejects degenerate inputs") {
  CHECK_THROWS_AS(generate_flows(0, kDefaultMix, 16, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_flows(10, kDefaultMix, 1, 1), std::invalid_argument);
}

TEST_CASE("aggregation groups by endpoint pair and application") {
  const auto profiles = TrafficConfig::default_profiles();
  std::vector<FlowRecord> flows;
  for (int i = 0; i < 3; ++i) flows.push_back({i, 2, 5, App::VC});
  for (int i = 3; i < 5; ++i) flows.push_back({i, 2, 5, App::FT});
  const auto agg = aggregate(flows, profiles);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].app == App::VC);
  CHECK(agg[0].beta == 3);
  CHECK(agg[0].traffic_class == TrafficClass::EF);
  CHECK(agg[0].weight == 20.0);
  CHECK(agg[1].app == App::FT);
  CHECK(agg[1].beta == 2);
  CHECK(agg[1].traffic_class == TrafficClass::BE);
  CHECK(agg[1].weight == 1.0);
  CHECK(agg[0].id == 0);
  CHECK(agg[1].id == 1);
}

TEST_CASE("aggregate count is capped by region pairs times applications") {
  const auto profiles = TrafficConfig::default_profiles();
  const auto flows = generate_flows(5000, kDefaultMix, 16, 7);
  const auto agg = aggregate(flows, profiles);
  CHECK(agg.size() <= 16 * 15 * 4);  // 960 possible (src, dst, app) triples
  int total_beta = 0;
  std::set<std::tuple<int, int, App>> seen;
  for (const auto& a : agg) {
    total_beta += a.beta;
    REQUIRE(seen.insert({a.source_region, a.dest_region, a.app}).second);
  }
  CHECK(total_beta == 5000);
}

TEST_CASE("class weights default to 20/2/1 and accept overrides") {
  CHECK(class_weight(TrafficClass::EF) == 20.0);
  CHECK(class_weight(TrafficClass::AF) == 2.0);
  CHECK(class_weight(TrafficClass::BE) == 1.0);
  ClassWeights custom;
  custom.ef = 10.0;
  CHECK(class_weight(TrafficClass::EF, custom) == 10.0);
  ClassWeights bad;
  bad.af = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("arrival sampling is a pure function of seed and slot") {
  ArrivalProcess proc{0.7, 99};
  for (long long slot : {0LL, 1LL, 999999LL}) {
    CHECK(sample_arrivals(proc, slot) == sample_arrivals(proc, slot));
  }
  ArrivalProcess idle{0.0, 99};
  CHECK(sample_arrivals(idle, 5) == 0);
  ArrivalProcess bad{-0.1, 99};
  CHECK_THROWS_AS(sample_arrivals(bad, 0), std::invalid_argument);
}

TEST_CASE("arrival mean tracks the configured rate") {
  ArrivalProcess proc{0.3, 1234};
  long long total = 0;
  const long long slots = 1000000;
  for (long long s = 0; s < slots; ++s) total += sample_arrivals(proc, s);
  const double mean = static_cast<double>(total) / static_cast<double>(slots);
  CHECK(mean > 0.297);
  CHECK(mean < 0.303);
}

TEST_CASE("rate conversions follow the link rate") {
  CHECK(mbps_to_packets_per_slot(12.0, 12.0) == Catch::Approx(1.0));
  CHECK(mbps_to_packets_per_slot(3.0, 12.0) == Catch::Approx(0.25));
  CHECK(packets_per_slot_to_mbps(0.25, 12.0) == Catch::Approx(3.0));
  CHECK(slot_seconds(1500.0, 12.0) == Catch::Approx(1e-3).epsilon(1e-12));
  CHECK_THROWS_AS(mbps_to_packets_per_slot(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(slot_seconds(0.0, 12.0), std::invalid_argument);
}
