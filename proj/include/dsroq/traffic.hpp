#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsroq/qos.hpp"
#include "dsroq/rng.hpp"

// Application profiles, flow generation, aggregation, SLA weights, and
// Poisson packet arrivals.

namespace dsroq {

enum class App : int { VC = 0, LS = 1, VoD = 2, FT = 3 };
inline constexpr int kAppCount = 4;
inline constexpr std::array<const char*, kAppCount> kAppNames = {"VC", "LS", "VoD", "FT"};

enum class TrafficClass : int { EF = 0, AF = 1, BE = 2 };
inline constexpr std::array<const char*, 3> kClassNames = {"EF", "AF", "BE"};

inline const char* app_name(App a) { return kAppNames[static_cast<size_t>(a)]; }
inline const char* class_name(TrafficClass c) { return kClassNames[static_cast<size_t>(c)]; }

struct AppProfile {
  App app = App::VC;
  TrafficClass traffic_class = TrafficClass::EF;
  QosTargets targets;

  void validate() const { targets.validate(); }
};

// SLA weights per traffic class, config-overridable.
struct ClassWeights {
  double ef = 20.0;
  double af = 2.0;
  double be = 1.0;

  double of(TrafficClass c) const {
    switch (c) {
      case TrafficClass::EF: return ef;
      case TrafficClass::AF: return af;
      case TrafficClass::BE: return be;
    }
    return be;
  }

  void validate() const {
    if (!(ef > 0 && af > 0 && be > 0)) {
      throw std::invalid_argument("ClassWeights: weights must be positive");
    }
  }
};

inline double class_weight(TrafficClass c, const ClassWeights& weights = {}) {
  return weights.of(c);
}

struct FlowRecord {
  int id = 0;
  int source_region = 0;
  int dest_region = 0;
  App app = App::VC;
};

// Unit of allocation and scheduling: all flows sharing (source, destination,
// application type), with constituent count beta.
struct AggregatedFlow {
  int id = 0;
  int source_region = 0;
  int dest_region = 0;
  App app = App::VC;
  TrafficClass traffic_class = TrafficClass::EF;
  double weight = 1.0;
  int beta = 1;
};

// Largest-remainder split of `count` over the app mix; sums exactly to count.
inline std::array<int, kAppCount> mix_counts(int count, const std::array<double, kAppCount>& mix) {
  double total = 0.0;
  for (double m : mix) {
    if (m < 0.0) throw std::invalid_argument("mix fractions must be nonnegative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mix fractions must sum to 1");

  std::array<int, kAppCount> counts{};
  std::array<std::pair<double, int>, kAppCount> remainders{};
  int assigned = 0;
  for (int a = 0; a < kAppCount; ++a) {
    const double exact = count * mix[static_cast<size_t>(a)];
    counts[static_cast<size_t>(a)] = static_cast<int>(std::floor(exact + 1e-9));
    assigned += counts[static_cast<size_t>(a)];
    remainders[static_cast<size_t>(a)] = {exact - counts[static_cast<size_t>(a)], a};
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (int i = 0; i < count - assigned; ++i) {
    counts[static_cast<size_t>(remainders[static_cast<size_t>(i % kAppCount)].second)]++;
  }
  return counts;
}

// Flows with endpoints drawn uniformly over ordered distinct region pairs.
// Deterministic given the seed.
inline std::vector<FlowRecord> generate_flows(int count, const std::array<double, kAppCount>& mix,
                                              int region_count, uint64_t seed) {
  if (count < 1) throw std::invalid_argument("generate_flows: count must be >= 1");
  if (region_count < 2) throw std::invalid_argument("generate_flows: need at least two regions");
  const auto counts = mix_counts(count, mix);

  std::vector<FlowRecord> flows;
  flows.reserve(static_cast<size_t>(count));
  RandomStream rng(derive_seed(seed, "flow-endpoints"));
  int next_id = 0;
  for (int a = 0; a < kAppCount; ++a) {
    for (int i = 0; i < counts[static_cast<size_t>(a)]; ++i) {
      const int src = static_cast<int>(rng.next_below(static_cast<uint32_t>(region_count)));
      int dst = static_cast<int>(rng.next_below(static_cast<uint32_t>(region_count - 1)));
      if (dst >= src) ++dst;
      flows.push_back({next_id++, src, dst, static_cast<App>(a)});
    }
  }
  return flows;
}

// Groups flows by (source, destination, app); each input flow lands in
// exactly one aggregate. Aggregate ids are assigned in sorted triple order.
inline std::vector<AggregatedFlow> aggregate(const std::vector<FlowRecord>& flows,
                                             const std::array<AppProfile, kAppCount>& profiles,
                                             const ClassWeights& weights = {}) {
  std::vector<FlowRecord> sorted = flows;
  std::sort(sorted.begin(), sorted.end(), [](const FlowRecord& a, const FlowRecord& b) {
    if (a.source_region != b.source_region) return a.source_region < b.source_region;
    if (a.dest_region != b.dest_region) return a.dest_region < b.dest_region;
    return static_cast<int>(a.app) < static_cast<int>(b.app);
  });

  std::vector<AggregatedFlow> out;
  for (size_t i = 0; i < sorted.size();) {
    size_t j = i;
    while (j < sorted.size() && sorted[j].source_region == sorted[i].source_region &&
           sorted[j].dest_region == sorted[i].dest_region && sorted[j].app == sorted[i].app) {
      ++j;
    }
    const auto& profile = profiles[static_cast<size_t>(sorted[i].app)];
    AggregatedFlow agg;
    agg.id = static_cast<int>(out.size());
    agg.source_region = sorted[i].source_region;
    agg.dest_region = sorted[i].dest_region;
    agg.app = sorted[i].app;
    agg.traffic_class = profile.traffic_class;
    agg.weight = class_weight(profile.traffic_class, weights);
    agg.beta = static_cast<int>(j - i);
    out.push_back(agg);
    i = j;
  }
  return out;
}

// Poisson arrivals with mean equal to the allocated bandwidth. The draw is a
// pure function of (stream seed, slot index), so sampling order never matters.
struct ArrivalProcess {
  double mean_rate_pps = 0.0;
  uint64_t stream_seed = 0;
};

inline int sample_arrivals(const ArrivalProcess& proc, long long slot_index) {
  if (proc.mean_rate_pps < 0.0) throw std::invalid_argument("sample_arrivals: negative mean rate");
  if (proc.mean_rate_pps == 0.0) return 0;
  RandomStream rng(derive_seed(proc.stream_seed, static_cast<uint64_t>(slot_index)));
  return rng.poisson(proc.mean_rate_pps);
}

// Mbps <-> packets-per-slot conversion. With link rate R and packet size L,
// one slot is L/R seconds, so x Mbps corresponds to x/R packets per slot.
inline double mbps_to_packets_per_slot(double mbps, double link_rate_mbps) {
  if (!(link_rate_mbps > 0.0)) throw std::invalid_argument("link rate must be positive");
  return mbps / link_rate_mbps;
}

inline double packets_per_slot_to_mbps(double pps, double link_rate_mbps) {
  if (!(link_rate_mbps > 0.0)) throw std::invalid_argument("link rate must be positive");
  return pps * link_rate_mbps;
}

inline double slot_seconds(double packet_size_bytes, double link_rate_mbps) {
  if (!(packet_size_bytes > 0.0) || !(link_rate_mbps > 0.0)) {
    throw std::invalid_argument("packet size and link rate must be positive");
  }
  return packet_size_bytes * 8.0 / (link_rate_mbps * 1e6);
}

}  // namespace dsroq
