#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsroq/config.hpp"
#include "dsroq/experiment.hpp"

// Result serialization. Every number is printed via shortest-round-trip
// formatting and nothing records wall-clock time, so reruns with the same
// config and seed produce byte-identical files.

namespace dsroq {

inline constexpr const char* kLibraryVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kTraceHeader =
    "episode,reward,constraint_violation,epsilon,reward_rolling_mean,violation_rolling_mean";
inline constexpr const char* kScoresHeader =
    "policy,ef_weight,iteration,snapshot,window,flow_id,class,omega_delta,omega_tau,omega_l,"
    "omega_total";
inline constexpr const char* kFairnessHeader = "policy,ef_weight,fairness_index,iteration";

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);  // binary keeps line endings stable
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

// Mean over the trailing `window` entries ending at index i (shorter at the
// start of the series).
inline double rolling_mean(const std::vector<double>& xs, size_t i, size_t window) {
  const size_t lo = i + 1 >= window ? i + 1 - window : 0;
  double sum = 0.0;
  for (size_t k = lo; k <= i; ++k) sum += xs[k];
  return sum / static_cast<double>(i - lo + 1);
}

// Linear-interpolation quantile on a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (sorted.size() == 1) return sorted.front();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

inline constexpr size_t kRollingWindow = 500;

inline void write_training_trace(const std::string& path, const std::vector<TraceRow>& rows) {
  std::vector<double> rewards, violations;
  rewards.reserve(rows.size());
  violations.reserve(rows.size());
  for (const auto& r : rows) {
    rewards.push_back(r.reward);
    violations.push_back(r.violation);
  }
  auto out = detail::open_out(path);
  out << kTraceHeader << '\n';
  for (size_t i = 0; i < rows.size(); ++i) {
    out << rows[i].episode << ',' << format_double(rows[i].reward) << ','
        << format_double(rows[i].violation) << ',' << format_double(rows[i].epsilon) << ','
        << format_double(detail::rolling_mean(rewards, i, kRollingWindow)) << ','
        << format_double(detail::rolling_mean(violations, i, kRollingWindow)) << '\n';
  }
}

inline void write_qos_scores(const std::string& path, const std::vector<ScoreRow>& rows) {
  auto out = detail::open_out(path);
  out << kScoresHeader << '\n';
  for (const auto& r : rows) {
    out << policy_name(r.policy) << ',' << format_double(r.ef_weight) << ',' << r.iteration << ','
        << r.snapshot << ',' << r.window << ',' << r.flow_id << ',' << class_name(r.traffic_class)
        << ',' << format_double(r.scores.omega_delta) << ',' << format_double(r.scores.omega_tau)
        << ',' << format_double(r.scores.omega_l) << ',' << format_double(r.scores.omega_total)
        << '\n';
  }
}

inline void write_fairness(const std::string& path, const std::vector<FairnessRow>& rows) {
  auto out = detail::open_out(path);
  out << kFairnessHeader << '\n';
  for (const auto& r : rows) {
    out << policy_name(r.policy) << ',' << format_double(r.ef_weight) << ','
        << format_double(r.fairness) << ',' << r.iteration << '\n';
  }
}

struct DistributionStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double outlier_fraction = 0.0;  // beyond 1.5 IQR from the quartiles
  size_t count = 0;
};

inline DistributionStats distribution_stats(std::vector<double> xs) {
  DistributionStats st;
  st.count = xs.size();
  if (xs.empty()) return st;
  std::sort(xs.begin(), xs.end());
  st.median = detail::quantile_sorted(xs, 0.5);
  st.q1 = detail::quantile_sorted(xs, 0.25);
  st.q3 = detail::quantile_sorted(xs, 0.75);
  const double iqr = st.q3 - st.q1;
  const double lo = st.q1 - 1.5 * iqr;
  const double hi = st.q3 + 1.5 * iqr;
  size_t outliers = 0;
  for (double x : xs) {
    if (x < lo || x > hi) ++outliers;
  }
  st.outlier_fraction = static_cast<double>(outliers) / static_cast<double>(xs.size());
  return st;
}

// Composite-score distribution per (policy, ef_weight, class) plus fairness
// aggregates per (policy, ef_weight), ordered deterministically.
inline nlohmann::json summarize(const ScenarioResult& result) {
  struct Key {
    std::string policy;
    double ef_weight;
    std::string cls;
    bool operator<(const Key& o) const {
      if (policy != o.policy) return policy < o.policy;
      if (ef_weight != o.ef_weight) return ef_weight < o.ef_weight;
      return cls < o.cls;
    }
  };
  std::map<Key, std::vector<double>> scores;
  for (const auto& r : result.scores) {
    scores[{policy_name(r.policy), r.ef_weight, class_name(r.traffic_class)}].push_back(
        r.scores.omega_total);
  }
  nlohmann::json score_stats = nlohmann::json::array();
  for (const auto& [key, xs] : scores) {
    const DistributionStats st = distribution_stats(xs);
    score_stats.push_back({{"policy", key.policy},
                           {"ef_weight", key.ef_weight},
                           {"class", key.cls},
                           {"median", st.median},
                           {"q1", st.q1},
                           {"q3", st.q3},
                           {"outlier_fraction", st.outlier_fraction},
                           {"count", st.count}});
  }

  struct FKey {
    std::string policy;
    double ef_weight;
    bool operator<(const FKey& o) const {
      if (policy != o.policy) return policy < o.policy;
      return ef_weight < o.ef_weight;
    }
  };
  std::map<FKey, std::vector<double>> fairness;
  for (const auto& r : result.fairness) {
    fairness[{policy_name(r.policy), r.ef_weight}].push_back(r.fairness);
  }
  nlohmann::json fairness_stats = nlohmann::json::array();
  for (const auto& [key, xs] : fairness) {
    double sum = 0.0, lo = xs.front(), hi = xs.front();
    for (double x : xs) {
      sum += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    fairness_stats.push_back({{"policy", key.policy},
                              {"ef_weight", key.ef_weight},
                              {"mean", sum / static_cast<double>(xs.size())},
                              {"min", lo},
                              {"max", hi},
                              {"count", xs.size()}});
  }
  return {{"score_stats", score_stats}, {"fairness_stats", fairness_stats}};
}

inline void write_summary(const std::string& path, const ScenarioResult& result) {
  auto out = detail::open_out(path);
  out << summarize(result).dump(2) << '\n';
}

// Output location does not affect results, so it is excluded from the hash.
inline uint64_t config_hash(const ScenarioConfig& cfg) {
  nlohmann::json j = config_to_json(cfg);
  j.erase("output_dir");
  const std::string dump = j.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : dump) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline void write_manifest(const std::string& path, const ScenarioConfig& cfg) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  nlohmann::json manifest = {
      {"schema_version", kSchemaVersion},
      {"config_hash", hex},
      {"seed", cfg.seed},
      {"versions", {{"library", kLibraryVersion}}},
      {"csv_headers",
       {{"training_trace", kTraceHeader},
        {"qos_scores", kScoresHeader},
        {"fairness", kFairnessHeader}}},
      {"config", config_to_json(cfg)}};
  auto out = detail::open_out(path);
  out << manifest.dump(2) << '\n';
}

}  // namespace dsroq
