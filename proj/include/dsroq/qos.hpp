#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

// QoS scoring: clamped piecewise-linear metric-to-score maps, the composite
// per-flow score, the weighted network objective, and the QoE fairness index.

namespace dsroq {

struct ScoreBounds {
  double omega_max = 5.0;
  double omega_min = 1.0;
};

enum class ScoreOrientation { LowerIsBetter, HigherIsBetter };

// Maps a measured value into [omega_min, omega_max]. LowerIsBetter saturates
// at omega_max for value <= lo_bound and omega_min for value >= hi_bound;
// HigherIsBetter is mirrored. Linear in between.
inline double map_score(double value, double lo_bound, double hi_bound,
                        ScoreOrientation orientation, const ScoreBounds& bounds) {
  if (!(lo_bound < hi_bound)) {
    throw std::invalid_argument("map_score: lo_bound must be strictly below hi_bound");
  }
  double frac = (value - lo_bound) / (hi_bound - lo_bound);
  frac = std::clamp(frac, 0.0, 1.0);
  if (orientation == ScoreOrientation::LowerIsBetter) {
    return bounds.omega_max + frac * (bounds.omega_min - bounds.omega_max);
  }
  return bounds.omega_min + frac * (bounds.omega_max - bounds.omega_min);
}

// Weighted sum of the latency/throughput/drop scores. zeta must sum to 1.
inline double composite_score(double omega_delta, double omega_tau, double omega_l,
                              std::span<const double, 3> zeta) {
  const double sum = zeta[0] + zeta[1] + zeta[2];
  if (std::abs(sum - 1.0) > 1e-9 || zeta[0] < 0 || zeta[1] < 0 || zeta[2] < 0) {
    throw std::invalid_argument("composite_score: zeta must be nonnegative and sum to 1");
  }
  return zeta[0] * omega_delta + zeta[1] * omega_tau + zeta[2] * omega_l;
}

// Weighted network objective scaled to 1: sum(w_f * score_f) / (omega_max * sum(w_f)).
inline double objective(std::span<const double> weights, std::span<const double> scores,
                        const ScoreBounds& bounds) {
  if (weights.empty() || weights.size() != scores.size()) {
    throw std::invalid_argument("objective: needs a nonempty, aligned flow set");
  }
  double num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    num += weights[i] * scores[i];
    den += weights[i];
  }
  return num / (bounds.omega_max * den);
}

// QoE fairness index: F = 1 - 2*sigma / (omega_max - omega_min), with sigma
// the population standard deviation of the per-aggregated-flow scores.
inline double fairness_index(std::span<const double> scores, const ScoreBounds& bounds) {
  if (scores.empty()) {
    throw std::invalid_argument("fairness_index: empty score set");
  }
  double mean = 0.0;
  for (double s : scores) mean += s;
  mean /= static_cast<double>(scores.size());
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  var /= static_cast<double>(scores.size());
  return 1.0 - 2.0 * std::sqrt(var) / (bounds.omega_max - bounds.omega_min);
}

// Per-application QoS requirements and score weights.
struct QosTargets {
  double latency_min_s = 0.0;
  double latency_max_s = 0.0;
  double throughput_min_pps = 0.0;  // packets per slot
  double throughput_max_pps = 0.0;
  double drop_min = 0.0;
  double drop_max = 0.0;
  std::array<double, 3> zeta = {0.0, 0.0, 0.0};  // latency, throughput, drop weights

  void validate() const {
    if (!(latency_min_s < latency_max_s)) {
      throw std::invalid_argument("QosTargets: latency bounds must satisfy min < max");
    }
    if (!(throughput_min_pps < throughput_max_pps)) {
      throw std::invalid_argument("QosTargets: throughput bounds must satisfy min < max");
    }
    if (!(0.0 <= drop_min && drop_min < drop_max && drop_max <= 1.0)) {
      throw std::invalid_argument("QosTargets: drop bounds must satisfy 0 <= min < max <= 1");
    }
    const double z = zeta[0] + zeta[1] + zeta[2];
    if (zeta[0] < 0 || zeta[1] < 0 || zeta[2] < 0 || std::abs(z - 1.0) > 1e-9) {
      throw std::invalid_argument("QosTargets: zeta weights must be nonnegative and sum to 1");
    }
  }
};

// Per-flow measurements over one window.
struct FlowWindowMetrics {
  double avg_latency_s = 0.0;  // over packets delivered in the window
  double throughput_pps = 0.0;
  double drop_rate = 0.0;
  long long generated = 0;
  long long delivered = 0;
  long long dropped = 0;
};

struct WindowMetrics {
  int window_slots = 0;
  std::vector<FlowWindowMetrics> per_flow;
};

struct FlowScores {
  double omega_delta = 0.0;
  double omega_tau = 0.0;
  double omega_l = 0.0;
  double omega_total = 0.0;
};

// Scores one flow's window. A window with no delivered packets has an
// undefined average latency; it is scored omega_min rather than excluded so
// starvation cannot raise the objective.
inline FlowScores score_flow_window(const FlowWindowMetrics& m, const QosTargets& t,
                                    const ScoreBounds& bounds) {
  FlowScores s;
  if (m.delivered > 0) {
    s.omega_delta = map_score(m.avg_latency_s, t.latency_min_s, t.latency_max_s,
                              ScoreOrientation::LowerIsBetter, bounds);
  } else {
    s.omega_delta = bounds.omega_min;
  }
  s.omega_tau = map_score(m.throughput_pps, t.throughput_min_pps, t.throughput_max_pps,
                          ScoreOrientation::HigherIsBetter, bounds);
  s.omega_l = map_score(m.drop_rate, t.drop_min, t.drop_max,
                        ScoreOrientation::LowerIsBetter, bounds);
  s.omega_total = composite_score(s.omega_delta, s.omega_tau, s.omega_l,
                                  std::span<const double, 3>(t.zeta));
  return s;
}

}  // namespace dsroq
