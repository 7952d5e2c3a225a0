#pragma once

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dsroq/config.hpp"
#include "dsroq/experiment.hpp"
#include "dsroq/results.hpp"

// Command implementations behind the command-line tool. Each returns a
// process exit code and writes result files under the configured output
// directory; diagnostics go to stderr so stdout stays scriptable.

namespace dsroq {

struct CliOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<uint64_t> seed;
  std::optional<int> episodes;
  std::optional<int> iterations;
  std::vector<std::string> policies;  // empty means all
};

namespace detail {

inline ScenarioConfig load_with_overrides(const CliOptions& opt) {
  ScenarioConfig cfg = opt.config_path.empty() ? ScenarioConfig{} : load_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.out_dir) cfg.output_dir = *opt.out_dir;
  if (opt.episodes) cfg.allocator.episodes = *opt.episodes;
  cfg.validate();
  return cfg;
}

inline std::vector<PolicyKind> parse_policies(const std::vector<std::string>& names) {
  if (names.empty()) return {PolicyKind::Dsroq, PolicyKind::DsroqFifo, PolicyKind::Baseline};
  std::vector<PolicyKind> out;
  for (const auto& n : names) out.push_back(parse_policy(n));
  return out;
}

inline std::string join_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace detail

inline int cmd_validate_config(const CliOptions& opt) {
  try {
    const ScenarioConfig cfg = detail::load_with_overrides(opt);
    std::cout << config_to_json(cfg).dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
}

inline int cmd_train(const CliOptions& opt) {
  try {
    const ScenarioConfig cfg = detail::load_with_overrides(opt);
    std::cerr << "training allocation search (" << cfg.allocator.episodes << " episodes)\n";
    const ScenarioResult result = run_train(cfg);
    write_training_trace(detail::join_path(cfg.output_dir, "training_trace.csv"),
                         result.training_trace);
    write_manifest(detail::join_path(cfg.output_dir, "manifest.json"), cfg);
    std::cerr << "wrote " << cfg.output_dir << "/training_trace.csv ("
              << result.training_trace.size() << " episodes)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "train failed: " << e.what() << '\n';
    return 1;
  }
}

inline int cmd_compare(const CliOptions& opt) {
  try {
    const ScenarioConfig cfg = detail::load_with_overrides(opt);
    const std::vector<PolicyKind> policies = detail::parse_policies(opt.policies);
    const int iterations = opt.iterations.value_or(1);
    if (iterations < 1) throw ConfigError("iterations must be positive");
    std::cerr << "comparing " << policies.size() << " policies over " << iterations
              << " iteration(s)\n";
    const ScenarioResult result = run_compare(cfg, policies, iterations);
    write_training_trace(detail::join_path(cfg.output_dir, "training_trace.csv"),
                         result.training_trace);
    write_qos_scores(detail::join_path(cfg.output_dir, "qos_scores.csv"), result.scores);
    write_fairness(detail::join_path(cfg.output_dir, "fairness.csv"), result.fairness);
    write_summary(detail::join_path(cfg.output_dir, "summary.json"), result);
    write_manifest(detail::join_path(cfg.output_dir, "manifest.json"), cfg);
    std::cerr << "wrote result bundle to " << cfg.output_dir << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "compare failed: " << e.what() << '\n';
    return 1;
  }
}

inline int cmd_sweep_weights(const CliOptions& opt) {
  try {
    const ScenarioConfig cfg = detail::load_with_overrides(opt);
    const int iterations = opt.iterations.value_or(1);
    if (iterations < 1) throw ConfigError("iterations must be positive");
    std::cerr << "sweeping " << cfg.sweep.ef_weights.size() << " scheduling weights over "
              << iterations << " iteration(s)\n";
    const ScenarioResult result = run_sweep(cfg, cfg.sweep.ef_weights, iterations);
    write_qos_scores(detail::join_path(cfg.output_dir, "qos_scores.csv"), result.scores);
    write_fairness(detail::join_path(cfg.output_dir, "fairness.csv"), result.fairness);
    write_summary(detail::join_path(cfg.output_dir, "summary.json"), result);
    write_manifest(detail::join_path(cfg.output_dir, "manifest.json"), cfg);
    std::cerr << "wrote result bundle to " << cfg.output_dir << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "sweep-weights failed: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dsroq
