#include <CLI11.hpp>

#include "dsroq/cli.hpp"

// Command-line front end: train | compare | sweep-weights | validate-config.

namespace {

void add_common_flags(CLI::App* sub, dsroq::CliOptions& opt) {
  sub->add_option("--config", opt.config_path, "Scenario config JSON (defaults apply if omitted)")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", opt.out_dir, "Output directory (overrides config)");
  sub->add_option("--seed", opt.seed, "Master seed (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO constellation route/bandwidth optimizer and packet simulator"};
  app.require_subcommand(1);

  dsroq::CliOptions opt;

  auto* train = app.add_subcommand("train", "Run the allocation search and dump its trace");
  add_common_flags(train, opt);
  train->add_option("--episodes", opt.episodes, "Search episodes (overrides config)");

  auto* compare = app.add_subcommand("compare", "Evaluate policies on a shared scenario");
  add_common_flags(compare, opt);
  compare->add_option("--episodes", opt.episodes, "Search episodes (overrides config)");
  compare->add_option("--iterations", opt.iterations, "Independent repetitions");
  compare
      ->add_option("--policies", opt.policies,
                   "Subset of dsroq, dsroq_fifo, baseline (default: all)")
      ->delimiter(',');

  auto* sweep = app.add_subcommand("sweep-weights",
                                   "Evaluate trained allocations under varied class weights");
  add_common_flags(sweep, opt);
  sweep->add_option("--episodes", opt.episodes, "Search episodes (overrides config)");
  sweep->add_option("--iterations", opt.iterations, "Independent repetitions");

  auto* validate = app.add_subcommand("validate-config", "Parse a config and echo it normalized");
  add_common_flags(validate, opt);

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) return dsroq::cmd_train(opt);
  if (compare->parsed()) return dsroq::cmd_compare(opt);
  if (sweep->parsed()) return dsroq::cmd_sweep_weights(opt);
  return dsroq::cmd_validate_config(opt);
}
