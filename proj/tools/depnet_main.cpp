#include <CLI11.hpp>
#include <iostream>

#include "depnet/experiment.hpp"

namespace {

void add_config_options(CLI::App* cmd, depnet::ExperimentConfig& config,
                        std::string& config_path, std::string& sampler) {
  cmd->add_option("--config", config_path,
                  "Config or manifest file (flat key=value lines)");
  cmd->add_option("--preset", config.preset, "model1 | model2 | custom");
  cmd->add_option("--width", config.width, "Hidden-layer width n_1..n_L");
  cmd->add_option("--depth", config.depth, "Number of hidden layers L");
  cmd->add_option("--sampler", sampler,
                  "prior | posterior | limit-prior | limit-posterior");
  cmd->add_option("--samples", config.samples, "Batch size S");
  cmd->add_option("--seed", config.seed, "Base RNG seed");
  cmd->add_option("--threads", config.threads,
                  "Worker threads (0 = DEPNET_THREADS env or all cores)");
  cmd->add_option("--delta", config.delta, "Acceptance clamp level");
  cmd->add_option("--mc-n", config.mc_n, "Acceptance-estimator replicas N");
  cmd->add_option("--max-proposals", config.max_proposals,
                  "Per-layer proposal budget");
  cmd->add_option("--limit-mc", config.limit_mc,
                  "Kernel-chain Monte Carlo samples M");
  cmd->add_option("--poisson-eps", config.poisson_eps,
                  "Poisson point-series truncation threshold");
  cmd->add_option("--data", config.data_path, "Dataset CSV path");
  cmd->add_option("--n0", config.n0, "Input dimension (custom preset)");
  cmd->add_option("--n-out", config.n_out, "Output dimension (custom preset)");
  cmd->add_option("--c-b", config.c_b, "Bias variance C_B (custom preset)");
  cmd->add_option("--c-w", config.c_w, "Weight variance C_W (custom preset)");
  cmd->add_option("--activation", config.activation, "relu | identity");
  cmd->add_option("--variance-model", config.variance_model,
                  "fixed | model1 | model2 (custom preset)");
  cmd->add_option("--out", config.out_dir, "Output directory");
}

depnet::ExperimentConfig resolve_config(const CLI::App* cmd,
                                        const depnet::ExperimentConfig& cli,
                                        const std::string& config_path,
                                        const std::string& sampler) {
  depnet::ExperimentConfig config;
  if (!config_path.empty()) config = depnet::ExperimentConfig::load(config_path);
  // Command-line values override file values; preset constants are
  // applied before width/sampler overrides so those remain tunable.
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (given("--preset")) config.preset = cli.preset;
  config.apply_preset();
  if (given("--width")) config.width = cli.width;
  if (given("--depth")) config.depth = cli.depth;
  if (!sampler.empty()) config.sampler = depnet::parse_sampler(sampler);
  if (given("--samples")) config.samples = cli.samples;
  if (given("--seed")) config.seed = cli.seed;
  if (given("--threads")) config.threads = cli.threads;
  if (given("--delta")) config.delta = cli.delta;
  if (given("--mc-n")) config.mc_n = cli.mc_n;
  if (given("--max-proposals")) config.max_proposals = cli.max_proposals;
  if (given("--limit-mc")) config.limit_mc = cli.limit_mc;
  if (given("--poisson-eps")) config.poisson_eps = cli.poisson_eps;
  if (given("--data")) config.data_path = cli.data_path;
  if (given("--n0")) config.n0 = cli.n0;
  if (given("--n-out")) config.n_out = cli.n_out;
  if (given("--c-b")) config.c_b = cli.c_b;
  if (given("--c-w")) config.c_w = cli.c_w;
  if (given("--activation")) config.activation = cli.activation;
  if (given("--variance-model")) config.variance_model = cli.variance_model;
  if (given("--out")) config.out_dir = cli.out_dir;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior sampling for Bayesian neural networks with "
               "dependent heavy-tailed weights"};
  app.require_subcommand(1);

  depnet::ExperimentConfig cli_run, cli_kernel;
  std::string run_config_path, run_sampler;
  std::string kernel_config_path, kernel_sampler, kernel_out = "kernel.csv";
  std::string compare_a, compare_b, compare_report = "report.csv";

  CLI::App* run = app.add_subcommand("run", "Run a sampling batch");
  add_config_options(run, cli_run, run_config_path, run_sampler);

  CLI::App* compare =
      app.add_subcommand("compare", "KS report between two sample batches");
  compare->add_option("batch_a", compare_a, "First samples.csv")->required();
  compare->add_option("batch_b", compare_b, "Second samples.csv")->required();
  compare->add_option("--report", compare_report, "Report CSV path");

  CLI::App* kernel =
      app.add_subcommand("kernel", "Emit one kernel-chain realization as CSV");
  add_config_options(kernel, cli_kernel, kernel_config_path, kernel_sampler);
  kernel->add_option("--kernel-out", kernel_out, "Kernel CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return depnet::run_experiment(
          resolve_config(run, cli_run, run_config_path, run_sampler));
    if (compare->parsed())
      return depnet::compare_batches(compare_a, compare_b, compare_report);
    if (kernel->parsed())
      return depnet::emit_kernel_chain(
          resolve_config(kernel, cli_kernel, kernel_config_path, kernel_sampler),
          kernel_out);
  } catch (const std::exception& e) {
    std::cerr << "depnet: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
