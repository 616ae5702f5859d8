#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "windingkit/experiments.hpp"
#include "windingkit/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"windingkit: surface-current Biot-Savart toolkit (fields in the paper-unit "
               "1/(4 pi) convention, mu0 absorbed)"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int threads = 0;
  unsigned seed = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    cmd->add_option("--seed", seed, "random seed echoed into the manifest")
        ->each([&](const std::string&) { seed_set = true; });
  };

  auto* solenoid = app.add_subcommand("solenoid-check", "Ampere-law validation of the forward map");
  auto* sweepcmd = app.add_subcommand("sweep", "Tikhonov lambda sweep for a target field");
  auto* kernelcmd = app.add_subcommand("kernel", "construct and verify the kernel current");
  auto* densitycmd = app.add_subcommand("density", "linking vs non-linking plasma sweep pair");
  for (auto* c : {solenoid, sweepcmd, kernelcmd, densitycmd}) add_common(c);

  CLI11_PARSE(app, argc, argv);

  try {
    wk::thread_count() = threads;
    wk::ExperimentConfig cfg = wk::load_config(config_path);
    if (seed_set) cfg.seed = seed;
    if (solenoid->parsed()) return wk::cmd_solenoid_check(cfg, out_dir);
    if (sweepcmd->parsed()) return wk::cmd_sweep(cfg, out_dir);
    if (kernelcmd->parsed()) return wk::cmd_kernel(cfg, out_dir);
    if (densitycmd->parsed()) return wk::cmd_density(cfg, out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
