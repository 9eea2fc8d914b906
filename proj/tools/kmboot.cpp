#include <string>

#include "CLI11.hpp"
#include "kmboot/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Right-censored survival estimation with bootstrap confidence bands"};
  app.require_subcommand(1);

  kmboot::cli::RunConfig config;
  std::string t2_value;
  std::uint64_t seed_value = 0;

  const auto add_io = [&](CLI::App* cmd, bool scenario_input) {
    cmd->add_option("--input,-i", config.input_path,
                    scenario_input ? "scenario file" : "input CSV (time,status)")
        ->required();
    cmd->add_option("--output,-o", config.output_path, "output path (default stdout)");
    cmd->add_option("--threads", config.threads,
                    "worker cap (0 = KMBOOT_THREADS or hardware)");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    auto* opt = cmd->add_option("--seed", seed_value, "RNG seed (generated and reported if absent)");
    cmd->callback([&config, opt, &seed_value] {
      if (opt->count() > 0) config.seed = seed_value;
    });
  };

  auto* fit = app.add_subcommand("fit", "fit survival step functions");
  add_io(fit, false);
  fit->add_option("--format", config.format, "json or csv");

  auto* band = app.add_subcommand("band", "simultaneous confidence band");
  add_io(band, false);
  band->add_option("--format", config.format, "json or csv");
  band->add_option("--kind", config.band_kind, "mrl or lorenz");
  band->add_option("--alpha", config.alpha, "significance level");
  band->add_option("--B", config.replicates, "bootstrap replicates");
  add_seed(band);
  band->add_option("--t1", config.t1, "band start (mrl)");
  auto* t2_opt = band->add_option(
      "--t2", t2_value, "band end (mrl); a number, or 'auto' to pick it from the data");
  band->add_option("--t2-threshold", config.t2_threshold,
                   "survival level for the automatic t2 choice");
  band->add_option("--grid-resolution", config.grid_points, "output grid points (lorenz)");

  auto* gini = app.add_subcommand("gini", "bootstrap confidence interval for the Gini index");
  add_io(gini, false);
  gini->add_option("--format", config.format, "json or csv");
  gini->add_option("--alpha", config.alpha, "significance level");
  gini->add_option("--B", config.replicates, "bootstrap replicates");
  add_seed(gini);

  auto* cond = app.add_subcommand("check-conditions", "censoring condition diagnostics");
  add_io(cond, false);
  cond->add_option("--format", config.format, "json or csv");

  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo scenario file");
  add_io(simulate, true);
  add_seed(simulate);

  CLI11_PARSE(app, argc, argv);

  config.command = app.get_subcommands().front()->get_name();
  if (config.command == "band" && t2_opt->count() > 0 && t2_value != "auto") {
    try {
      config.t2 = std::stod(t2_value);
    } catch (const std::exception&) {
      std::fprintf(stderr, "--t2 expects a number or 'auto'\n");
      return 2;
    }
  }
  return kmboot::cli::run(config);
}
