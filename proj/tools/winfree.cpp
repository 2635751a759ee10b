#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "winfree/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Winfree oscillators on the unit sphere: simulate, verify, sweep, equilibrium, plotdata"};
  app.require_subcommand(1);

  winfree::CommandOptions opts;
  std::string path;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;

  auto add = [&](const char* name, const char* help, bool with_kind = false) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("path", path, "config, sweep config, trajectory CSV or sweep JSON")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "override initial.seed");
    sub->add_option("--jobs", jobs, "worker threads for sweep")->check(CLI::PositiveNumber);
    if (with_kind) sub->add_option("--kind", opts.kind, "angles-vs-time | order-parameter | pairwise-log | phase-diagram")->required();
    return sub;
  };
  auto* simulate = add("simulate", "integrate one configuration and write trajectory and summary");
  auto* verify = add("verify", "run statement checks and write verdicts");
  auto* sweep = add("sweep", "run a parameter grid");
  auto* equilibrium = add("equilibrium", "solve for or classify equilibria");
  auto* plotdata = add("plotdata", "emit plain numeric columns for plotting", true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : winfree::kExitConfig;
  }

  auto* active = app.get_subcommands().front();
  if (active->count("--out")) opts.out_dir = out;
  if (active->count("--seed")) opts.seed = seed;
  if (active->count("--jobs")) opts.jobs = jobs;

  if (active == simulate) return winfree::cmd_simulate(path, opts, std::cerr);
  if (active == verify) return winfree::cmd_verify(path, opts, std::cerr);
  if (active == sweep) return winfree::cmd_sweep(path, opts, std::cerr);
  if (active == equilibrium) return winfree::cmd_equilibrium(path, opts, std::cerr);
  if (active == plotdata) return winfree::cmd_plotdata(path, opts, std::cerr);
  return winfree::kExitConfig;
}
