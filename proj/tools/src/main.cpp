#include <CLI11.hpp>

#include <iostream>

#include "bridgelab/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace bridgelab::cli;
  CLI::App app{"bridgelab: penalized least squares with bridge-type penalties"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string out_dir;
  bridgelab::Seed seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "experiment config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the master seed");
    sub->add_option("--threads", opts.threads, "worker threads, 0 = auto");
  };
  auto* estimate = app.add_subcommand("estimate", "single fit, JSON on stdout");
  auto* mc = app.add_subcommand("mc", "Monte Carlo campaign: replications.csv, tail.csv, summary.json");
  auto* check = app.add_subcommand("check", "design and penalty condition report");
  auto* limit = app.add_subcommand("limit", "limit-law parameters");
  for (auto* sub : {estimate, mc, check, limit}) add_common(sub);
  mc->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(config_error);
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) opts.seed = seed;
  }
  if (!out_dir.empty()) opts.out = out_dir;

  if (estimate->parsed()) return cmd_estimate(opts, std::cout, std::cerr);
  if (mc->parsed()) return cmd_mc(opts, std::cout, std::cerr);
  if (check->parsed()) return cmd_check(opts, std::cout, std::cerr);
  return cmd_limit(opts, std::cout, std::cerr);
}
