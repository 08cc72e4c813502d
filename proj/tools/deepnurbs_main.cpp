#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "deepnurbs/config.hpp"
#include "deepnurbs/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Deep NURBS variational Poisson solver"};
  app.require_subcommand(1);

  std::string config_path, dir_a, dir_b;

  CLI::App* run = app.add_subcommand("run", "train per config and emit artifacts");
  run->add_option("config", config_path, "config file")->required();

  CLI::App* cmp = app.add_subcommand("compare", "compare two completed run directories");
  cmp->add_option("dir_a", dir_a, "first run directory")->required();
  cmp->add_option("dir_b", dir_b, "second run directory")->required();

  CLI::App* val = app.add_subcommand("validate", "dry-run checks for a config");
  val->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return dn::run_experiment(dn::parse_config(config_path));
    if (cmp->parsed()) return dn::compare_runs(dir_a, dir_b);
    return dn::validate_run(dn::parse_config(config_path));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
