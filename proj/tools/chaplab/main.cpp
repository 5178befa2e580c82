#include <CLI11.hpp>
#include <iostream>

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chaplab: integrate and cross-check nonholonomic sphere models"};
  app.require_subcommand(1);

  chaplab::Options options;
  std::uint64_t seed = 0;
  app.add_option("--seed", seed,
                 "Seed for random initial states (overrides initial.seed)");
  app.add_option("--out", options.out_dir, "Output directory")
      ->capture_default_str();
  app.add_flag("--quiet", options.quiet,
               "Suppress the summary on standard output");

  std::vector<std::string> run_paths;
  auto* run =
      app.add_subcommand("run", "Integrate scenarios and run their checks");
  run->add_option("config", run_paths,
                  "Scenario config files (several run concurrently)")
      ->required()
      ->check(CLI::ExistingFile);

  std::vector<std::string> compare_paths;
  auto* compare = app.add_subcommand(
      "compare", "Run two flows and compare them through a mapping");
  compare
      ->add_option("config", compare_paths,
                   "Compare config files (several run concurrently)")
      ->required()
      ->check(CLI::ExistingFile);

  bool list = false;
  auto* checks = app.add_subcommand("checks", "Describe the available checks");
  checks->add_flag("--list", list, "List every check and mapping")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : chaplab::kConfigError;
  }
  if (app.count("--seed")) options.seed = seed;

  if (*checks) {
    std::cout << chaplab::check_catalog();
    return chaplab::kPass;
  }
  const bool is_run = static_cast<bool>(*run);
  return chaplab::run_batch(
      is_run ? chaplab::Verb::run : chaplab::Verb::compare,
      is_run ? run_paths : compare_paths, options, std::cout, std::cerr);
}
