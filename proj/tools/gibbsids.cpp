// Command-line front end: run experiment configs, list the catalog, or
// validate a config without running it.
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "gibbsids/config.hpp"
#include "gibbsids/experiments.hpp"
#include "gibbsids/version.hpp"

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("GIBBSIDS_OUT");
  return env != nullptr && *env != '\0' ? env : ".";
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            int jobs, const std::string& seed_override) {
  gibbsids::ExperimentConfig config =
      gibbsids::ExperimentConfig::from_file(config_path);
  if (!seed_override.empty()) config.set("seed", seed_override);
  const gibbsids::RunResult result =
      gibbsids::run_experiment(config, out_dir, jobs);
  std::printf("experiment %s (%s)\n", config.experiment().c_str(),
              config.hash_hex().c_str());
  std::fputs(result.summary.c_str(), stdout);
  for (const auto& file : result.files)
    std::printf("wrote %s/%s\n", out_dir.c_str(), file.c_str());
  return result.exit_code;
}

int cmd_list() {
  for (const auto& spec : gibbsids::experiment_catalog()) {
    std::printf("%-16s %s\n", spec.name.c_str(), spec.description.c_str());
    std::string keys;
    for (const auto& key : spec.required) keys += " " + key;
    std::printf("%-16s required:%s\n", "", keys.c_str());
    if (!spec.optional.empty()) {
      keys.clear();
      for (const auto& key : spec.optional) keys += " " + key;
      std::printf("%-16s optional:%s\n", "", keys.c_str());
    }
  }
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const gibbsids::ExperimentConfig config =
      gibbsids::ExperimentConfig::from_file(config_path);
  gibbsids::validate_config(config);
  std::printf("OK %s %s\n", config.experiment().c_str(),
              config.hash_hex().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs point process spectral toolkit"};
  app.set_version_flag("--version", std::string(gibbsids::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = default_out_dir();
  std::string seed_override;
  int jobs = 1;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "worker count");
  run->add_option("--seed", seed_override, "override the config seed");

  CLI::App* list = app.add_subcommand("list", "list the experiment catalog");

  CLI::App* validate =
      app.add_subcommand("validate", "validate a config without running it");
  validate->add_option("config", config_path, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, jobs, seed_override);
    if (list->parsed()) return cmd_list();
    if (validate->parsed()) return cmd_validate(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
