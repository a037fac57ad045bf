// Named, config-driven experiments wiring samplers, operators, packing, and
// certified bounds into reproducible CSV artifacts plus a JSON run manifest.
#pragma once

#include <string>
#include <vector>

#include "gibbsids/config.hpp"

namespace gibbsids {

struct ExperimentSpec {
  std::string name;
  std::string description;
  std::vector<std::string> required;  // keys beyond experiment/seed
  std::vector<std::string> optional;
};

// stable catalog of runnable experiment kinds
const std::vector<ExperimentSpec>& experiment_catalog();
const ExperimentSpec* find_experiment(const std::string& name);

// full validation: known experiment, key whitelist, mandatory seed
void validate_config(const ExperimentConfig& config);

struct RunResult {
  int exit_code = 0;  // 0 success, 2 when a certification check fails
  std::vector<std::string> files;  // artifact file names inside out_dir
  std::string summary;             // human-readable PASS/FAIL block
};

// Runs one experiment, writing `<kind>__<confighash>*.csv` plus
// `<kind>__<confighash>__manifest.json` into out_dir. Partial outputs are
// removed when the run throws. `jobs` is validated and recorded; every
// aggregation is order-independent, so the worker count never changes
// numeric results.
RunResult run_experiment(const ExperimentConfig& config,
                         const std::string& out_dir, int jobs = 1);

}  // namespace gibbsids
