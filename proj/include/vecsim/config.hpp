#pragma once

#include <string>
#include <vector>

#include "vecsim/env.hpp"
#include "vecsim/objective.hpp"
#include "vecsim/policies.hpp"
#include "vecsim/sac.hpp"

namespace vecsim::config {

struct RunConfig {
  std::vector<std::string> policies{"lysac", "eaeo", "greedy",
                                    "pso",   "hgra", "hgga"};
  std::vector<double> v_list{0.0, 50.0, 100.0, 200.0};
  std::vector<double> arrival_axis{5.0, 10.0, 20.0, 30.0, 40.0, 50.0};
  std::uint64_t master_seed = 1;
  int n_seeds = 1;
  int repetitions = 50;
  int smoothing_window = 50;
  std::string out_dir = "out";
  int workers = 1;
};

struct ExperimentConfig {
  env::SystemConfig environment;
  objective::ObjectiveConfig objective;
  sac::SacConfig sac;
  policies::PsoConfig pso;
  policies::GibbsConfig gibbs;
  RunConfig run;
};

// Thrown for parse failures and constraint violations; the message names the
// offending `section.key` and the violated constraint.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig default_config();

// Loads JSON from `path` on top of the defaults; unknown keys are rejected.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// Built-in override profiles; "desk" scales training to minutes
// (episodes=300, slots=300, repetitions=5). Unknown profile names throw.
void apply_profile(ExperimentConfig& cfg, const std::string& name);

// Canonical JSON text of the fully resolved config (defaults applied); this
// is what gets echoed into run directories.
std::string to_json(const ExperimentConfig& cfg);

}  // namespace vecsim::config
