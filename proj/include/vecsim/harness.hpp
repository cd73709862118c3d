#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vecsim/config.hpp"
#include "vecsim/sac.hpp"

namespace vecsim::harness {

// splitmix64 step; the basis of all seed derivation.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Per-run seed derived from the master seed, a stream tag and two indices.
// Deliberately independent of V so baselines see identical trajectories
// across V values.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::uint64_t a, std::uint64_t b);

// Canonical CSV number formatting (%.10g) — byte-stable across runs.
std::string fmt(double v);

inline constexpr const char* kSchemaVersion = "vecsim-csv-1";
inline constexpr const char* kSlotHeader =
    "run_id,policy,v,seed,rep,slot,reward,comm_utility,comp_utility,"
    "total_utility,mean_backlog,omega_mmw,omega_dsrc,omega_cv2i,violation";
inline constexpr const char* kSummaryHeader =
    "run_id,policy,v,seed,reps,mean_reward,mean_comm_utility,"
    "mean_comp_utility,mean_total_utility,mean_backlog,final_backlog,"
    "violation_prob";
inline constexpr const char* kLearningHeader =
    "run_id,policy,v,seed,episode,avg_reward,smoothed_reward";

struct SummaryRow {
  std::string run_id;
  std::string policy;
  double v = 0.0;
  int seed_index = 0;
  int reps = 0;
  double mean_reward = 0.0;
  double mean_comm = 0.0;
  double mean_comp = 0.0;
  double mean_total = 0.0;
  double mean_backlog = 0.0;
  double final_backlog = 0.0;
  double violation_prob = 0.0;

  std::string to_csv() const;
};

// One policy x V x seed evaluation artifact.
struct EvalCell {
  std::string run_id;
  std::string csv_text;  // header + per-slot rows
  SummaryRow summary;
};

// Recomputes a summary from per-slot CSV text; used by both the writer and
// the audit so the two can only agree or disagree on real discrepancies.
SummaryRow summarize_slot_csv(const std::string& csv_text);

// Recomputes the smoothed column of a learning-curve CSV; returns the
// expected full text.
std::string recompute_learning_csv(const std::string& csv_text, int window);

// Runs `reps` repetitions of eval_slots slots for one policy at one V/seed.
// `agent` must be non-null for the lysac tag and is ignored otherwise.
EvalCell evaluate_cell(const config::ExperimentConfig& cfg,
                       const std::string& policy_tag, double v, int seed_index,
                       sac::SacAgent* agent);

// Learning-curve CSV text for one training run (uses cfg.run.smoothing_window).
std::string learning_csv(const config::ExperimentConfig& cfg,
                         const std::string& run_id, const std::string& policy,
                         double v, int seed_index,
                         const std::vector<double>& episode_rewards);

std::string checkpoint_name(double v, int seed_index);

// Writes config echo, schema version file, and the seed manifest into
// cfg.run.out_dir (creating it).
void write_run_preamble(const config::ExperimentConfig& cfg);

// Orchestration entry points. Throw config::ConfigError for config-level
// problems; return 0 on success, 2 on runtime failure.
int run_training(const config::ExperimentConfig& cfg);
int run_evaluation(const config::ExperimentConfig& cfg,
                   const std::vector<std::string>& policies);
// axis: "v" or "arrival_rate"
int run_sweep(const config::ExperimentConfig& cfg, const std::string& axis);
// Recomputes every summary/smoothed value from per-slot rows in `dir`;
// returns the number of discrepancies.
int run_audit(const std::string& dir);

}  // namespace vecsim::harness
