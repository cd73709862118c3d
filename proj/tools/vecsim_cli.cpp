#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vecsim/config.hpp"
#include "vecsim/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> policies;
  std::vector<double> v_list;
  long seed = -1;
  std::string profile;
  std::string out_dir;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--policy", o.policies,
                  "policy tag(s): lysac eaeo greedy pso hgra hgga");
  cmd->add_option("--v", o.v_list, "tradeoff weight V value(s)");
  cmd->add_option("--seed", o.seed, "master seed override");
  cmd->add_option("--profile", o.profile, "override profile (desk, paper)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--workers", o.workers, "parallel evaluation workers");
}

vecsim::config::ExperimentConfig resolve(const CommonOpts& o) {
  auto cfg = o.config_path.empty() ? vecsim::config::default_config()
                                   : vecsim::config::load_config(o.config_path);
  if (!o.profile.empty()) vecsim::config::apply_profile(cfg, o.profile);
  if (!o.policies.empty()) {
    for (const auto& p : o.policies) vecsim::policies::parse_kind(p);
    cfg.run.policies = o.policies;
  }
  if (!o.v_list.empty()) cfg.run.v_list = o.v_list;
  if (o.seed >= 0) cfg.run.master_seed = static_cast<std::uint64_t>(o.seed);
  if (!o.out_dir.empty()) cfg.run.out_dir = o.out_dir;
  if (o.workers > 0) cfg.run.workers = o.workers;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vecsim: edge-offloading simulator and policy harness"};
  app.require_subcommand(1);

  CommonOpts train_o, eval_o, sweep_o, print_o;
  std::string audit_dir;
  std::string sweep_axis = "v";

  CLI::App* train = app.add_subcommand("train", "train the SAC policy");
  add_common(train, train_o);

  CLI::App* eval = app.add_subcommand("eval", "evaluate policies");
  add_common(eval, eval_o);

  CLI::App* sweep = app.add_subcommand("sweep", "sweep V or arrival rate");
  add_common(sweep, sweep_o);
  sweep->add_option("--axis", sweep_axis, "sweep axis: v or arrival_rate");

  CLI::App* audit = app.add_subcommand("audit", "recheck summaries in a run dir");
  audit->add_option("--out", audit_dir, "run directory to audit")->required();

  CLI::App* print_cfg =
      app.add_subcommand("print-config", "print the resolved config");
  add_common(print_cfg, print_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return vecsim::harness::run_training(resolve(train_o));
    if (eval->parsed())
      return vecsim::harness::run_evaluation(resolve(eval_o),
                                             eval_o.policies);
    if (sweep->parsed())
      return vecsim::harness::run_sweep(resolve(sweep_o), sweep_axis);
    if (audit->parsed())
      return vecsim::harness::run_audit(audit_dir) == 0 ? 0 : 2;
    if (print_cfg->parsed()) {
      std::cout << vecsim::config::to_json(resolve(print_o));
      return 0;
    }
  } catch (const vecsim::config::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
