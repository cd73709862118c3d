#include "vecsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vecsim::config {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key: " + section + "." + it.key());
  }
}

double get_num(const json& obj, const std::string& section,
               const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw ConfigError(section + "." + key + " must be a number");
  return obj[key].get<double>();
}

long get_int(const json& obj, const std::string& section,
             const std::string& key, long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError(section + "." + key + " must be an integer");
  return obj[key].get<long>();
}

void require_positive(double v, const std::string& name) {
  if (!(v > 0.0)) throw ConfigError(name + " must be > 0");
}
void require_nonneg(double v, const std::string& name) {
  if (!(v >= 0.0)) throw ConfigError(name + " must be >= 0");
}

std::vector<double> get_num_list(const json& obj, const std::string& section,
                                 const std::string& key,
                                 std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_array())
    throw ConfigError(section + "." + key + " must be an array");
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number())
      throw ConfigError(section + "." + key + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void parse_environment(const json& j, ExperimentConfig& cfg) {
  const std::string sec = "environment";
  check_keys(j, sec,
             {"lambda", "task_size", "cycles_per_bit", "t_max", "rho", "sigma",
              "eps", "bandwidth_mhz", "gamma_sinr", "distance_m",
              "path_loss_exp", "nakagami_m", "r_dsrc", "r_cv2i", "dsrc_u",
              "dsrc_tail_exp", "service_scale", "theta", "omega_cap", "f_e"});
  auto& e = cfg.environment;

  std::vector<double> w;
  for (const auto& t : e.types) w.push_back(t.cycles_per_bit);
  w = get_num_list(j, sec, "cycles_per_bit", w);
  if (w.empty()) throw ConfigError("environment.cycles_per_bit must be nonempty");
  const std::size_t n = w.size();

  std::vector<double> lambda(n, e.types.empty() ? 10.0 : e.types[0].lambda);
  if (j.contains("lambda")) {
    if (j["lambda"].is_number()) {
      lambda.assign(n, j["lambda"].get<double>());
    } else {
      lambda = get_num_list(j, sec, "lambda", lambda);
      if (lambda.size() != n)
        throw ConfigError("environment.lambda length must match cycles_per_bit");
    }
  }

  const double task_size =
      get_num(j, sec, "task_size", e.types.empty() ? 0.062 : e.types[0].task_size);
  const double t_max =
      get_num(j, sec, "t_max", e.types.empty() ? 30.0 : e.types[0].t_max);
  const double rho = get_num(j, sec, "rho", e.types.empty() ? 0.62 : e.types[0].rho);
  const double sigma =
      get_num(j, sec, "sigma", e.types.empty() ? 18.6 : e.types[0].sigma);
  const double eps = get_num(j, sec, "eps", e.types.empty() ? 0.01 : e.types[0].eps);

  e.types.clear();
  for (std::size_t i = 0; i < n; ++i) {
    env::TaskTypeSpec t;
    t.id = static_cast<int>(i) + 1;
    t.lambda = lambda[i];
    t.task_size = task_size;
    t.cycles_per_bit = w[i];
    t.t_max = t_max;
    t.rho = rho;
    t.sigma = sigma;
    t.eps = eps;
    require_nonneg(t.lambda, "environment.lambda");
    require_positive(t.task_size, "environment.task_size");
    require_positive(t.cycles_per_bit, "environment.cycles_per_bit");
    require_positive(t.t_max, "environment.t_max");
    require_positive(t.rho, "environment.rho");
    require_nonneg(t.sigma, "environment.sigma");
    if (!(t.eps > 0.0 && t.eps < 1.0))
      throw ConfigError("environment.eps must be in (0,1)");
    e.types.push_back(t);
  }

  e.bandwidth_mhz = get_num(j, sec, "bandwidth_mhz", e.bandwidth_mhz);
  e.gamma_sinr = get_num(j, sec, "gamma_sinr", e.gamma_sinr);
  e.distance_m = get_num(j, sec, "distance_m", e.distance_m);
  e.path_loss_exp = get_num(j, sec, "path_loss_exp", e.path_loss_exp);
  e.nakagami_m = get_num(j, sec, "nakagami_m", e.nakagami_m);
  e.r_dsrc = get_num(j, sec, "r_dsrc", e.r_dsrc);
  e.r_cv2i = get_num(j, sec, "r_cv2i", e.r_cv2i);
  e.dsrc_u = get_num(j, sec, "dsrc_u", e.dsrc_u);
  e.dsrc_tail_exp = get_num(j, sec, "dsrc_tail_exp", e.dsrc_tail_exp);
  e.service_scale = get_num(j, sec, "service_scale", e.service_scale);
  e.theta = get_num(j, sec, "theta", e.theta);
  e.omega_cap = get_num(j, sec, "omega_cap", e.omega_cap);
  cfg.objective.f_e_ghz = get_num(j, sec, "f_e", cfg.objective.f_e_ghz);

  require_positive(e.bandwidth_mhz, "environment.bandwidth_mhz");
  require_positive(e.gamma_sinr, "environment.gamma_sinr");
  require_positive(e.distance_m, "environment.distance_m");
  require_positive(e.nakagami_m, "environment.nakagami_m");
  require_positive(e.r_dsrc, "environment.r_dsrc");
  require_positive(e.r_cv2i, "environment.r_cv2i");
  require_positive(e.service_scale, "environment.service_scale");
  require_positive(e.theta, "environment.theta");
  require_positive(e.omega_cap, "environment.omega_cap");
  require_positive(cfg.objective.f_e_ghz, "environment.f_e");
}

void parse_objective(const json& j, ExperimentConfig& cfg) {
  const std::string sec = "objective";
  check_keys(j, sec,
             {"c_comm", "c_comp", "w1", "w2", "n_cores", "kappa_base_ghz",
              "p_e"});
  auto& o = cfg.objective;
  o.c_comm = get_num(j, sec, "c_comm", o.c_comm);
  o.c_comp = get_num(j, sec, "c_comp", o.c_comp);
  o.w1 = get_num(j, sec, "w1", o.w1);
  o.w2 = get_num(j, sec, "w2", o.w2);
  o.n_cores = get_num(j, sec, "n_cores", o.n_cores);
  o.kappa_base_ghz = get_num(j, sec, "kappa_base_ghz", o.kappa_base_ghz);
  o.p_e = get_num(j, sec, "p_e", o.p_e);
  require_nonneg(o.c_comm, "objective.c_comm");
  require_nonneg(o.c_comp, "objective.c_comp");
  require_nonneg(o.w1, "objective.w1");
  require_nonneg(o.w2, "objective.w2");
  require_positive(o.n_cores, "objective.n_cores");
  require_positive(o.kappa_base_ghz, "objective.kappa_base_ghz");
  require_nonneg(o.p_e, "objective.p_e");
}

void parse_sac(const json& j, ExperimentConfig& cfg) {
  const std::string sec = "sac";
  check_keys(j, sec,
             {"hidden", "gamma", "lr_actor", "lr_critic", "lr_temp",
              "batch_size", "episodes", "slots_per_episode",
              "update_every_episodes", "update_iters", "target_sync_every",
              "tau", "entropy_target_sign", "reward_scale", "replay_capacity",
              "log_std_min", "log_std_max", "init_log_beta", "eval_slots"});
  auto& s = cfg.sac;
  if (j.contains("hidden")) {
    auto h = get_num_list(j, sec, "hidden", {});
    s.hidden.clear();
    for (double v : h) {
      if (v < 1.0) throw ConfigError("sac.hidden entries must be >= 1");
      s.hidden.push_back(static_cast<int>(v));
    }
    if (s.hidden.empty()) throw ConfigError("sac.hidden must be nonempty");
  }
  s.gamma = get_num(j, sec, "gamma", s.gamma);
  s.lr_actor = get_num(j, sec, "lr_actor", s.lr_actor);
  s.lr_critic = get_num(j, sec, "lr_critic", s.lr_critic);
  s.lr_temp = get_num(j, sec, "lr_temp", s.lr_temp);
  s.batch_size = static_cast<int>(get_int(j, sec, "batch_size", s.batch_size));
  s.episodes = get_int(j, sec, "episodes", s.episodes);
  s.slots_per_episode =
      get_int(j, sec, "slots_per_episode", s.slots_per_episode);
  s.update_every_episodes = static_cast<int>(
      get_int(j, sec, "update_every_episodes", s.update_every_episodes));
  s.update_iters =
      static_cast<int>(get_int(j, sec, "update_iters", s.update_iters));
  s.target_sync_every = static_cast<int>(
      get_int(j, sec, "target_sync_every", s.target_sync_every));
  s.tau = get_num(j, sec, "tau", s.tau);
  s.entropy_target_sign = static_cast<int>(
      get_int(j, sec, "entropy_target_sign", s.entropy_target_sign));
  s.reward_scale = get_num(j, sec, "reward_scale", s.reward_scale);
  s.replay_capacity = static_cast<std::size_t>(get_int(
      j, sec, "replay_capacity", static_cast<long>(s.replay_capacity)));
  s.log_std_min = get_num(j, sec, "log_std_min", s.log_std_min);
  s.log_std_max = get_num(j, sec, "log_std_max", s.log_std_max);
  s.init_log_beta = get_num(j, sec, "init_log_beta", s.init_log_beta);
  s.eval_slots = get_int(j, sec, "eval_slots", s.eval_slots);

  if (!(s.gamma >= 0.0 && s.gamma <= 1.0))
    throw ConfigError("sac.gamma must be in [0,1]");
  require_positive(s.lr_actor, "sac.lr_actor");
  require_positive(s.lr_critic, "sac.lr_critic");
  require_positive(s.lr_temp, "sac.lr_temp");
  if (s.batch_size < 1) throw ConfigError("sac.batch_size must be >= 1");
  if (s.episodes < 1) throw ConfigError("sac.episodes must be >= 1");
  if (s.slots_per_episode < 1)
    throw ConfigError("sac.slots_per_episode must be >= 1");
  if (s.update_every_episodes < 1)
    throw ConfigError("sac.update_every_episodes must be >= 1");
  if (s.update_iters < 0) throw ConfigError("sac.update_iters must be >= 0");
  if (s.target_sync_every < 1)
    throw ConfigError("sac.target_sync_every must be >= 1");
  if (!(s.tau > 0.0 && s.tau <= 1.0))
    throw ConfigError("sac.tau must be in (0,1]");
  if (s.entropy_target_sign != 1 && s.entropy_target_sign != -1)
    throw ConfigError("sac.entropy_target_sign must be +1 or -1");
  require_positive(s.reward_scale, "sac.reward_scale");
  if (s.replay_capacity < static_cast<std::size_t>(s.batch_size))
    throw ConfigError("sac.replay_capacity must be >= sac.batch_size");
  if (!(s.log_std_min < s.log_std_max))
    throw ConfigError("sac.log_std_min must be < sac.log_std_max");
  if (s.eval_slots < 1) throw ConfigError("sac.eval_slots must be >= 1");
}

void parse_pso(const json& j, ExperimentConfig& cfg) {
  const std::string sec = "pso";
  check_keys(j, sec, {"swarm_size", "iterations", "inertia", "c1", "c2"});
  auto& p = cfg.pso;
  p.swarm_size = static_cast<int>(get_int(j, sec, "swarm_size", p.swarm_size));
  p.iterations = static_cast<int>(get_int(j, sec, "iterations", p.iterations));
  p.inertia = get_num(j, sec, "inertia", p.inertia);
  p.c1 = get_num(j, sec, "c1", p.c1);
  p.c2 = get_num(j, sec, "c2", p.c2);
  if (p.swarm_size < 1) throw ConfigError("pso.swarm_size must be >= 1");
  if (p.iterations < 0) throw ConfigError("pso.iterations must be >= 0");
  require_nonneg(p.inertia, "pso.inertia");
  require_nonneg(p.c1, "pso.c1");
  require_nonneg(p.c2, "pso.c2");
}

void parse_gibbs(const json& j, ExperimentConfig& cfg) {
  const std::string sec = "gibbs";
  check_keys(j, sec,
             {"temperature", "mix_weight", "iterations", "grid_denom",
              "max_exhaustive"});
  auto& g = cfg.gibbs;
  g.temperature = get_num(j, sec, "temperature", g.temperature);
  g.mix_weight = get_num(j, sec, "mix_weight", g.mix_weight);
  g.iterations = static_cast<int>(get_int(j, sec, "iterations", g.iterations));
  g.grid_denom = static_cast<int>(get_int(j, sec, "grid_denom", g.grid_denom));
  g.max_exhaustive = static_cast<std::size_t>(
      get_int(j, sec, "max_exhaustive", static_cast<long>(g.max_exhaustive)));
  require_nonneg(g.temperature, "gibbs.temperature");
  if (!(g.mix_weight >= 0.0 && g.mix_weight <= 1.0))
    throw ConfigError("gibbs.mix_weight must be in [0,1]");
  if (g.iterations < 1) throw ConfigError("gibbs.iterations must be >= 1");
  if (g.grid_denom < 1) throw ConfigError("gibbs.grid_denom must be >= 1");
}

void parse_run(const json& j, ExperimentConfig& cfg) {
  const std::string sec = "run";
  check_keys(j, sec,
             {"policies", "v_list", "arrival_axis", "master_seed", "n_seeds",
              "repetitions", "smoothing_window", "out_dir", "workers"});
  auto& r = cfg.run;
  if (j.contains("policies")) {
    if (!j["policies"].is_array())
      throw ConfigError("run.policies must be an array");
    r.policies.clear();
    for (const auto& v : j["policies"]) {
      if (!v.is_string())
        throw ConfigError("run.policies must contain strings");
      policies::parse_kind(v.get<std::string>());  // validates the tag
      r.policies.push_back(v.get<std::string>());
    }
    if (r.policies.empty()) throw ConfigError("run.policies must be nonempty");
  }
  r.v_list = get_num_list(j, sec, "v_list", r.v_list);
  if (r.v_list.empty()) throw ConfigError("run.v_list must be nonempty");
  r.arrival_axis = get_num_list(j, sec, "arrival_axis", r.arrival_axis);
  if (r.arrival_axis.empty())
    throw ConfigError("run.arrival_axis must be nonempty");
  r.master_seed = static_cast<std::uint64_t>(
      get_int(j, sec, "master_seed", static_cast<long>(r.master_seed)));
  r.n_seeds = static_cast<int>(get_int(j, sec, "n_seeds", r.n_seeds));
  r.repetitions =
      static_cast<int>(get_int(j, sec, "repetitions", r.repetitions));
  r.smoothing_window =
      static_cast<int>(get_int(j, sec, "smoothing_window", r.smoothing_window));
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string())
      throw ConfigError("run.out_dir must be a string");
    r.out_dir = j["out_dir"].get<std::string>();
  }
  r.workers = static_cast<int>(get_int(j, sec, "workers", r.workers));
  if (r.n_seeds < 1) throw ConfigError("run.n_seeds must be >= 1");
  if (r.repetitions < 1) throw ConfigError("run.repetitions must be >= 1");
  if (r.smoothing_window < 1)
    throw ConfigError("run.smoothing_window must be >= 1");
  if (r.workers < 1) throw ConfigError("run.workers must be >= 1");
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  const double w[3] = {54633.0, 40305.0, 34532.0};
  for (int i = 0; i < 3; ++i) {
    env::TaskTypeSpec t;
    t.id = i + 1;
    t.lambda = 10.0;
    t.task_size = 0.062;
    t.cycles_per_bit = w[i];
    t.t_max = 30.0;
    t.rho = 0.62;
    t.sigma = 18.6;
    t.eps = 0.01;
    cfg.environment.types.push_back(t);
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j, "<root>",
             {"environment", "objective", "sac", "pso", "gibbs", "run"});

  ExperimentConfig cfg = default_config();
  if (j.contains("environment")) parse_environment(j["environment"], cfg);
  if (j.contains("objective")) parse_objective(j["objective"], cfg);
  if (j.contains("sac")) parse_sac(j["sac"], cfg);
  if (j.contains("pso")) parse_pso(j["pso"], cfg);
  if (j.contains("gibbs")) parse_gibbs(j["gibbs"], cfg);
  if (j.contains("run")) parse_run(j["run"], cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void apply_profile(ExperimentConfig& cfg, const std::string& name) {
  if (name.empty() || name == "paper") return;
  if (name == "desk") {
    cfg.sac.episodes = 300;
    cfg.sac.slots_per_episode = 300;
    cfg.run.repetitions = 5;
    return;
  }
  throw ConfigError("unknown profile: " + name);
}

std::string to_json(const ExperimentConfig& cfg) {
  json j;
  const auto& e = cfg.environment;
  json je;
  {
    json lambda = json::array(), w = json::array();
    for (const auto& t : e.types) {
      lambda.push_back(t.lambda);
      w.push_back(t.cycles_per_bit);
    }
    je["lambda"] = lambda;
    je["cycles_per_bit"] = w;
    je["task_size"] = e.types[0].task_size;
    je["t_max"] = e.types[0].t_max;
    je["rho"] = e.types[0].rho;
    je["sigma"] = e.types[0].sigma;
    je["eps"] = e.types[0].eps;
    je["bandwidth_mhz"] = e.bandwidth_mhz;
    je["gamma_sinr"] = e.gamma_sinr;
    je["distance_m"] = e.distance_m;
    je["path_loss_exp"] = e.path_loss_exp;
    je["nakagami_m"] = e.nakagami_m;
    je["r_dsrc"] = e.r_dsrc;
    je["r_cv2i"] = e.r_cv2i;
    je["dsrc_u"] = e.dsrc_u;
    je["dsrc_tail_exp"] = e.dsrc_tail_exp;
    je["service_scale"] = e.service_scale;
    je["theta"] = e.theta;
    je["omega_cap"] = e.omega_cap;
    je["f_e"] = cfg.objective.f_e_ghz;
  }
  j["environment"] = je;

  const auto& o = cfg.objective;
  j["objective"] = {{"c_comm", o.c_comm},   {"c_comp", o.c_comp},
                    {"w1", o.w1},           {"w2", o.w2},
                    {"n_cores", o.n_cores}, {"kappa_base_ghz", o.kappa_base_ghz},
                    {"p_e", o.p_e}};

  const auto& s = cfg.sac;
  j["sac"] = {{"hidden", s.hidden},
              {"gamma", s.gamma},
              {"lr_actor", s.lr_actor},
              {"lr_critic", s.lr_critic},
              {"lr_temp", s.lr_temp},
              {"batch_size", s.batch_size},
              {"episodes", s.episodes},
              {"slots_per_episode", s.slots_per_episode},
              {"update_every_episodes", s.update_every_episodes},
              {"update_iters", s.update_iters},
              {"target_sync_every", s.target_sync_every},
              {"tau", s.tau},
              {"entropy_target_sign", s.entropy_target_sign},
              {"reward_scale", s.reward_scale},
              {"replay_capacity", s.replay_capacity},
              {"log_std_min", s.log_std_min},
              {"log_std_max", s.log_std_max},
              {"init_log_beta", s.init_log_beta},
              {"eval_slots", s.eval_slots}};

  const auto& p = cfg.pso;
  j["pso"] = {{"swarm_size", p.swarm_size},
              {"iterations", p.iterations},
              {"inertia", p.inertia},
              {"c1", p.c1},
              {"c2", p.c2}};

  const auto& g = cfg.gibbs;
  j["gibbs"] = {{"temperature", g.temperature},
                {"mix_weight", g.mix_weight},
                {"iterations", g.iterations},
                {"grid_denom", g.grid_denom},
                {"max_exhaustive", g.max_exhaustive}};

  const auto& r = cfg.run;
  j["run"] = {{"policies", r.policies},
              {"v_list", r.v_list},
              {"arrival_axis", r.arrival_axis},
              {"master_seed", r.master_seed},
              {"n_seeds", r.n_seeds},
              {"repetitions", r.repetitions},
              {"smoothing_window", r.smoothing_window},
              {"out_dir", r.out_dir},
              {"workers", r.workers}};
  return j.dump(2) + "\n";
}

}  // namespace vecsim::config
