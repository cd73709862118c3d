#include "vecsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace vecsim::harness {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                          std::uint64_t a, std::uint64_t b) {
  // FNV-1a over the stream tag, then mix everything through splitmix64
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  std::uint64_t state = master;
  splitmix64_next(state);
  state ^= h;
  splitmix64_next(state);
  state ^= a;
  splitmix64_next(state);
  state ^= b;
  return splitmix64_next(state);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string SummaryRow::to_csv() const {
  std::ostringstream os;
  os << run_id << ',' << policy << ',' << fmt(v) << ',' << seed_index << ','
     << reps << ',' << fmt(mean_reward) << ',' << fmt(mean_comm) << ','
     << fmt(mean_comp) << ',' << fmt(mean_total) << ',' << fmt(mean_backlog)
     << ',' << fmt(final_backlog) << ',' << fmt(violation_prob);
  return os.str();
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write: " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::unique_ptr<policies::Policy> make_policy(
    const std::string& tag, const config::ExperimentConfig& cfg,
    std::uint64_t seed, sac::SacAgent* agent) {
  switch (policies::parse_kind(tag)) {
    case policies::PolicyKind::EAEO:
      return std::make_unique<policies::EaeoPolicy>();
    case policies::PolicyKind::Greedy:
      return std::make_unique<policies::GreedyPolicy>();
    case policies::PolicyKind::PSO:
      return std::make_unique<policies::PsoPolicy>(cfg.pso, seed);
    case policies::PolicyKind::HGRA:
      return std::make_unique<policies::GibbsPolicy>(cfg.gibbs, false, seed);
    case policies::PolicyKind::HGGA:
      return std::make_unique<policies::GibbsPolicy>(cfg.gibbs, true, seed);
    case policies::PolicyKind::LySAC:
      if (agent == nullptr)
        throw std::runtime_error("lysac evaluation needs a trained checkpoint");
      return std::make_unique<sac::SacPolicy>(agent);
  }
  throw std::runtime_error("unreachable policy kind");
}

}  // namespace

SummaryRow summarize_slot_csv(const std::string& csv_text) {
  const auto rows = parse_csv(csv_text);
  if (rows.size() < 2) throw std::runtime_error("slot CSV has no data rows");
  SummaryRow s;
  s.run_id = rows[1][0];
  s.policy = rows[1][1];
  s.v = std::stod(rows[1][2]);
  s.seed_index = std::stoi(rows[1][3]);

  long max_rep = 0, max_slot = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    max_rep = std::max(max_rep, std::stol(rows[r][4]));
    max_slot = std::max(max_slot, std::stol(rows[r][5]));
  }
  s.reps = static_cast<int>(max_rep + 1);

  double n = 0.0, n_final = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    s.mean_reward += std::stod(row[6]);
    s.mean_comm += std::stod(row[7]);
    s.mean_comp += std::stod(row[8]);
    s.mean_total += std::stod(row[9]);
    s.mean_backlog += std::stod(row[10]);
    s.violation_prob += std::stod(row[14]);
    n += 1.0;
    if (std::stol(row[5]) == max_slot) {
      s.final_backlog += std::stod(row[10]);
      n_final += 1.0;
    }
  }
  s.mean_reward /= n;
  s.mean_comm /= n;
  s.mean_comp /= n;
  s.mean_total /= n;
  s.mean_backlog /= n;
  s.violation_prob /= n;
  s.final_backlog /= n_final;
  return s;
}

EvalCell evaluate_cell(const config::ExperimentConfig& cfg,
                       const std::string& policy_tag, double v, int seed_index,
                       sac::SacAgent* agent) {
  const auto& sys = cfg.environment;
  const std::size_t n = sys.num_types();
  const long slots = cfg.sac.eval_slots;
  const std::string tag =
      policies::kind_name(policies::parse_kind(policy_tag));

  EvalCell cell;
  cell.run_id = tag;
  cell.run_id += "_v" + fmt(v) + "_s" + std::to_string(seed_index);

  std::ostringstream csv;
  csv << kSlotHeader << '\n';

  for (int rep = 0; rep < cfg.run.repetitions; ++rep) {
    // env seeds shared by all policies (paired trajectories), never keyed by V
    env::Environment e(
        sys, derive_seed(cfg.run.master_seed, "eval-env",
                         static_cast<std::uint64_t>(seed_index),
                         static_cast<std::uint64_t>(rep)));
    auto policy = make_policy(
        policy_tag, cfg,
        derive_seed(cfg.run.master_seed, "policy:" + std::string(tag),
                    static_cast<std::uint64_t>(seed_index),
                    static_cast<std::uint64_t>(rep)),
        agent);
    policies::SlotContext ctx{&e, v, &cfg.objective};

    struct SlotData {
      double reward, comm, comp, total, mean_backlog;
      double omega_tech[3];
    };
    std::vector<SlotData> slot_data;
    slot_data.reserve(static_cast<std::size_t>(slots));
    // cumulative arrivals/departures per type for empirical delays
    std::vector<std::vector<double>> cum_a(n), cum_d(n);
    std::vector<std::vector<double>> omega_bound(n);
    for (std::size_t i = 0; i < n; ++i) {
      cum_a[i].assign(1, 0.0);
      cum_d[i].assign(1, 0.0);
    }

    for (long t = 0; t < slots; ++t) {
      const AllocationDecision d = policy->decide(ctx);
      const auto omegas = objective::slot_omegas(sys, e.comm_channel(), d);
      const auto util =
          objective::system_utility(d, e.arrivals().volume, cfg.objective);
      const double rew =
          objective::reward(e.backlog(), e.arrivals().volume, d, omegas, v,
                            sys, cfg.objective);

      SlotData sd{};
      sd.reward = rew;
      sd.comm = util.comm;
      sd.comp = util.comp;
      sd.total = util.total;
      double q = 0.0;
      for (double b : e.backlog()) q += b;
      sd.mean_backlog = q / static_cast<double>(n);
      for (int g = 0; g < 3; ++g) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          acc += objective::effective_omega(
              omegas[i][static_cast<std::size_t>(g)], sys.omega_cap);
        sd.omega_tech[g] = acc / static_cast<double>(n);
      }
      slot_data.push_back(sd);

      const std::vector<double> q_before = e.backlog();
      const std::vector<double> a_now = e.arrivals().volume;
      for (std::size_t i = 0; i < n; ++i) {
        cum_a[i].push_back(cum_a[i].back() + a_now[i]);
        double w = 0.0;
        for (std::size_t g = 0; g < 3; ++g)
          w = std::max(w,
                       objective::effective_omega(omegas[i][g], sys.omega_cap));
        omega_bound[i].push_back(w);
      }
      e.advance(d);
      for (std::size_t i = 0; i < n; ++i) {
        const double served = q_before[i] + a_now[i] - e.backlog()[i];
        cum_d[i].push_back(cum_d[i].back() + served);
      }
    }

    // empirical per-slot delay violations vs the analytic bound: the delay of
    // data arrived through slot t is the first u with cum_d(t+u+1) >= cum_a(t+1)
    std::vector<char> violated(static_cast<std::size_t>(slots), 0);
    for (std::size_t i = 0; i < n; ++i) {
      long tau = 0;
      for (long t = 0; t < slots; ++t) {
        if (tau < t) tau = t;
        while (tau < slots && cum_d[i][static_cast<std::size_t>(tau) + 1] <
                                  cum_a[i][static_cast<std::size_t>(t) + 1] -
                                      1e-12)
          ++tau;
        // tau == slots means not served by the horizon; tau - t is then a
        // lower bound on the true delay, still comparable to the bound
        const double delay = static_cast<double>(tau - t);
        if (delay > omega_bound[i][static_cast<std::size_t>(t)])
          violated[static_cast<std::size_t>(t)] = 1;
      }
    }

    for (long t = 0; t < slots; ++t) {
      const auto& sd = slot_data[static_cast<std::size_t>(t)];
      csv << cell.run_id << ',' << tag << ',' << fmt(v) << ',' << seed_index
          << ',' << rep << ',' << t << ',' << fmt(sd.reward) << ','
          << fmt(sd.comm) << ',' << fmt(sd.comp) << ',' << fmt(sd.total) << ','
          << fmt(sd.mean_backlog) << ',' << fmt(sd.omega_tech[0]) << ','
          << fmt(sd.omega_tech[1]) << ',' << fmt(sd.omega_tech[2]) << ','
          << int(violated[static_cast<std::size_t>(t)]) << '\n';
    }
  }

  cell.csv_text = csv.str();
  cell.summary = summarize_slot_csv(cell.csv_text);
  return cell;
}

std::string learning_csv(const config::ExperimentConfig& cfg,
                         const std::string& run_id, const std::string& policy,
                         double v, int seed_index,
                         const std::vector<double>& episode_rewards) {
  std::ostringstream os;
  os << kLearningHeader << '\n';
  // the smoothed column is a trailing mean computed from the formatted avg
  // values, so the audit can reproduce it from the CSV alone
  std::vector<double> avg_parsed;
  avg_parsed.reserve(episode_rewards.size());
  for (double r : episode_rewards) avg_parsed.push_back(std::stod(fmt(r)));
  const int w = cfg.run.smoothing_window;
  for (std::size_t k = 0; k < episode_rewards.size(); ++k) {
    const std::size_t lo = k + 1 >= static_cast<std::size_t>(w)
                               ? k + 1 - static_cast<std::size_t>(w)
                               : 0;
    double acc = 0.0;
    for (std::size_t j = lo; j <= k; ++j) acc += avg_parsed[j];
    const double smoothed = acc / static_cast<double>(k - lo + 1);
    os << run_id << ',' << policy << ',' << fmt(v) << ',' << seed_index << ','
       << k << ',' << fmt(episode_rewards[k]) << ',' << fmt(smoothed) << '\n';
  }
  return os.str();
}

std::string recompute_learning_csv(const std::string& csv_text, int window) {
  const auto rows = parse_csv(csv_text);
  std::ostringstream os;
  os << kLearningHeader << '\n';
  std::vector<double> avg;
  for (std::size_t r = 1; r < rows.size(); ++r)
    avg.push_back(std::stod(rows[r][5]));
  for (std::size_t k = 0; k < avg.size(); ++k) {
    const auto& row = rows[k + 1];
    const std::size_t lo = k + 1 >= static_cast<std::size_t>(window)
                               ? k + 1 - static_cast<std::size_t>(window)
                               : 0;
    double acc = 0.0;
    for (std::size_t j = lo; j <= k; ++j) acc += avg[j];
    const double smoothed = acc / static_cast<double>(k - lo + 1);
    os << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << ','
       << row[4] << ',' << row[5] << ',' << fmt(smoothed) << '\n';
  }
  return os.str();
}

std::string checkpoint_name(double v, int seed_index) {
  return "checkpoint_v" + fmt(v) + "_s" + std::to_string(seed_index) + ".bin";
}

void write_run_preamble(const config::ExperimentConfig& cfg) {
  fs::create_directories(cfg.run.out_dir);
  write_file(cfg.run.out_dir + "/config.json", config::to_json(cfg));
  write_file(cfg.run.out_dir + "/schema_version.txt",
             std::string(kSchemaVersion) + "\n");

  std::ostringstream os;
  os << "# seed derivation: splitmix64 chain over (master ^ fnv1a(stream), a, "
        "b); V never enters\n";
  os << "stream,a,b,seed\n";
  auto emit = [&](std::string_view stream, std::uint64_t a, std::uint64_t b) {
    os << stream << ',' << a << ',' << b << ','
       << derive_seed(cfg.run.master_seed, stream, a, b) << '\n';
  };
  for (int k = 0; k < cfg.run.n_seeds; ++k) {
    emit("agent", static_cast<std::uint64_t>(k), 0);
    emit("train-env", static_cast<std::uint64_t>(k), 0);
    for (int rep = 0; rep < cfg.run.repetitions; ++rep) {
      emit("eval-env", static_cast<std::uint64_t>(k),
           static_cast<std::uint64_t>(rep));
      for (const auto& p : cfg.run.policies)
        emit("policy:" +
                 std::string(policies::kind_name(policies::parse_kind(p))),
             static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(rep));
    }
  }
  write_file(cfg.run.out_dir + "/seeds.txt", os.str());
}

int run_training(const config::ExperimentConfig& cfg) {
  write_run_preamble(cfg);
  const std::size_t n = cfg.environment.num_types();
  const int state_dim = static_cast<int>(6 * n);
  const int act_dim = static_cast<int>(raw_action_dim(n));
  bool any_failed = false;

  for (double v : cfg.run.v_list) {
    for (int k = 0; k < cfg.run.n_seeds; ++k) {
      const std::string run_id = "LySAC_v" + fmt(v) + "_s" + std::to_string(k);
      try {
        sac::SacAgent agent(
            cfg.sac, state_dim, act_dim,
            derive_seed(cfg.run.master_seed, "agent",
                        static_cast<std::uint64_t>(k), 0));
        env::Environment e(cfg.environment,
                           derive_seed(cfg.run.master_seed, "train-env",
                                       static_cast<std::uint64_t>(k), 0));
        const sac::TrainResult res = agent.train(e, v, cfg.objective);
        write_file(cfg.run.out_dir + "/learning_v" + fmt(v) + "_s" +
                       std::to_string(k) + ".csv",
                   learning_csv(cfg, run_id, "LySAC", v, k,
                                res.episode_mean_reward));
        agent.save(cfg.run.out_dir + "/" + checkpoint_name(v, k));
      } catch (const std::exception& ex) {
        std::cerr << "training run " << run_id << " failed: " << ex.what()
                  << "\n";
        any_failed = true;
      }
    }
  }
  return any_failed ? 2 : 0;
}

namespace {

struct CellSpec {
  std::string policy;
  double v;
  int seed_index;
  double arrival = -1.0;  // >0: lambda override (arrival-rate sweeps)
  double axis_value = 0.0;
};

config::ExperimentConfig with_arrival(const config::ExperimentConfig& base,
                                      double lambda) {
  config::ExperimentConfig cfg = base;
  for (auto& t : cfg.environment.types) {
    t.lambda = lambda;
    t.rho = lambda * t.task_size;  // keep the arrival envelope consistent
  }
  return cfg;
}

// Runs the cell list with a simple worker pool; results land by index.
void run_cells(const config::ExperimentConfig& cfg,
               const std::vector<CellSpec>& specs,
               std::vector<EvalCell>& cells, std::vector<std::string>& errors,
               double lysac_checkpoint_v_override = -1.0) {
  cells.resize(specs.size());
  errors.assign(specs.size(), "");
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, cfg.run.workers);

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      const CellSpec& sp = specs[i];
      try {
        config::ExperimentConfig local =
            sp.arrival > 0.0 ? with_arrival(cfg, sp.arrival) : cfg;
        std::unique_ptr<sac::SacAgent> agent;
        if (policies::parse_kind(sp.policy) == policies::PolicyKind::LySAC) {
          const double ckpt_v = lysac_checkpoint_v_override >= 0.0
                                    ? lysac_checkpoint_v_override
                                    : sp.v;
          const std::string path = cfg.run.out_dir + "/" +
                                   checkpoint_name(ckpt_v, sp.seed_index);
          agent = std::make_unique<sac::SacAgent>(sac::SacAgent::load(path));
        }
        cells[i] =
            evaluate_cell(local, sp.policy, sp.v, sp.seed_index, agent.get());
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
}

}  // namespace

int run_evaluation(const config::ExperimentConfig& cfg,
                   const std::vector<std::string>& policies_arg) {
  write_run_preamble(cfg);
  const std::vector<std::string>& pols =
      policies_arg.empty() ? cfg.run.policies : policies_arg;

  std::vector<CellSpec> specs;
  for (const auto& p : pols)
    for (double v : cfg.run.v_list)
      for (int k = 0; k < cfg.run.n_seeds; ++k)
        specs.push_back({p, v, k, -1.0, v});

  std::vector<EvalCell> cells;
  std::vector<std::string> errors;
  run_cells(cfg, specs, cells, errors);

  bool any_failed = false;
  std::ostringstream summary;
  summary << kSummaryHeader << '\n';
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "evaluation cell " << specs[i].policy << " v="
                << specs[i].v << " s=" << specs[i].seed_index
                << " failed: " << errors[i] << "\n";
      any_failed = true;
      continue;
    }
    write_file(cfg.run.out_dir + "/eval_" + cells[i].run_id + ".csv",
               cells[i].csv_text);
    summary << cells[i].summary.to_csv() << '\n';
  }
  write_file(cfg.run.out_dir + "/summary.csv", summary.str());
  return any_failed ? 2 : 0;
}

int run_sweep(const config::ExperimentConfig& cfg, const std::string& axis) {
  if (axis != "v" && axis != "arrival_rate")
    throw config::ConfigError("unknown sweep axis: " + axis +
                              " (expected v or arrival_rate)");
  write_run_preamble(cfg);

  std::vector<CellSpec> specs;
  const bool v_axis = axis == "v";
  const std::vector<double>& values =
      v_axis ? cfg.run.v_list : cfg.run.arrival_axis;
  const double fixed_v = cfg.run.v_list.front();
  for (const auto& p : cfg.run.policies)
    for (double x : values)
      for (int k = 0; k < cfg.run.n_seeds; ++k) {
        CellSpec sp;
        sp.policy = p;
        sp.v = v_axis ? x : fixed_v;
        sp.seed_index = k;
        sp.arrival = v_axis ? -1.0 : x;
        sp.axis_value = x;
        specs.push_back(sp);
      }

  std::vector<EvalCell> cells;
  std::vector<std::string> errors;
  run_cells(cfg, specs, cells, errors, v_axis ? -1.0 : fixed_v);

  // aggregate across seeds per (policy, axis value)
  std::ostringstream os;
  os << "policy,axis,axis_value,seeds,ok,mean_reward,mean_comm_utility,"
        "mean_comp_utility,mean_total_utility,mean_backlog,final_backlog,"
        "violation_prob\n";
  for (const auto& p : cfg.run.policies) {
    const std::string tag = policies::kind_name(policies::parse_kind(p));
    for (double x : values) {
      int ok = 0, failed = 0;
      double acc[7] = {0, 0, 0, 0, 0, 0, 0};
      for (std::size_t i = 0; i < specs.size(); ++i) {
        if (specs[i].policy != p || specs[i].axis_value != x) continue;
        if (!errors[i].empty()) {
          ++failed;
          continue;
        }
        const SummaryRow& s = cells[i].summary;
        acc[0] += s.mean_reward;
        acc[1] += s.mean_comm;
        acc[2] += s.mean_comp;
        acc[3] += s.mean_total;
        acc[4] += s.mean_backlog;
        acc[5] += s.final_backlog;
        acc[6] += s.violation_prob;
        ++ok;
      }
      os << tag << ',' << axis << ',' << fmt(x) << ',' << ok << ','
         << (failed == 0 ? 1 : 0);
      for (double a : acc)
        os << ',' << fmt(ok > 0 ? a / static_cast<double>(ok) : 0.0);
      os << '\n';
    }
  }
  write_file(cfg.run.out_dir + "/sweep_" + axis + ".csv", os.str());

  bool any_failed = false;
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (!errors[i].empty()) {
      std::cerr << "sweep cell " << specs[i].policy << " " << axis << "="
                << specs[i].axis_value << " s=" << specs[i].seed_index
                << " failed: " << errors[i] << "\n";
      any_failed = true;
    }
  return any_failed ? 2 : 0;
}

int run_audit(const std::string& dir) {
  int discrepancies = 0;

  // summary.csv vs recomputation from each eval_*.csv
  std::vector<std::string> eval_files, learning_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("eval_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv")
      eval_files.push_back(entry.path().string());
    if (name.rfind("learning_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv")
      learning_files.push_back(entry.path().string());
  }
  std::sort(eval_files.begin(), eval_files.end());
  std::sort(learning_files.begin(), learning_files.end());

  std::vector<std::vector<std::string>> summary_rows;
  const std::string summary_path = dir + "/summary.csv";
  if (fs::exists(summary_path)) summary_rows = parse_csv(read_file(summary_path));

  for (const auto& path : eval_files) {
    SummaryRow recomputed;
    try {
      recomputed = summarize_slot_csv(read_file(path));
    } catch (const std::exception& ex) {
      std::cerr << "audit: cannot summarize " << path << ": " << ex.what()
                << "\n";
      ++discrepancies;
      continue;
    }
    const std::string expect = recomputed.to_csv();
    bool found = false;
    for (std::size_t r = 1; r < summary_rows.size(); ++r) {
      if (summary_rows[r][0] != recomputed.run_id) continue;
      found = true;
      std::string stored;
      for (std::size_t c = 0; c < summary_rows[r].size(); ++c) {
        if (c) stored += ',';
        stored += summary_rows[r][c];
      }
      if (stored != expect) {
        std::cerr << "audit: summary mismatch for " << recomputed.run_id
                  << "\n  stored:     " << stored
                  << "\n  recomputed: " << expect << "\n";
        ++discrepancies;
      }
    }
    if (!found) {
      std::cerr << "audit: no summary row for " << recomputed.run_id << "\n";
      ++discrepancies;
    }
  }

  int window = 50;
  const std::string cfg_path = dir + "/config.json";
  if (fs::exists(cfg_path)) {
    try {
      window = config::load_config(cfg_path).run.smoothing_window;
    } catch (const std::exception&) {
      // keep the default; the mismatch will surface below if it matters
    }
  }
  for (const auto& path : learning_files) {
    const std::string text = read_file(path);
    if (recompute_learning_csv(text, window) != text) {
      std::cerr << "audit: smoothed column mismatch in " << path << "\n";
      ++discrepancies;
    }
  }

  if (discrepancies == 0)
    std::cout << "audit clean: " << eval_files.size() << " eval files, "
              << learning_files.size() << " learning files\n";
  return discrepancies;
}

}  // namespace vecsim::harness
