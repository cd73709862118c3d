#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vecsim/allocation.hpp"
#include "vecsim/env.hpp"
#include "vecsim/nn.hpp"
#include "vecsim/objective.hpp"
#include "vecsim/policies.hpp"

namespace vecsim::sac {

struct SacConfig {
  std::vector<int> hidden{256, 256};
  double gamma = 0.99;
  double lr_actor = 3.0e-4;
  double lr_critic = 3.0e-3;
  double lr_temp = 3.0e-4;
  int batch_size = 256;            // M
  long episodes = 16000;           // K_max
  long slots_per_episode = 2000;   // T_max (training)
  int update_every_episodes = 2;   // K_u
  int update_iters = 80;           // R_u
  int target_sync_every = 1;       // R_t
  double tau = 0.005;
  int entropy_target_sign = 1;     // +dim(a_raw) by default, -1 for standard
  double reward_scale = 1.0e-6;    // applied to rewards fed to the learner
  std::size_t replay_capacity = 1000000;
  double log_std_min = -20.0;
  double log_std_max = 2.0;
  double init_log_beta = 0.0;
  bool updates_enabled = true;     // false = pure rollout (control runs)
  long eval_slots = 5000;          // T_test
};

struct Transition {
  std::vector<double> s;
  std::vector<double> a_raw;
  AllocationDecision decision;
  double r = 0.0;  // already reward-scaled
  std::vector<double> s_next;
};

// Uniform ring buffer; batches are sampled without replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return data_[i]; }

  // m distinct uniform indices in [0, size).
  std::vector<std::size_t> sample_indices(std::size_t m,
                                          std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Transition> data_;
};

// Online per-dimension standardization (Welford). Frozen during evaluation
// simply by not calling observe().
struct Normalizer {
  std::vector<double> mean, m2;
  long count = 0;

  explicit Normalizer(std::size_t dim = 0)
      : mean(dim, 0.0), m2(dim, 0.0) {}

  void observe(std::span<const double> x);
  double sd(std::size_t i) const;
  void apply(std::span<double> x) const;  // in place
};

struct GaussianPolicyOutput {
  std::vector<double> mean;
  std::vector<double> log_std;  // clamped
  std::vector<double> raw;      // mean + sigma .* eps
  AllocationDecision decision;
  double log_prob = 0.0;  // of the raw Gaussian sample, no projection term
};

// --- pure loss/gradient kernels (finite-difference-checkable) ---

// Squared-form temperature loss (1/M) sum (-beta*logpi - beta*h_bar)^2 and
// its gradient in beta.
double temperature_loss(double beta, std::span<const double> log_probs,
                        double h_bar);
double temperature_loss_grad(double beta, std::span<const double> log_probs,
                             double h_bar);

struct ActorEval {
  nn::Matrix mean;     // M x d
  nn::Matrix log_std;  // M x d, clamped
  nn::Matrix raw;      // M x d actions
  nn::Vector log_prob; // M
};

// Forward the actor on normalized states with fixed noise eps (M x d);
// log-std clamping applied.
ActorEval actor_sample(const nn::MlpNet& actor, const nn::Matrix& states,
                       const nn::Matrix& eps, double log_std_min,
                       double log_std_max);

struct ActorGrad {
  double loss = 0.0;  // (1/M) sum (beta*logpi - min Q)
  std::vector<nn::Layer> grads;
};

// Gradient of E[beta*logpi - min(Q1,Q2)] through the reparameterized sample.
ActorGrad actor_loss_grad(const nn::MlpNet& actor, const nn::MlpNet& q1,
                          const nn::MlpNet& q2, const nn::Matrix& states,
                          const nn::Matrix& eps, double beta,
                          double log_std_min, double log_std_max);

// Targets y = r + gamma * (min(Qt1,Qt2)(s',a') - beta*logpi'(a'|s')) with a'
// drawn from the current actor via eps_next.
nn::Vector critic_targets(const nn::MlpNet& actor, const nn::MlpNet& tq1,
                          const nn::MlpNet& tq2, const nn::Matrix& next_states,
                          const nn::Matrix& eps_next,
                          const nn::Vector& rewards, double gamma, double beta,
                          double log_std_min, double log_std_max);

struct CriticGrad {
  double loss1 = 0.0, loss2 = 0.0;  // (1/M) sum (Q_b - y)^2
  std::vector<nn::Layer> g1, g2;
};

CriticGrad critic_loss_grad(const nn::MlpNet& q1, const nn::MlpNet& q2,
                            const nn::Matrix& states, const nn::Matrix& actions,
                            const nn::Vector& targets);

void polyak_update(const nn::MlpNet& src, nn::MlpNet& dst, double tau);

struct TrainResult {
  std::vector<double> episode_mean_reward;  // unscaled, per episode
  long update_iterations = 0;
  long skipped_updates = 0;  // buffer not yet filled to one batch
};

struct EvalResult {
  std::vector<double> slot_reward;       // unscaled
  std::vector<double> slot_mean_backlog;
  double mean_reward = 0.0;
};

class SacAgent {
 public:
  SacAgent(SacConfig cfg, int state_dim, int act_dim, std::uint64_t seed);

  // One action; stochastic=false uses the mean (testing-stage policy).
  GaussianPolicyOutput act(std::span<const double> state, bool stochastic);

  // Full training loop: episodes of slots_per_episode slots; every
  // update_every_episodes episodes, update_iters gradient iterations.
  TrainResult train(env::Environment& e, double v_weight,
                    const objective::ObjectiveConfig& ocfg);

  // Deterministic rollout with the mean action; no critic evaluation.
  EvalResult evaluate(env::Environment& e, double v_weight,
                      const objective::ObjectiveConfig& ocfg, long slots);

  // One gradient iteration on a sampled minibatch (no-op while the buffer is
  // smaller than one batch; returns false in that case).
  bool update_step();

  void store(Transition t) { replay_.push(std::move(t)); }

  const SacConfig& config() const { return cfg_; }
  int state_dim() const { return state_dim_; }
  int act_dim() const { return act_dim_; }
  double beta() const { return std::exp(log_beta_); }
  double log_beta() const { return log_beta_; }
  double entropy_target() const {
    return cfg_.entropy_target_sign * static_cast<double>(act_dim_);
  }
  const nn::MlpNet& actor() const { return actor_; }
  const nn::MlpNet& critic1() const { return q1_; }
  const nn::MlpNet& critic2() const { return q2_; }
  const nn::MlpNet& target1() const { return tq1_; }
  const nn::MlpNet& target2() const { return tq2_; }
  const ReplayBuffer& replay() const { return replay_; }
  Normalizer& normalizer() { return norm_; }
  const Normalizer& normalizer() const { return norm_; }
  long critic_evals() const { return critic_evals_; }
  std::mt19937_64& rng() { return rng_; }

  void save(const std::string& path) const;
  static SacAgent load(const std::string& path);

 private:
  nn::Matrix normalized_batch(const std::vector<std::size_t>& idx,
                              bool next) const;

  SacConfig cfg_;
  int state_dim_ = 0, act_dim_ = 0;
  std::mt19937_64 rng_;
  nn::MlpNet actor_, q1_, q2_, tq1_, tq2_;
  nn::Adam opt_actor_, opt_q1_, opt_q2_;
  nn::AdamScalar opt_beta_;
  double log_beta_ = 0.0;
  ReplayBuffer replay_;
  Normalizer norm_;
  long update_iter_ = 0;
  long critic_evals_ = 0;
};

// Policy-interface adapter over a trained agent (mean action).
class SacPolicy final : public policies::Policy {
 public:
  explicit SacPolicy(SacAgent* agent) : agent_(agent) {}
  AllocationDecision decide(const policies::SlotContext& ctx) override {
    return agent_->act(ctx.e->observe(), /*stochastic=*/false).decision;
  }
  const char* name() const override { return "LySAC"; }

 private:
  SacAgent* agent_;
};

}  // namespace vecsim::sac
