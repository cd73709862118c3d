#include "vecsim/sac.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace vecsim::sac {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

double slot_reward(const env::Environment& e, const AllocationDecision& d,
                   double v_weight, const objective::ObjectiveConfig& ocfg) {
  const auto omegas = objective::slot_omegas(e.config(), e.comm_channel(), d);
  return objective::reward(e.backlog(), e.arrivals().volume, d, omegas,
                           v_weight, e.config(), ocfg);
}

}  // namespace

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[head_] = std::move(t);
  }
  head_ = (head_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(
    std::size_t m, std::mt19937_64& rng) const {
  const std::size_t n = data_.size();
  assert(m <= n);
  // Floyd's algorithm: m distinct uniform indices
  std::unordered_set<std::size_t> seen;
  std::vector<std::size_t> out;
  out.reserve(m);
  for (std::size_t j = n - m; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> dist(0, j);
    const std::size_t t = dist(rng);
    if (seen.insert(t).second) {
      out.push_back(t);
    } else {
      seen.insert(j);
      out.push_back(j);
    }
  }
  return out;
}

void Normalizer::observe(std::span<const double> x) {
  assert(x.size() == mean.size());
  ++count;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double delta = x[i] - mean[i];
    mean[i] += delta / static_cast<double>(count);
    m2[i] += delta * (x[i] - mean[i]);
  }
}

double Normalizer::sd(std::size_t i) const {
  if (count < 2) return 1.0;
  const double var = m2[i] / static_cast<double>(count - 1);
  return std::max(std::sqrt(var), 1e-8);
}

void Normalizer::apply(std::span<double> x) const {
  if (count < 2) return;
  for (std::size_t i = 0; i < mean.size(); ++i)
    x[i] = (x[i] - mean[i]) / sd(i);
}

double temperature_loss(double beta, std::span<const double> log_probs,
                        double h_bar) {
  double acc = 0.0;
  for (double lp : log_probs) {
    const double term = -beta * lp - beta * h_bar;
    acc += term * term;
  }
  return acc / static_cast<double>(log_probs.size());
}

double temperature_loss_grad(double beta, std::span<const double> log_probs,
                             double h_bar) {
  double acc = 0.0;
  for (double lp : log_probs) {
    const double u = lp + h_bar;
    acc += u * u;
  }
  return 2.0 * beta * acc / static_cast<double>(log_probs.size());
}

ActorEval actor_sample(const nn::MlpNet& actor, const nn::Matrix& states,
                       const nn::Matrix& eps, double log_std_min,
                       double log_std_max) {
  const Eigen::Index d = eps.cols();
  ActorEval out;
  nn::Matrix y = actor.forward(states);
  out.mean = y.leftCols(d);
  out.log_std = y.rightCols(d).cwiseMax(log_std_min).cwiseMin(log_std_max);
  out.raw = out.mean + out.log_std.array().exp().matrix().cwiseProduct(eps);
  out.log_prob =
      (-0.5 * eps.array().square() - out.log_std.array()).rowwise().sum() -
      0.5 * kLogTwoPi * static_cast<double>(d);
  return out;
}

ActorGrad actor_loss_grad(const nn::MlpNet& actor, const nn::MlpNet& q1,
                          const nn::MlpNet& q2, const nn::Matrix& states,
                          const nn::Matrix& eps, double beta,
                          double log_std_min, double log_std_max) {
  const Eigen::Index m = states.rows();
  const Eigen::Index d = eps.cols();
  const double inv_m = 1.0 / static_cast<double>(m);

  nn::MlpNet::Cache ca;
  nn::Matrix y = actor.forward(states, ca);
  nn::Matrix mu = y.leftCols(d);
  nn::Matrix ls_raw = y.rightCols(d);
  nn::Matrix ls = ls_raw.cwiseMax(log_std_min).cwiseMin(log_std_max);
  // clamp gate: no gradient through saturated log-std outputs
  nn::Matrix gate = ((ls_raw.array() > log_std_min) &&
                     (ls_raw.array() < log_std_max))
                        .cast<double>()
                        .matrix();
  nn::Matrix sigma = ls.array().exp().matrix();
  nn::Matrix a = mu + sigma.cwiseProduct(eps);
  nn::Vector log_prob =
      (-0.5 * eps.array().square() - ls.array()).rowwise().sum() -
      0.5 * kLogTwoPi * static_cast<double>(d);

  nn::Matrix x(m, states.cols() + d);
  x << states, a;
  nn::MlpNet::Cache c1, c2;
  nn::Vector qv1 = q1.forward(x, c1).col(0);
  nn::Vector qv2 = q2.forward(x, c2).col(0);
  nn::Vector sel1 = (qv1.array() <= qv2.array()).cast<double>();
  nn::Vector qmin = qv1.cwiseMin(qv2);

  ActorGrad out;
  out.loss = inv_m * (beta * log_prob.sum() - qmin.sum());

  // dL/d[s,a] through the per-sample minimum critic (critic params untouched)
  auto scratch1 = q1.zero_grads();
  auto scratch2 = q2.zero_grads();
  nn::Matrix dx1 = q1.backward(c1, (-inv_m) * sel1, scratch1);
  nn::Matrix dx2 =
      q2.backward(c2, (-inv_m) * (1.0 - sel1.array()).matrix(), scratch2);
  nn::Matrix da = (dx1 + dx2).rightCols(d);

  nn::Matrix dy(m, 2 * d);
  dy.leftCols(d) = da;
  dy.rightCols(d) = gate.cwiseProduct(
      (da.cwiseProduct(sigma).cwiseProduct(eps).array() - beta * inv_m)
          .matrix());
  out.grads = actor.zero_grads();
  actor.backward(ca, dy, out.grads);
  return out;
}

nn::Vector critic_targets(const nn::MlpNet& actor, const nn::MlpNet& tq1,
                          const nn::MlpNet& tq2, const nn::Matrix& next_states,
                          const nn::Matrix& eps_next,
                          const nn::Vector& rewards, double gamma, double beta,
                          double log_std_min, double log_std_max) {
  ActorEval ae =
      actor_sample(actor, next_states, eps_next, log_std_min, log_std_max);
  nn::Matrix x(next_states.rows(), next_states.cols() + eps_next.cols());
  x << next_states, ae.raw;
  nn::Vector t1 = tq1.forward(x).col(0);
  nn::Vector t2 = tq2.forward(x).col(0);
  return rewards +
         gamma * (t1.cwiseMin(t2) - beta * ae.log_prob);
}

CriticGrad critic_loss_grad(const nn::MlpNet& q1, const nn::MlpNet& q2,
                            const nn::Matrix& states, const nn::Matrix& actions,
                            const nn::Vector& targets) {
  const Eigen::Index m = states.rows();
  const double inv_m = 1.0 / static_cast<double>(m);
  nn::Matrix x(m, states.cols() + actions.cols());
  x << states, actions;

  CriticGrad out;
  nn::MlpNet::Cache c1, c2;
  nn::Vector e1 = q1.forward(x, c1).col(0) - targets;
  nn::Vector e2 = q2.forward(x, c2).col(0) - targets;
  out.loss1 = inv_m * e1.squaredNorm();
  out.loss2 = inv_m * e2.squaredNorm();
  out.g1 = q1.zero_grads();
  out.g2 = q2.zero_grads();
  q1.backward(c1, (2.0 * inv_m) * e1, out.g1);
  q2.backward(c2, (2.0 * inv_m) * e2, out.g2);
  return out;
}

void polyak_update(const nn::MlpNet& src, nn::MlpNet& dst, double tau) {
  for (std::size_t k = 0; k < src.layers.size(); ++k) {
    dst.layers[k].w = tau * src.layers[k].w + (1.0 - tau) * dst.layers[k].w;
    dst.layers[k].b = tau * src.layers[k].b + (1.0 - tau) * dst.layers[k].b;
  }
}

SacAgent::SacAgent(SacConfig cfg, int state_dim, int act_dim,
                   std::uint64_t seed)
    : cfg_(std::move(cfg)),
      state_dim_(state_dim),
      act_dim_(act_dim),
      rng_(seed),
      replay_(cfg_.replay_capacity),
      norm_(static_cast<std::size_t>(state_dim)) {
  std::vector<int> aw{state_dim};
  aw.insert(aw.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  aw.push_back(2 * act_dim);
  std::vector<int> cw{state_dim + act_dim};
  cw.insert(cw.end(), cfg_.hidden.begin(), cfg_.hidden.end());
  cw.push_back(1);

  actor_ = nn::MlpNet::create(aw, rng_);
  q1_ = nn::MlpNet::create(cw, rng_);
  q2_ = nn::MlpNet::create(cw, rng_);
  tq1_ = q1_;  // targets start as exact copies
  tq2_ = q2_;

  opt_actor_.lr = cfg_.lr_actor;
  opt_q1_.lr = cfg_.lr_critic;
  opt_q2_.lr = cfg_.lr_critic;
  opt_beta_.lr = cfg_.lr_temp;
  opt_actor_.init(actor_);
  opt_q1_.init(q1_);
  opt_q2_.init(q2_);
  log_beta_ = cfg_.init_log_beta;
}

GaussianPolicyOutput SacAgent::act(std::span<const double> state,
                                   bool stochastic) {
  assert(static_cast<int>(state.size()) == state_dim_);
  std::vector<double> x(state.begin(), state.end());
  norm_.apply(x);
  nn::Matrix s(1, state_dim_);
  for (int i = 0; i < state_dim_; ++i) s(0, i) = x[static_cast<std::size_t>(i)];

  nn::Matrix eps = nn::Matrix::Zero(1, act_dim_);
  if (stochastic) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < act_dim_; ++i) eps(0, i) = gauss(rng_);
  }
  ActorEval ae =
      actor_sample(actor_, s, eps, cfg_.log_std_min, cfg_.log_std_max);

  GaussianPolicyOutput out;
  out.mean.assign(ae.mean.data(), ae.mean.data() + act_dim_);
  out.log_std.assign(ae.log_std.data(), ae.log_std.data() + act_dim_);
  out.raw.assign(ae.raw.data(), ae.raw.data() + act_dim_);
  for (double v : out.raw)
    if (!std::isfinite(v))
      throw std::runtime_error("actor produced non-finite action");
  const std::size_t n_types = static_cast<std::size_t>((act_dim_ - 1) / 4);
  out.decision = project_raw_action(out.raw, n_types);
  out.log_prob = ae.log_prob(0);
  return out;
}

nn::Matrix SacAgent::normalized_batch(const std::vector<std::size_t>& idx,
                                      bool next) const {
  nn::Matrix s(static_cast<Eigen::Index>(idx.size()), state_dim_);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto& src =
        next ? replay_.at(idx[r]).s_next : replay_.at(idx[r]).s;
    std::vector<double> x = src;
    norm_.apply(x);
    for (int c = 0; c < state_dim_; ++c)
      s(static_cast<Eigen::Index>(r), c) = x[static_cast<std::size_t>(c)];
  }
  return s;
}

bool SacAgent::update_step() {
  const std::size_t m = static_cast<std::size_t>(cfg_.batch_size);
  if (replay_.size() < m) return false;

  const auto idx = replay_.sample_indices(m, rng_);
  nn::Matrix s = normalized_batch(idx, false);
  nn::Matrix s2 = normalized_batch(idx, true);
  nn::Matrix a(static_cast<Eigen::Index>(m), act_dim_);
  nn::Vector r(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto& t = replay_.at(idx[i]);
    for (int c = 0; c < act_dim_; ++c)
      a(static_cast<Eigen::Index>(i), c) = t.a_raw[static_cast<std::size_t>(c)];
    r(static_cast<Eigen::Index>(i)) = t.r;
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  nn::Matrix eps(static_cast<Eigen::Index>(m), act_dim_);
  nn::Matrix eps2(static_cast<Eigen::Index>(m), act_dim_);
  for (Eigen::Index i = 0; i < eps.rows(); ++i)
    for (Eigen::Index j = 0; j < eps.cols(); ++j) {
      eps(i, j) = gauss(rng_);
      eps2(i, j) = gauss(rng_);
    }

  // 1. temperature (squared-form loss, parameters kept as log-beta)
  ActorEval ae =
      actor_sample(actor_, s, eps, cfg_.log_std_min, cfg_.log_std_max);
  const double g_beta = temperature_loss_grad(
      beta(), {ae.log_prob.data(), static_cast<std::size_t>(m)},
      entropy_target());
  opt_beta_.step(log_beta_, g_beta * beta());

  // 2. actor
  ActorGrad ag = actor_loss_grad(actor_, q1_, q2_, s, eps, beta(),
                                 cfg_.log_std_min, cfg_.log_std_max);
  critic_evals_ += 2 * static_cast<long>(m);
  opt_actor_.step(actor_, ag.grads);

  // 3. critics
  nn::Vector y = critic_targets(actor_, tq1_, tq2_, s2, eps2, r, cfg_.gamma,
                                beta(), cfg_.log_std_min, cfg_.log_std_max);
  critic_evals_ += 2 * static_cast<long>(m);
  CriticGrad cg = critic_loss_grad(q1_, q2_, s, a, y);
  critic_evals_ += 2 * static_cast<long>(m);
  opt_q1_.step(q1_, cg.g1);
  opt_q2_.step(q2_, cg.g2);

  ++update_iter_;
  if (update_iter_ % cfg_.target_sync_every == 0) {
    polyak_update(q1_, tq1_, cfg_.tau);
    polyak_update(q2_, tq2_, cfg_.tau);
  }
  return true;
}

TrainResult SacAgent::train(env::Environment& e, double v_weight,
                            const objective::ObjectiveConfig& ocfg) {
  TrainResult res;
  for (long k = 1; k <= cfg_.episodes; ++k) {
    e.reset();
    double ep_sum = 0.0;
    for (long t = 0; t < cfg_.slots_per_episode; ++t) {
      std::vector<double> s = e.observe();
      norm_.observe(s);
      GaussianPolicyOutput out = act(s, /*stochastic=*/true);
      const double rew = slot_reward(e, out.decision, v_weight, ocfg);
      e.advance(out.decision);
      store({std::move(s), out.raw, out.decision, rew * cfg_.reward_scale,
             e.observe()});
      ep_sum += rew;
    }
    res.episode_mean_reward.push_back(
        ep_sum / static_cast<double>(cfg_.slots_per_episode));
    if (cfg_.updates_enabled && k % cfg_.update_every_episodes == 0) {
      for (int it = 0; it < cfg_.update_iters; ++it) {
        if (update_step())
          ++res.update_iterations;
        else
          ++res.skipped_updates;
      }
    }
  }
  return res;
}

EvalResult SacAgent::evaluate(env::Environment& e, double v_weight,
                              const objective::ObjectiveConfig& ocfg,
                              long slots) {
  EvalResult res;
  e.reset();
  double acc = 0.0;
  for (long t = 0; t < slots; ++t) {
    GaussianPolicyOutput out = act(e.observe(), /*stochastic=*/false);
    const double rew = slot_reward(e, out.decision, v_weight, ocfg);
    res.slot_reward.push_back(rew);
    double q = 0.0;
    for (double b : e.backlog()) q += b;
    res.slot_mean_backlog.push_back(q /
                                    static_cast<double>(e.backlog().size()));
    acc += rew;
    e.advance(out.decision);
  }
  res.mean_reward = slots > 0 ? acc / static_cast<double>(slots) : 0.0;
  return res;
}

// --- checkpointing -----------------------------------------------------

namespace {

constexpr char kMagic[8] = {'V', 'S', 'A', 'C', 'C', 'K', 'P', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

void put_vec(std::ostream& os, const std::vector<double>& v) {
  put<std::uint64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}
std::vector<double> get_vec(std::istream& is) {
  std::vector<double> v(get<std::uint64_t>(is));
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  return v;
}

void put_layers(std::ostream& os, const std::vector<nn::Layer>& layers) {
  put<std::uint64_t>(os, layers.size());
  for (const auto& l : layers) {
    put<std::int64_t>(os, l.w.rows());
    put<std::int64_t>(os, l.w.cols());
    os.write(reinterpret_cast<const char*>(l.w.data()),
             static_cast<std::streamsize>(l.w.size() * sizeof(double)));
    os.write(reinterpret_cast<const char*>(l.b.data()),
             static_cast<std::streamsize>(l.b.size() * sizeof(double)));
  }
}
std::vector<nn::Layer> get_layers(std::istream& is) {
  std::vector<nn::Layer> layers(get<std::uint64_t>(is));
  for (auto& l : layers) {
    const auto rows = get<std::int64_t>(is);
    const auto cols = get<std::int64_t>(is);
    l.w.resize(rows, cols);
    l.b.resize(cols);
    is.read(reinterpret_cast<char*>(l.w.data()),
            static_cast<std::streamsize>(l.w.size() * sizeof(double)));
    is.read(reinterpret_cast<char*>(l.b.data()),
            static_cast<std::streamsize>(l.b.size() * sizeof(double)));
  }
  return layers;
}

void put_net(std::ostream& os, const nn::MlpNet& net) {
  put_layers(os, net.layers);
}
nn::MlpNet get_net(std::istream& is) {
  nn::MlpNet n;
  n.layers = get_layers(is);
  return n;
}

void put_adam(std::ostream& os, const nn::Adam& a) {
  put(os, a.lr);
  put(os, a.t);
  put_layers(os, a.m);
  put_layers(os, a.v);
}
void get_adam(std::istream& is, nn::Adam& a) {
  a.lr = get<double>(is);
  a.t = get<long>(is);
  a.m = get_layers(is);
  a.v = get_layers(is);
}

void put_cfg(std::ostream& os, const SacConfig& c) {
  put<std::uint64_t>(os, c.hidden.size());
  for (int h : c.hidden) put<std::int32_t>(os, h);
  put(os, c.gamma);
  put(os, c.lr_actor);
  put(os, c.lr_critic);
  put(os, c.lr_temp);
  put<std::int32_t>(os, c.batch_size);
  put<std::int64_t>(os, c.episodes);
  put<std::int64_t>(os, c.slots_per_episode);
  put<std::int32_t>(os, c.update_every_episodes);
  put<std::int32_t>(os, c.update_iters);
  put<std::int32_t>(os, c.target_sync_every);
  put(os, c.tau);
  put<std::int32_t>(os, c.entropy_target_sign);
  put(os, c.reward_scale);
  put<std::uint64_t>(os, c.replay_capacity);
  put(os, c.log_std_min);
  put(os, c.log_std_max);
  put(os, c.init_log_beta);
  put<std::int32_t>(os, c.updates_enabled ? 1 : 0);
  put<std::int64_t>(os, c.eval_slots);
}
SacConfig get_cfg(std::istream& is) {
  SacConfig c;
  c.hidden.resize(get<std::uint64_t>(is));
  for (auto& h : c.hidden) h = get<std::int32_t>(is);
  c.gamma = get<double>(is);
  c.lr_actor = get<double>(is);
  c.lr_critic = get<double>(is);
  c.lr_temp = get<double>(is);
  c.batch_size = get<std::int32_t>(is);
  c.episodes = get<std::int64_t>(is);
  c.slots_per_episode = get<std::int64_t>(is);
  c.update_every_episodes = get<std::int32_t>(is);
  c.update_iters = get<std::int32_t>(is);
  c.target_sync_every = get<std::int32_t>(is);
  c.tau = get<double>(is);
  c.entropy_target_sign = get<std::int32_t>(is);
  c.reward_scale = get<double>(is);
  c.replay_capacity = get<std::uint64_t>(is);
  c.log_std_min = get<double>(is);
  c.log_std_max = get<double>(is);
  c.init_log_beta = get<double>(is);
  c.updates_enabled = get<std::int32_t>(is) != 0;
  c.eval_slots = get<std::int64_t>(is);
  return c;
}

}  // namespace

void SacAgent::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open checkpoint for write: " + path);
  os.write(kMagic, sizeof(kMagic));
  put_cfg(os, cfg_);
  put<std::int32_t>(os, state_dim_);
  put<std::int32_t>(os, act_dim_);
  put(os, log_beta_);
  put(os, update_iter_);
  put_net(os, actor_);
  put_net(os, q1_);
  put_net(os, q2_);
  put_net(os, tq1_);
  put_net(os, tq2_);
  put_adam(os, opt_actor_);
  put_adam(os, opt_q1_);
  put_adam(os, opt_q2_);
  put(os, opt_beta_.lr);
  put(os, opt_beta_.t);
  put(os, opt_beta_.m);
  put(os, opt_beta_.v);
  put(os, norm_.count);
  put_vec(os, norm_.mean);
  put_vec(os, norm_.m2);
  std::ostringstream rs;
  rs << rng_;
  const std::string rstate = rs.str();
  put<std::uint64_t>(os, rstate.size());
  os.write(rstate.data(), static_cast<std::streamsize>(rstate.size()));
  if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

SacAgent SacAgent::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  SacConfig cfg = get_cfg(is);
  const int sdim = get<std::int32_t>(is);
  const int adim = get<std::int32_t>(is);
  SacAgent a(cfg, sdim, adim, 0);
  a.log_beta_ = get<double>(is);
  a.update_iter_ = get<long>(is);
  a.actor_ = get_net(is);
  a.q1_ = get_net(is);
  a.q2_ = get_net(is);
  a.tq1_ = get_net(is);
  a.tq2_ = get_net(is);
  get_adam(is, a.opt_actor_);
  get_adam(is, a.opt_q1_);
  get_adam(is, a.opt_q2_);
  a.opt_beta_.lr = get<double>(is);
  a.opt_beta_.t = get<long>(is);
  a.opt_beta_.m = get<double>(is);
  a.opt_beta_.v = get<double>(is);
  a.norm_.count = get<long>(is);
  a.norm_.mean = get_vec(is);
  a.norm_.m2 = get_vec(is);
  std::string rstate(get<std::uint64_t>(is), '\0');
  is.read(rstate.data(), static_cast<std::streamsize>(rstate.size()));
  if (!is) throw std::runtime_error("truncated checkpoint: " + path);
  std::istringstream rs(rstate);
  rs >> a.rng_;
  return a;
}

}  // namespace vecsim::sac
