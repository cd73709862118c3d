#include "vecsim/env.hpp"

#include <cassert>
#include <cmath>

namespace vecsim::env {

double SystemConfig::full_cpu_rate(std::size_t i) const {
  double inv_sum = 0.0;
  for (const auto& t : types) inv_sum += 1.0 / t.cycles_per_bit;
  return service_scale * (1.0 / types[i].cycles_per_bit) / inv_sum;
}

double SystemConfig::t_serv() const {
  return dsrc_u * std::pow(r_dsrc, -dsrc_tail_exp);
}

double SystemConfig::default_a_max(std::size_t i) const {
  const auto& t = types[i];
  return t.lambda * t.task_size + 6.0 * std::sqrt(t.lambda) * t.task_size;
}

ArrivalBatch sample_arrivals(const std::vector<TaskTypeSpec>& specs,
                             std::mt19937_64& rng) {
  ArrivalBatch batch;
  batch.counts.reserve(specs.size());
  batch.volume.reserve(specs.size());
  for (const auto& s : specs) {
    long n = 0;
    if (s.lambda > 0.0) {
      std::poisson_distribution<long> dist(s.lambda);
      n = dist(rng);
    }
    batch.counts.push_back(n);
    batch.volume.push_back(static_cast<double>(n) * s.task_size);
  }
  return batch;
}

ChannelSample sample_channel(const SystemConfig& cfg, std::mt19937_64& rng) {
  ChannelSample ch;
  std::gamma_distribution<double> gamma(cfg.nakagami_m, 1.0 / cfg.nakagami_m);
  ch.zeta = gamma(rng);
  ch.gamma_sinr = cfg.gamma_sinr;
  ch.t_serv = cfg.t_serv();
  return ch;
}

QueueState step_queues(const QueueState& q, const ArrivalBatch& arrivals,
                       const AllocationDecision& decision,
                       const SystemConfig& sys) {
  QueueState next;
  next.slot = q.slot + 1;
  next.backlog.resize(q.backlog.size());
  for (std::size_t i = 0; i < q.backlog.size(); ++i) {
    const double service = decision.alpha[i] * sys.full_cpu_rate(i);
    next.backlog[i] =
        std::max(q.backlog[i] + arrivals.volume[i] - service, 0.0);
  }
  return next;
}

Environment::Environment(SystemConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), rng_(seed) {
  reset();
}

void Environment::reset() {
  const std::size_t n = cfg_.num_types();
  channel_ = sample_channel(cfg_, rng_);  // zeta held for the whole episode
  queues_.backlog.assign(n, 0.0);
  queues_.slot = 0;
  arrivals_ = sample_arrivals(cfg_.types, rng_);
  xi_comm_dsrc_.assign(n, cfg_.r_dsrc);
  xi_comp_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double even_share = cfg_.full_cpu_rate(i) / static_cast<double>(n);
    xi_comp_[i] = {even_share, even_share, even_share};
  }
}

std::vector<double> Environment::observe() const {
  const std::size_t n = cfg_.num_types();
  std::vector<double> s;
  s.reserve(6 * n);
  for (std::size_t i = 0; i < n; ++i) s.push_back(arrivals_.volume[i]);
  for (std::size_t i = 0; i < n; ++i) s.push_back(queues_.backlog[i]);
  for (std::size_t i = 0; i < n; ++i) {
    s.push_back(xi_comm_dsrc_[i]);
    s.push_back(xi_comp_[i][static_cast<std::size_t>(snc::Tech::cv2i)]);
    s.push_back(xi_comp_[i][static_cast<std::size_t>(snc::Tech::mmw)]);
    s.push_back(xi_comp_[i][static_cast<std::size_t>(snc::Tech::dsrc)]);
  }
  return s;
}

double Environment::mmwave_capacity() const {
  return snc::mmwave_rate(channel_.zeta, channel_.gamma_sinr,
                          cfg_.bandwidth_mhz, cfg_.distance_m,
                          cfg_.path_loss_exp);
}

snc::CommChannel Environment::comm_channel() const {
  return {mmwave_capacity(), cfg_.r_dsrc, channel_.t_serv, cfg_.r_cv2i};
}

void Environment::advance(const AllocationDecision& decision) {
  assert(decision.num_types() == cfg_.num_types());
  queues_ = step_queues(queues_, arrivals_, decision, cfg_);
  arrivals_ = sample_arrivals(cfg_.types, rng_);

  const std::size_t n = cfg_.num_types();
  std::vector<double> rho(n), sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = cfg_.types[i].rho;
    sigma[i] = cfg_.types[i].sigma;
  }
  snc::CommChannel ch{mmwave_capacity(), cfg_.r_dsrc, channel_.t_serv,
                      cfg_.r_cv2i};
  for (std::size_t i = 0; i < n; ++i) {
    xi_comm_dsrc_[i] =
        snc::comm_envelope(snc::Tech::dsrc, i, decision.phi, rho, sigma, ch)
            .xi;
    const double cpu_rate = decision.alpha[i] * cfg_.full_cpu_rate(i);
    for (snc::Tech g : snc::kAllTechs) {
      xi_comp_[i][static_cast<std::size_t>(g)] =
          snc::comp_envelope(g, cpu_rate, decision.phi[i], rho[i], sigma[i])
              .xi;
    }
  }
}

}  // namespace vecsim::env
