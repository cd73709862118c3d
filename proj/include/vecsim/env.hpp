#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "vecsim/allocation.hpp"
#include "vecsim/snc.hpp"

namespace vecsim::env {

// Per-type task constants. Rates are Mbit/slot (one slot = 1 ms; the Table's
// Mbps figures are adopted per-slot verbatim), sizes/bursts are Mbit.
struct TaskTypeSpec {
  int id = 0;               // 1..N
  double lambda = 0.0;      // mean tasks per slot
  double task_size = 0.0;   // Mbit per task (d_i)
  double cycles_per_bit = 0.0;  // w_i, GHz/bit as tabulated (only ratios used)
  double t_max = 0.0;       // latency budget, slots
  double rho = 0.0;         // arrival envelope rate, Mbit/slot
  double sigma = 0.0;       // arrival envelope burst, Mbit
  double eps = 0.0;         // delay-violation target
};

struct QueueState {
  std::vector<double> backlog;  // Mbit per type
  long slot = 0;
};

struct ChannelSample {
  double zeta = 1.0;        // mmWave gain amplitude
  double gamma_sinr = 0.0;  // SINR
  double t_serv = 0.0;      // DSRC mean access delay, slots
};

struct ArrivalBatch {
  std::vector<long> counts;    // tasks per type
  std::vector<double> volume;  // Mbit per type, counts * task_size exactly
};

// Channel and CPU constants of the system model.
struct SystemConfig {
  std::vector<TaskTypeSpec> types;
  double bandwidth_mhz = 20.0;
  double gamma_sinr = 10.0;
  double distance_m = 1.0;
  double path_loss_exp = 2.45;
  double nakagami_m = 5.0;
  double r_dsrc = 27.0;      // Mbit/slot
  double r_cv2i = 27.0;      // Mbit/slot
  double dsrc_u = 1.0;       // access-delay constant u
  double dsrc_tail_exp = 1.0;  // Pareto tail exponent
  double service_scale = 100.0;  // sum of full-CPU rates over types, Mbit/slot
  double theta = 0.01;       // MGF parameter, 1/Mbit
  double omega_cap = 1000.0;  // substitute bound when the regime is violated

  std::size_t num_types() const { return types.size(); }
  // Full-CPU service rate of type i (alpha_i = 1), Mbit/slot. The w_i ratios
  // are preserved; the absolute scale comes from service_scale.
  double full_cpu_rate(std::size_t i) const;
  double t_serv() const;  // u * R_dsrc^-tail
  // Default arrival upper bound a_i^max = lambda*d + 6*sqrt(lambda)*d.
  double default_a_max(std::size_t i) const;
};

ArrivalBatch sample_arrivals(const std::vector<TaskTypeSpec>& specs,
                             std::mt19937_64& rng);

ChannelSample sample_channel(const SystemConfig& cfg, std::mt19937_64& rng);

// One Lindley step: q' = [q + a - f_E*alpha/w]^+ per type, slot + 1.
QueueState step_queues(const QueueState& q, const ArrivalBatch& arrivals,
                       const AllocationDecision& decision,
                       const SystemConfig& sys);

// Discrete-time environment. One trajectory per instance; the per-episode
// sampling order is part of the contract: reset() draws zeta then the slot-0
// arrivals; each advance() draws the next slot's arrivals (N Poisson draws in
// type order).
class Environment {
 public:
  Environment(SystemConfig cfg, std::uint64_t seed);

  void reset();

  // Observation s_t = [A_t, Q_t, xi_t], length 6N. Per type the xi block is
  // [xi_comm_dsrc, xi_comp_cv2i, xi_comp_mmw, xi_comp_dsrc].
  std::vector<double> observe() const;

  // Applies the decision: queue update with the current arrivals, then the
  // next slot's arrivals and service coefficients.
  void advance(const AllocationDecision& decision);

  const SystemConfig& config() const { return cfg_; }
  const ArrivalBatch& arrivals() const { return arrivals_; }
  const std::vector<double>& backlog() const { return queues_.backlog; }
  const ChannelSample& channel() const { return channel_; }
  long slot() const { return queues_.slot; }
  double mmwave_capacity() const;  // beta^mmw for the current episode
  snc::CommChannel comm_channel() const;

 private:
  SystemConfig cfg_;
  std::mt19937_64 rng_;
  QueueState queues_;
  ArrivalBatch arrivals_;
  ChannelSample channel_;
  std::vector<double> xi_comm_dsrc_;
  std::vector<std::array<double, 3>> xi_comp_;  // [mmw, dsrc, cv2i] per type
};

}  // namespace vecsim::env
