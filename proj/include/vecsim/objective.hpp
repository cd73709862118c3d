#pragma once

#include <array>
#include <span>
#include <vector>

#include "vecsim/allocation.hpp"
#include "vecsim/env.hpp"
#include "vecsim/snc.hpp"

namespace vecsim::objective {

// Pricing and CPU-power constants of the utility model.
struct ObjectiveConfig {
  double c_comm = 500.0;       // dollars per Mbit offloaded via C-V2I
  double c_comp = 1000.0;      // dollars per W
  double w1 = 0.5;             // computation weight
  double w2 = 0.5;             // communication weight
  double f_e_ghz = 6.0e4;      // total CPU frequency (literal, for DVFS)
  double n_cores = 10.0;
  double kappa_base_ghz = 400.0;  // kappa = 1/(kappa_base)^3
  double p_e = 1.0e6;          // latency-violation penalty weight
};

struct UtilityBreakdown {
  double comm = 0.0;
  double comp = 0.0;
  double total = 0.0;  // w1*comp + w2*comm
};

// Charges for C-V2I offloading: c_comm * sum_i phi_i^cv2i * a_i.
double comm_utility(const AllocationDecision& decision,
                    std::span<const double> arrival_volume, double c_comm);

// DVFS power cost: n_cores * c_comp * kappa * (f_E * sum(alpha) / n_cores)^3.
double comp_utility(const AllocationDecision& decision,
                    const ObjectiveConfig& cfg);

// Per-core DVFS power in W at the given total CPU share.
double per_core_power(double alpha_sum, const ObjectiveConfig& cfg);

UtilityBreakdown system_utility(const AllocationDecision& decision,
                                std::span<const double> arrival_volume,
                                const ObjectiveConfig& cfg);

// Per-slot drift surrogate: sum_i q_i*a_i - sum_i q_i * f_E*alpha_i/w_i.
double drift_term(std::span<const double> backlog,
                  std::span<const double> arrival_volume,
                  const AllocationDecision& decision,
                  const env::SystemConfig& sys);

// Drift bound B = 1/2 * sum_i (a_max_i^2 - (f_E/w_i)^2), reproduced verbatim;
// may be negative under this scaling (diagnostic only, not used in control).
double drift_bound_B(const env::SystemConfig& sys,
                     std::span<const double> a_max);

// Converted per-slot objective of P2: V * drift + F(t).
double p2_objective(std::span<const double> backlog,
                    std::span<const double> arrival_volume,
                    const AllocationDecision& decision, double v_weight,
                    const env::SystemConfig& sys, const ObjectiveConfig& cfg);

using TypeOmegas = std::array<snc::DelayResult, 3>;  // [mmw, dsrc, cv2i]

// Delay upper bounds for every (type, technology) pair under a decision.
std::vector<TypeOmegas> slot_omegas(const env::SystemConfig& sys,
                                    const snc::CommChannel& ch,
                                    const AllocationDecision& decision);

// Regime-violated bounds count as omega_cap slots.
double effective_omega(const snc::DelayResult& r, double omega_cap);

// Total clamped latency penalty: sum_i max(0, max_g omega_i^g - t_max_i).
double latency_penalty(const std::vector<TypeOmegas>& omegas,
                       const env::SystemConfig& sys);

// DRL reward r_t = -V*drift - F(t) - P_e * latency_penalty.
double reward(std::span<const double> backlog,
              std::span<const double> arrival_volume,
              const AllocationDecision& decision,
              const std::vector<TypeOmegas>& omegas, double v_weight,
              const env::SystemConfig& sys, const ObjectiveConfig& cfg);

}  // namespace vecsim::objective
