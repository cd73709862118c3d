#include "vecsim/objective.hpp"

#include <algorithm>
#include <cmath>

namespace vecsim::objective {

double comm_utility(const AllocationDecision& decision,
                    std::span<const double> arrival_volume, double c_comm) {
  const std::size_t cv2i = static_cast<std::size_t>(snc::Tech::cv2i);
  double total = 0.0;
  for (std::size_t i = 0; i < decision.phi.size(); ++i)
    total += decision.phi[i][cv2i] * arrival_volume[i];
  return c_comm * total;
}

double per_core_power(double alpha_sum, const ObjectiveConfig& cfg) {
  const double freq = cfg.f_e_ghz * alpha_sum / cfg.n_cores;
  const double scaled = freq / cfg.kappa_base_ghz;
  return scaled * scaled * scaled;
}

double comp_utility(const AllocationDecision& decision,
                    const ObjectiveConfig& cfg) {
  double alpha_sum = 0.0;
  for (double a : decision.alpha) alpha_sum += a;
  return cfg.n_cores * cfg.c_comp * per_core_power(alpha_sum, cfg);
}

UtilityBreakdown system_utility(const AllocationDecision& decision,
                                std::span<const double> arrival_volume,
                                const ObjectiveConfig& cfg) {
  UtilityBreakdown u;
  u.comm = comm_utility(decision, arrival_volume, cfg.c_comm);
  u.comp = comp_utility(decision, cfg);
  u.total = cfg.w1 * u.comp + cfg.w2 * u.comm;
  return u;
}

double drift_term(std::span<const double> backlog,
                  std::span<const double> arrival_volume,
                  const AllocationDecision& decision,
                  const env::SystemConfig& sys) {
  double d = 0.0;
  for (std::size_t i = 0; i < backlog.size(); ++i) {
    const double service = decision.alpha[i] * sys.full_cpu_rate(i);
    d += backlog[i] * (arrival_volume[i] - service);
  }
  return d;
}

double drift_bound_B(const env::SystemConfig& sys,
                     std::span<const double> a_max) {
  double b = 0.0;
  for (std::size_t i = 0; i < sys.num_types(); ++i) {
    const double full = sys.full_cpu_rate(i);
    b += a_max[i] * a_max[i] - full * full;
  }
  return 0.5 * b;
}

double p2_objective(std::span<const double> backlog,
                    std::span<const double> arrival_volume,
                    const AllocationDecision& decision, double v_weight,
                    const env::SystemConfig& sys, const ObjectiveConfig& cfg) {
  const UtilityBreakdown u = system_utility(decision, arrival_volume, cfg);
  return v_weight * drift_term(backlog, arrival_volume, decision, sys) +
         u.total;
}

std::vector<TypeOmegas> slot_omegas(const env::SystemConfig& sys,
                                    const snc::CommChannel& ch,
                                    const AllocationDecision& decision) {
  const std::size_t n = sys.num_types();
  std::vector<double> rho(n), sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = sys.types[i].rho;
    sigma[i] = sys.types[i].sigma;
  }
  std::vector<TypeOmegas> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double cpu_rate = decision.alpha[i] * sys.full_cpu_rate(i);
    for (snc::Tech g : snc::kAllTechs) {
      const auto comm =
          snc::comm_envelope(g, i, decision.phi, rho, sigma, ch);
      const auto comp =
          snc::comp_envelope(g, cpu_rate, decision.phi[i], rho[i], sigma[i]);
      snc::DelayBoundInputs in;
      in.xi_comm = comm.xi;
      in.eta_comm = comm.eta;
      in.xi_comp = comp.xi;
      in.eta_comp = comp.eta;
      in.rho = rho[i];
      in.sigma = sigma[i];
      in.phi = decision.phi[i][static_cast<std::size_t>(g)];
      in.theta = sys.theta;
      in.eps = sys.types[i].eps;
      out[i][static_cast<std::size_t>(g)] = snc::closed_form_delay(in);
    }
  }
  return out;
}

double effective_omega(const snc::DelayResult& r, double omega_cap) {
  if (!r.regime_ok) return omega_cap;
  return std::min(r.omega, omega_cap);
}

double latency_penalty(const std::vector<TypeOmegas>& omegas,
                       const env::SystemConfig& sys) {
  double pen = 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    double worst = 0.0;
    for (const auto& o : omegas[i])
      worst = std::max(worst, effective_omega(o, sys.omega_cap));
    pen += std::max(0.0, worst - sys.types[i].t_max);
  }
  return pen;
}

double reward(std::span<const double> backlog,
              std::span<const double> arrival_volume,
              const AllocationDecision& decision,
              const std::vector<TypeOmegas>& omegas, double v_weight,
              const env::SystemConfig& sys, const ObjectiveConfig& cfg) {
  return -p2_objective(backlog, arrival_volume, decision, v_weight, sys, cfg) -
         cfg.p_e * latency_penalty(omegas, sys);
}

}  // namespace vecsim::objective
