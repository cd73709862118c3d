#include "vecsim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vecsim::policies {

const char* kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::EAEO: return "EAEO";
    case PolicyKind::Greedy: return "Greedy";
    case PolicyKind::PSO: return "PSO";
    case PolicyKind::HGRA: return "HGRA";
    case PolicyKind::HGGA: return "HGGA";
    case PolicyKind::LySAC: return "LySAC";
  }
  return "?";
}

PolicyKind parse_kind(const std::string& tag) {
  if (tag == "eaeo" || tag == "EAEO") return PolicyKind::EAEO;
  if (tag == "greedy" || tag == "Greedy") return PolicyKind::Greedy;
  if (tag == "pso" || tag == "PSO") return PolicyKind::PSO;
  if (tag == "hgra" || tag == "HGRA") return PolicyKind::HGRA;
  if (tag == "hgga" || tag == "HGGA") return PolicyKind::HGGA;
  if (tag == "lysac" || tag == "LySAC" || tag == "sac")
    return PolicyKind::LySAC;
  throw std::invalid_argument("unknown policy: " + tag);
}

double slot_objective(const SlotContext& ctx, const AllocationDecision& d) {
  const auto& sys = ctx.e->config();
  const auto omegas = objective::slot_omegas(sys, ctx.e->comm_channel(), d);
  const double p2 = objective::p2_objective(
      ctx.e->backlog(), ctx.e->arrivals().volume, d, ctx.v_weight, sys,
      *ctx.ocfg);
  return p2 + ctx.ocfg->p_e * objective::latency_penalty(omegas, sys);
}

AllocationDecision eaeo_decide(std::size_t n_types) {
  AllocationDecision d;
  d.alpha.assign(n_types, 1.0 / static_cast<double>(n_types));
  d.phi.assign(n_types, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  return d;
}

AllocationDecision greedy_decide(std::span<const double> backlog) {
  const std::size_t n = backlog.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (backlog[i] > backlog[best]) best = i;
  AllocationDecision d;
  d.alpha.assign(n, 0.0);
  d.alpha[best] = 1.0;
  d.phi.assign(n, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  return d;
}

AllocationDecision EaeoPolicy::decide(const SlotContext& ctx) {
  return eaeo_decide(ctx.e->config().num_types());
}

AllocationDecision GreedyPolicy::decide(const SlotContext& ctx) {
  return greedy_decide(ctx.e->backlog());
}

AllocationDecision PsoPolicy::decide(const SlotContext& ctx) {
  const std::size_t n = ctx.e->config().num_types();
  const std::size_t dim = raw_action_dim(n);
  const int p_count = cfg_.swarm_size;
  std::uniform_real_distribution<double> init(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::vector<double>> x(p_count, std::vector<double>(dim));
  std::vector<std::vector<double>> vel(p_count,
                                       std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> pbest = x;
  std::vector<double> pbest_j(p_count,
                              std::numeric_limits<double>::infinity());
  std::vector<double> gbest(dim, 0.0);
  double gbest_j = std::numeric_limits<double>::infinity();

  auto eval = [&](const std::vector<double>& raw) {
    return slot_objective(ctx, project_raw_action(raw, n));
  };

  for (int p = 0; p < p_count; ++p) {
    for (auto& c : x[p]) c = init(rng_);
    pbest[p] = x[p];
    pbest_j[p] = eval(x[p]);
    if (pbest_j[p] < gbest_j) {
      gbest_j = pbest_j[p];
      gbest = x[p];
    }
  }

  for (int it = 0; it < cfg_.iterations; ++it) {
    for (int p = 0; p < p_count; ++p) {
      for (std::size_t k = 0; k < dim; ++k) {
        vel[p][k] = cfg_.inertia * vel[p][k] +
                    cfg_.c1 * unit(rng_) * (pbest[p][k] - x[p][k]) +
                    cfg_.c2 * unit(rng_) * (gbest[k] - x[p][k]);
        x[p][k] += vel[p][k];
      }
      const double j = eval(x[p]);
      if (j < pbest_j[p]) {
        pbest_j[p] = j;
        pbest[p] = x[p];
      }
      if (j < gbest_j) {
        gbest_j = j;
        gbest = x[p];
      }
    }
  }
  return project_raw_action(gbest, n);
}

namespace {

// All length-k tuples of nonnegative integers summing to denom.
void compositions(int k, int denom, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (k == 1) {
    cur.push_back(denom);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= denom; ++v) {
    cur.push_back(v);
    compositions(k - 1, denom - v, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> simplex_grid(int k, int denom) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  compositions(k, denom, cur, out);
  return out;
}

// Picks an index from energies J: argmin when greedy or temp <= 0, otherwise
// a draw from (1-mix)*softmin(J/temp) + mix*uniform.
std::size_t gibbs_pick(const std::vector<double>& j, const GibbsConfig& cfg,
                       bool greedy, std::mt19937_64& rng) {
  const std::size_t n = j.size();
  std::size_t arg = 0;
  for (std::size_t c = 1; c < n; ++c)
    if (j[c] < j[arg]) arg = c;
  if (greedy || cfg.temperature <= 0.0) return arg;
  std::vector<double> w(n);
  double z = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    w[c] = std::exp(-(j[c] - j[arg]) / cfg.temperature);
    z += w[c];
  }
  const double u = cfg.mix_weight / static_cast<double>(n);
  for (std::size_t c = 0; c < n; ++c)
    w[c] = (1.0 - cfg.mix_weight) * w[c] / z + u;
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  return dist(rng);
}

}  // namespace

AllocationDecision GibbsPolicy::decide(const SlotContext& ctx) {
  const std::size_t n = ctx.e->config().num_types();
  const int denom = cfg_.grid_denom;
  const double inv = 1.0 / static_cast<double>(denom);
  // alpha grid includes a slack coordinate so sum alpha <= 1 stays exact
  const auto alpha_grid = simplex_grid(static_cast<int>(n) + 1, denom);
  const auto phi_grid = simplex_grid(3, denom);

  auto alpha_of = [&](const std::vector<int>& c) {
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = c[i] * inv;
    return a;
  };
  auto phi_of = [&](const std::vector<int>& c) {
    return std::array<double, 3>{c[0] * inv, c[1] * inv, c[2] * inv};
  };

  double total = static_cast<double>(alpha_grid.size());
  for (std::size_t i = 0; i < n; ++i)
    total *= static_cast<double>(phi_grid.size());

  if (total <= static_cast<double>(cfg_.max_exhaustive)) {
    // full enumeration over the mixed-radix candidate index
    const std::size_t count = static_cast<std::size_t>(total);
    std::vector<double> j(count);
    std::vector<AllocationDecision> cand(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::size_t rem = idx;
      AllocationDecision d;
      d.phi.resize(n);
      for (std::size_t i = n; i-- > 0;) {
        d.phi[i] = phi_of(phi_grid[rem % phi_grid.size()]);
        rem /= phi_grid.size();
      }
      d.alpha = alpha_of(alpha_grid[rem]);
      j[idx] = slot_objective(ctx, d);
      cand[idx] = std::move(d);
    }
    return cand[gibbs_pick(j, cfg_, greedy_, rng_)];
  }

  // block-coordinate sweeps from the uniform starting point
  AllocationDecision d = eaeo_decide(n);
  for (int sweep = 0; sweep < cfg_.iterations; ++sweep) {
    {
      std::vector<double> j(alpha_grid.size());
      AllocationDecision trial = d;
      for (std::size_t c = 0; c < alpha_grid.size(); ++c) {
        trial.alpha = alpha_of(alpha_grid[c]);
        j[c] = slot_objective(ctx, trial);
      }
      d.alpha = alpha_of(alpha_grid[gibbs_pick(j, cfg_, greedy_, rng_)]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> j(phi_grid.size());
      AllocationDecision trial = d;
      for (std::size_t c = 0; c < phi_grid.size(); ++c) {
        trial.phi[i] = phi_of(phi_grid[c]);
        j[c] = slot_objective(ctx, trial);
      }
      d.phi[i] = phi_of(phi_grid[gibbs_pick(j, cfg_, greedy_, rng_)]);
    }
  }
  return d;
}

}  // namespace vecsim::policies
