#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "vecsim/allocation.hpp"
#include "vecsim/env.hpp"
#include "vecsim/objective.hpp"

namespace vecsim::policies {

enum class PolicyKind { EAEO, Greedy, PSO, HGRA, HGGA, LySAC };

const char* kind_name(PolicyKind k);
PolicyKind parse_kind(const std::string& tag);  // throws on unknown tag

// Everything a per-slot decision rule may look at.
struct SlotContext {
  const env::Environment* e = nullptr;
  double v_weight = 0.0;
  const objective::ObjectiveConfig* ocfg = nullptr;
};

// Per-slot energy used by the search baselines: P2 objective plus the
// weighted latency penalty.
double slot_objective(const SlotContext& ctx, const AllocationDecision& d);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual AllocationDecision decide(const SlotContext& ctx) = 0;
  virtual const char* name() const = 0;
};

// Equal allocation, equal offloading: alpha_i = 1/N, phi rows uniform.
AllocationDecision eaeo_decide(std::size_t n_types);

// All CPU to the longest queue (ties to the lowest index), uniform phi rows.
AllocationDecision greedy_decide(std::span<const double> backlog);

class EaeoPolicy final : public Policy {
 public:
  AllocationDecision decide(const SlotContext& ctx) override;
  const char* name() const override { return "EAEO"; }
};

class GreedyPolicy final : public Policy {
 public:
  AllocationDecision decide(const SlotContext& ctx) override;
  const char* name() const override { return "Greedy"; }
};

struct PsoConfig {
  int swarm_size = 30;
  int iterations = 50;
  double inertia = 0.7;
  double c1 = 1.5;
  double c2 = 1.5;
};

// Global-best PSO in the unconstrained logit space; particles are mapped to
// the feasible set through the same softmax projection as the actor.
class PsoPolicy final : public Policy {
 public:
  PsoPolicy(PsoConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}
  AllocationDecision decide(const SlotContext& ctx) override;
  const char* name() const override { return "PSO"; }

 private:
  PsoConfig cfg_;
  std::mt19937_64 rng_;
};

struct GibbsConfig {
  double temperature = 1.0e6;  // energy scale for the softmin
  double mix_weight = 0.2;     // uniform component of the sampling law
  int iterations = 3;          // block sweeps when not exhaustive
  int grid_denom = 4;          // simplex grid step 1/grid_denom
  std::size_t max_exhaustive = 4096;  // full enumeration below this count
};

// HGRA (sample from the Gibbs mixture) / HGGA (greedy argmax) over a
// discretized decision grid. Small instances are enumerated exhaustively;
// larger ones are optimized block-by-block (alpha block, then each phi row).
class GibbsPolicy final : public Policy {
 public:
  GibbsPolicy(GibbsConfig cfg, bool greedy, std::uint64_t seed)
      : cfg_(cfg), greedy_(greedy), rng_(seed) {}
  AllocationDecision decide(const SlotContext& ctx) override;
  const char* name() const override { return greedy_ ? "HGGA" : "HGRA"; }

 private:
  GibbsConfig cfg_;
  bool greedy_;
  std::mt19937_64 rng_;
};

}  // namespace vecsim::policies
