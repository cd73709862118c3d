#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

// Stochastic-network-calculus layer: affine service envelopes for every
// (technology, role) pair, the MGF delay-violation bound and its closed-form
// inversion. Everything here is a pure function over value inputs.
namespace vecsim::snc {

enum class Tech { mmw = 0, dsrc = 1, cv2i = 2 };
enum class Role { comm, comp };

constexpr std::array<Tech, 3> kAllTechs{Tech::mmw, Tech::dsrc, Tech::cv2i};

const char* tech_name(Tech g);

// Affine service envelope beta(s1,s2) = xi*(s2-s1) - eta.
// xi may go negative for degenerate allocations (leftover service exhausted);
// callers must check `valid` before feeding it to the delay bound.
struct ServiceEnvelope {
  double xi = 0.0;   // Mbit/slot
  double eta = 0.0;  // Mbit
  Role role = Role::comm;
  Tech tech = Tech::cv2i;
  bool valid = true;  // false iff xi <= 0
};

// Shannon rate of the mmWave link, Mbit/slot.
double mmwave_rate(double zeta, double gamma_sinr, double bandwidth_mhz,
                   double distance_m, double path_loss_exp);

// Static per-technology channel constants needed by the comm envelopes.
struct CommChannel {
  double beta_mmw = 0.0;  // current mmWave rate, Mbit/slot
  double r_dsrc = 0.0;    // DSRC peak rate, Mbit/slot
  double t_serv = 0.0;    // DSRC mean access delay, slots
  double r_cv2i = 0.0;    // C-V2I reserved rate, Mbit/slot
};

// Leftover communication service envelope of technology `g` for type `i`.
// `phi` is one row of 3 offload fractions per type, `rho`/`sigma` the arrival
// envelopes; competitors are all types j != i.
ServiceEnvelope comm_envelope(Tech g, std::size_t i,
                              std::span<const std::array<double, 3>> phi,
                              std::span<const double> rho,
                              std::span<const double> sigma,
                              const CommChannel& ch);

// Leftover computing service envelope of technology `g` for type `i`.
// `cpu_rate` is the allocated CPU service f_E*alpha_i/w_i in Mbit/slot.
ServiceEnvelope comp_envelope(Tech g, double cpu_rate,
                              const std::array<double, 3>& phi_i, double rho_i,
                              double sigma_i);

struct DelayBoundInputs {
  double xi_comm = 0.0;   // Mbit/slot
  double eta_comm = 0.0;  // Mbit
  double xi_comp = 0.0;   // Mbit/slot
  double eta_comp = 0.0;  // Mbit
  double rho = 0.0;       // Mbit/slot
  double sigma = 0.0;     // Mbit
  double phi = 0.0;       // offload fraction through this technology
  double theta = 0.0;     // MGF parameter, 1/Mbit
  double eps = 0.0;       // target violation probability
};

// True iff both services strictly dominate the offered load phi*rho, which is
// the regime where the bound and its inversion are meaningful.
bool regime_valid(const DelayBoundInputs& in);

// Chernoff/MGF upper bound on P(W >= omega). Not a probability mass: may
// exceed 1 for small omega. Evaluated in the log domain throughout.
double violation_bound(const DelayBoundInputs& in, double omega);

struct DelayResult {
  double omega = 0.0;        // slots
  bool regime_ok = true;     // false => omega meaningless
  bool slack_clamped = false;  // closed form was negative, clamped to 0
};

// Closed-form omega solving violation_bound(omega) = eps, branch selected by
// min(xi_comm, xi_comp). Never returns NaN: out-of-regime inputs yield
// regime_ok = false.
DelayResult closed_form_delay(const DelayBoundInputs& in);

struct LatencyCheck {
  bool ok = false;
  double margin = 0.0;  // t_max - max omega; -inf when a regime was violated
};

// Low-latency constraint: max over the three technologies' bounds <= t_max.
LatencyCheck max_delay_check(const std::array<DelayResult, 3>& omegas,
                             double t_max);

}  // namespace vecsim::snc
