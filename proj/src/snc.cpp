#include "vecsim/snc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vecsim::snc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative perturbation used when xi_comp == xi_comm (the bound's denominator
// vanishes; the limit exists but has no closed form in this formulation).
constexpr double kDegeneracyNudge = 1e-9;

// log(e^x - 1), x > 0.
double log_expm1(double x) {
  if (x > 36.0) return x;
  return std::log(std::expm1(x));
}

// log(1 - e^-x), x > 0.
double log1mexp(double x) {
  if (x < 0.6931471805599453) return std::log(-std::expm1(-x));
  return std::log1p(-std::exp(-x));
}

struct SignedLog {
  double lg;   // log|value|
  int sign;    // -1, 0, +1
};

// log-domain e^{theta*u} - e^{theta*v}.
SignedLog signed_exp_diff(double theta, double u, double v) {
  if (u == v) return {-kInf, 0};
  const double hi = std::max(u, v), lo = std::min(u, v);
  SignedLog r;
  r.lg = theta * hi + log1mexp(theta * (hi - lo));
  r.sign = (u > v) ? 1 : -1;
  return r;
}

}  // namespace

const char* tech_name(Tech g) {
  switch (g) {
    case Tech::mmw: return "mmw";
    case Tech::dsrc: return "dsrc";
    case Tech::cv2i: return "cv2i";
  }
  return "?";
}

double mmwave_rate(double zeta, double gamma_sinr, double bandwidth_mhz,
                   double distance_m, double path_loss_exp) {
  const double snr = zeta * gamma_sinr * std::pow(distance_m, -path_loss_exp);
  // B*log2(1+snr); with B in MHz and one slot as the rate unit this is the
  // Mbit/slot figure directly.
  return bandwidth_mhz * std::log2(1.0 + snr);
}

ServiceEnvelope comm_envelope(Tech g, std::size_t i,
                              std::span<const std::array<double, 3>> phi,
                              std::span<const double> rho,
                              std::span<const double> sigma,
                              const CommChannel& ch) {
  ServiceEnvelope env;
  env.role = Role::comm;
  env.tech = g;
  if (g == Tech::cv2i) {
    // Pre-reserved bandwidth: no competition between types.
    env.xi = ch.r_cv2i;
    env.eta = 0.0;
    env.valid = env.xi > 0.0;
    return env;
  }
  const std::size_t gi = static_cast<std::size_t>(g);
  double comp_rho = 0.0, comp_sigma = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (j == i) continue;
    comp_rho += phi[j][gi] * rho[j];
    comp_sigma += phi[j][gi] * sigma[j];
  }
  if (g == Tech::mmw) {
    env.xi = ch.beta_mmw - comp_rho;
    env.eta = comp_sigma;
  } else {  // dsrc: latency-rate server
    env.xi = ch.r_dsrc - comp_rho;
    env.eta = ch.r_dsrc * ch.t_serv + comp_sigma;
  }
  env.valid = env.xi > 0.0;
  return env;
}

ServiceEnvelope comp_envelope(Tech g, double cpu_rate,
                              const std::array<double, 3>& phi_i, double rho_i,
                              double sigma_i) {
  ServiceEnvelope env;
  env.role = Role::comp;
  env.tech = g;
  const std::size_t gi = static_cast<std::size_t>(g);
  double comp_phi = 0.0;
  for (std::size_t gg = 0; gg < 3; ++gg) {
    if (gg != gi) comp_phi += phi_i[gg];
  }
  env.xi = cpu_rate - comp_phi * rho_i;
  env.eta = comp_phi * sigma_i;
  env.valid = env.xi > 0.0;
  return env;
}

bool regime_valid(const DelayBoundInputs& in) {
  const double load = in.phi * in.rho;
  return in.theta > 0.0 && in.xi_comm > load && in.xi_comp > load;
}

double violation_bound(const DelayBoundInputs& in, double omega) {
  double a = in.xi_comp;  // computing service rate
  double b = in.xi_comm;  // network service rate
  if (std::abs(a - b) <= kDegeneracyNudge * std::max(std::abs(a), std::abs(b)))
    b = a * (1.0 - kDegeneracyNudge) - kDegeneracyNudge;
  const double c = in.phi * in.rho;
  const double th = in.theta;
  const double delta = in.sigma + in.eta_comm + in.eta_comp;

  // prefactor e^{th*delta} / (e^{-th*a} - e^{-th*b})
  const SignedLog pre_den = signed_exp_diff(th, -a, -b);
  // term_k = e^{-th*xi_k*omega} / (e^{th*xi_k} - e^{th*c})
  const SignedLog da = signed_exp_diff(th, a, c);
  const SignedLog db = signed_exp_diff(th, b, c);
  if (pre_den.sign == 0 || da.sign == 0 || db.sign == 0)
    return std::numeric_limits<double>::quiet_NaN();
  const double la = -th * a * omega - da.lg;
  const double lb = -th * b * omega - db.lg;
  const int sa = da.sign, sb = -db.sign;

  // signed sum s = sa*e^la + sb*e^lb in the log domain
  double lsum;
  int ssum;
  const double hi = std::max(la, lb), lo = std::min(la, lb);
  if (sa == sb) {
    lsum = hi + std::log1p(std::exp(lo - hi));
    ssum = sa;
  } else if (la == lb) {
    return 0.0;
  } else {
    lsum = hi + log1mexp(hi - lo);
    ssum = (la > lb) ? sa : sb;
  }
  const double lg = th * delta - pre_den.lg + lsum;
  const double mag = std::exp(lg);
  return (ssum * pre_den.sign > 0) ? mag : -mag;
}

DelayResult closed_form_delay(const DelayBoundInputs& in) {
  DelayResult res;
  double a = in.xi_comp;
  double b = in.xi_comm;
  if (std::abs(a - b) <= kDegeneracyNudge * std::max(std::abs(a), std::abs(b)))
    b = a * (1.0 - kDegeneracyNudge) - kDegeneracyNudge;
  const double xi_min = std::min(a, b);
  const double xi_max = std::max(a, b);
  const double c = in.phi * in.rho;
  const double th = in.theta;
  if (!(th > 0.0) || !(in.eps > 0.0 && in.eps < 1.0) || xi_min <= c ||
      xi_min <= 0.0) {
    res.regime_ok = false;
    res.omega = kInf;
    return res;
  }
  const double delta = in.sigma + in.eta_comm + in.eta_comp;
  // chi = ln[(e^{-th*xi_min} - e^{-th*xi_max}) (e^{th*xi_min} - e^{th*c})]
  //       / (th*xi_min); both factors are positive here.
  const double log_arg = (-th * xi_min + log1mexp(th * (xi_max - xi_min))) +
                         (th * c + log_expm1(th * (xi_min - c)));
  double omega =
      (-std::log(in.eps) + th * delta - log_arg) / (th * xi_min);
  if (!std::isfinite(omega)) {
    res.regime_ok = false;
    res.omega = kInf;
    return res;
  }
  if (omega < 0.0) {
    omega = 0.0;
    res.slack_clamped = true;
  }
  res.omega = omega;
  return res;
}

LatencyCheck max_delay_check(const std::array<DelayResult, 3>& omegas,
                             double t_max) {
  LatencyCheck chk;
  double worst = 0.0;
  for (const auto& o : omegas) {
    if (!o.regime_ok) {
      chk.ok = false;
      chk.margin = -kInf;
      return chk;
    }
    worst = std::max(worst, o.omega);
  }
  chk.margin = t_max - worst;
  chk.ok = chk.margin >= 0.0;
  return chk;
}

}  // namespace vecsim::snc
