#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace vecsim {

// Per-slot action: CPU shares alpha (sum <= 1) and per-type offload splits
// phi over {mmw, dsrc, cv2i} (each row sums to 1).
struct AllocationDecision {
  std::vector<double> alpha;
  std::vector<std::array<double, 3>> phi;

  std::size_t num_types() const { return alpha.size(); }

  bool feasible(double tol = 1e-9) const {
    double sum_a = 0.0;
    for (double a : alpha) {
      if (a < -tol || a > 1.0 + tol) return false;
      sum_a += a;
    }
    if (sum_a > 1.0 + tol) return false;
    if (phi.size() != alpha.size()) return false;
    for (const auto& row : phi) {
      double s = 0.0;
      for (double p : row) {
        if (p < -tol || p > 1.0 + tol) return false;
        s += p;
      }
      if (std::abs(s - 1.0) > tol) return false;
    }
    return true;
  }
};

namespace detail {
// Overflow-safe softmax over raw[first..first+len), written to out[0..len).
inline void softmax(const double* raw, std::size_t len, double* out) {
  double hi = raw[0];
  for (std::size_t k = 1; k < len; ++k) hi = raw[k] > hi ? raw[k] : hi;
  double sum = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    out[k] = std::exp(raw[k] - hi);
    sum += out[k];
  }
  for (std::size_t k = 0; k < len; ++k) out[k] /= sum;
}
}  // namespace detail

// Maps a raw (N+1 + 3N)-dimensional action to the feasible set: softmax over
// the N+1 alpha logits with the slack coordinate dropped (so sum alpha <= 1),
// and a per-type softmax over each 3-logit group (rows sum to 1).
inline AllocationDecision project_raw_action(const std::vector<double>& raw,
                                             std::size_t n_types) {
  AllocationDecision d;
  std::vector<double> alpha_full(n_types + 1);
  detail::softmax(raw.data(), n_types + 1, alpha_full.data());
  d.alpha.assign(alpha_full.begin(), alpha_full.begin() + n_types);
  d.phi.resize(n_types);
  for (std::size_t i = 0; i < n_types; ++i)
    detail::softmax(raw.data() + n_types + 1 + 3 * i, 3, d.phi[i].data());
  return d;
}

inline std::size_t raw_action_dim(std::size_t n_types) {
  return (n_types + 1) + 3 * n_types;
}

}  // namespace vecsim
