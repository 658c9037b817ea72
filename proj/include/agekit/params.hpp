#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "agekit/errors.hpp"

namespace agekit {

/// Stationary probability of the good channel state, gamma/(beta+gamma).
/// beta = 0 yields 1 (a channel that never degrades); beta = gamma = 0 is
/// rejected as an ill-defined ratio.
inline double stationary_good(double beta, double gamma) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw validation_error("beta must be in [0,1]");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw validation_error("gamma must be in (0,1] (gamma=0 makes the bad state absorbing)");
  if (beta == 0.0) return 1.0;
  return gamma / (beta + gamma);
}

/// Per-slot delivery probability for a node with a good channel,
/// alpha*(1-alpha*pi_g)^(n-1). Evaluated in the log domain so n up to 1e7
/// neither underflows nor loses precision.
inline double success_prob(std::int64_t n, double alpha, double pi_g) {
  if (n == 1) return alpha;
  const double api = alpha * pi_g;
  if (api >= 1.0) return 0.0;  // only reachable at alpha = pi_g = 1
  return std::exp(std::log(alpha) + static_cast<double>(n - 1) * std::log1p(-api));
}

// Immutable scenario record: n, alpha, beta, gamma plus the derived
// stationary quantities pi_g and p_s. Validates everything at construction;
// safe to share across threads afterwards.
class SystemParams {
 public:
  SystemParams(std::int64_t n, double alpha, double beta, double gamma)
      : n_(n), alpha_(alpha), beta_(beta), gamma_(gamma) {
    if (n < 1) throw validation_error("n must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw validation_error("alpha must be in (0,1] (alpha=0 never delivers an update)");
    pi_g_ = stationary_good(beta, gamma);  // validates beta, gamma
    p_s_ = success_prob(n, alpha, pi_g_);
    if (!(p_s_ > 0.0))
      throw validation_error("derived p_s = 0: no update is ever delivered (alpha*pi_g = 1 with n > 1)");
  }

  std::int64_t n() const { return n_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double pi_g() const { return pi_g_; }
  double p_s() const { return p_s_; }

  /// Mean number of transmission attempts per slot, n*alpha.
  double load() const { return static_cast<double>(n_) * alpha_; }

  bool operator==(const SystemParams& o) const {
    return n_ == o.n_ && alpha_ == o.alpha_ && beta_ == o.beta_ && gamma_ == o.gamma_;
  }

 private:
  std::int64_t n_;
  double alpha_, beta_, gamma_;
  double pi_g_, p_s_;
};

inline double success_prob(const SystemParams& params) { return params.p_s(); }

}  // namespace agekit
