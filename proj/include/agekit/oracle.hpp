#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "agekit/chain.hpp"
#include "agekit/errors.hpp"
#include "agekit/params.hpp"

namespace agekit {

// Brute-force reference for the distribution of the inter-update time Y:
// forward dynamic programming over the two transient states {Miss, Bad},
// starting from the Success row of the transition matrix. first_passage[y]
// is the probability that the chain re-enters Success exactly at step y.
struct DpTable {
  std::int64_t horizon = 0;
  std::vector<double> first_passage;  // index 0..horizon, [0] == 0
  double survival_mass = 1.0;         // mass still transient after `horizon` steps
  double transient_decay = 0.0;       // dominant eigenvalue of the 2x2 transient block
  double max_mass_error = 0.0;        // worst |absorbed + surviving - 1| seen across steps
};

namespace detail {

// Spectral radius of [[q(M,M), q(M,B)], [q(B,M), q(B,B)]]. Nonnegative
// matrix, so the dominant eigenvalue is real; the discriminant is written
// as a sum of squares to avoid cancellation.
inline double transient_spectral_radius(const TransitionMatrix& t) {
  const double t11 = t(ChainState::Miss, ChainState::Miss);
  const double t12 = t(ChainState::Miss, ChainState::Bad);
  const double t21 = t(ChainState::Bad, ChainState::Miss);
  const double t22 = t(ChainState::Bad, ChainState::Bad);
  const double half_diff = 0.5 * (t11 - t22);
  return 0.5 * (t11 + t22) + std::sqrt(half_diff * half_diff + t12 * t21);
}

}  // namespace detail

inline DpTable pmf_dp(const SystemParams& params, std::int64_t y_max) {
  if (y_max < 1) throw validation_error("pmf_dp: y_max must be >= 1");
  const TransitionMatrix t = transition_matrix(params);

  DpTable table;
  table.horizon = y_max;
  table.first_passage.assign(static_cast<std::size_t>(y_max) + 1, 0.0);
  table.transient_decay = detail::transient_spectral_radius(t);

  const double q_sm = t(ChainState::Success, ChainState::Miss);
  const double q_sb = t(ChainState::Success, ChainState::Bad);
  const double q_ms = t(ChainState::Miss, ChainState::Success);
  const double q_mm = t(ChainState::Miss, ChainState::Miss);
  const double q_mb = t(ChainState::Miss, ChainState::Bad);
  const double q_bs = t(ChainState::Bad, ChainState::Success);
  const double q_bm = t(ChainState::Bad, ChainState::Miss);
  const double q_bb = t(ChainState::Bad, ChainState::Bad);

  table.first_passage[1] = t(ChainState::Success, ChainState::Success);
  double in_miss = q_sm;
  double in_bad = q_sb;
  double absorbed = table.first_passage[1];
  for (std::int64_t y = 2; y <= y_max; ++y) {
    table.first_passage[static_cast<std::size_t>(y)] = in_miss * q_ms + in_bad * q_bs;
    const double next_miss = in_miss * q_mm + in_bad * q_bm;
    const double next_bad = in_miss * q_mb + in_bad * q_bb;
    in_miss = next_miss;
    in_bad = next_bad;
    absorbed += table.first_passage[static_cast<std::size_t>(y)];
    const double mass_error = std::abs(absorbed + in_miss + in_bad - 1.0);
    if (mass_error > table.max_mass_error) table.max_mass_error = mass_error;
  }
  table.survival_mass = in_miss + in_bad;
  return table;
}

// Upper bound on sum_{y > horizon} w(y) * first_passage(y) for weights
// majorized by |w(horizon)| * (y/horizon)^degree. Infinite when the
// geometric decay cannot beat the polynomial growth at this horizon.
inline double tail_bound(const DpTable& table, double w_at_horizon, int weight_degree) {
  const double h = static_cast<double>(table.horizon);
  const double slack = std::exp(static_cast<double>(weight_degree) / h);
  const double rate = table.transient_decay * slack;
  if (rate >= 1.0) return std::numeric_limits<double>::infinity();
  return table.survival_mass * std::abs(w_at_horizon) * slack / (1.0 - rate);
}

/// DP extended until the weighted tail bound drops below rel_tol times the
/// accumulated degree-weighted sum. Used so truncated statistics of Y^k can
/// be trusted to the requested accuracy.
inline DpTable pmf_dp_auto(const SystemParams& params, int weight_degree = 0,
                           double rel_tol = 1e-13,
                           std::int64_t max_horizon = (std::int64_t{1} << 26)) {
  std::int64_t horizon = 4096;
  for (;;) {
    DpTable table = pmf_dp(params, horizon);
    double acc = 0.0;
    for (std::int64_t y = 1; y <= table.horizon; ++y)
      acc += std::pow(static_cast<double>(y), weight_degree) *
             table.first_passage[static_cast<std::size_t>(y)];
    const double bound =
        tail_bound(table, std::pow(static_cast<double>(table.horizon), weight_degree), weight_degree);
    if (bound <= rel_tol * std::max(acc, 1e-300)) return table;
    if (horizon >= max_horizon)
      throw insufficient_horizon_error("pmf_dp_auto: tail bound not met at max horizon");
    horizon *= 4;
  }
}

/// Truncated sum of weight(y) * P_Y(y) over the table. Throws when the
/// residual tail bound exceeds rel_tol relative to the result.
inline double statistic_trunc(const DpTable& table,
                              const std::function<double(std::int64_t)>& weight,
                              int weight_degree = 0, double rel_tol = 1e-12) {
  double sum = 0.0;
  for (std::int64_t y = 1; y <= table.horizon; ++y)
    sum += weight(y) * table.first_passage[static_cast<std::size_t>(y)];
  const double bound = tail_bound(table, weight(table.horizon), weight_degree);
  if (!(bound <= rel_tol * std::max(std::abs(sum), 1e-300)))
    throw insufficient_horizon_error("statistic_trunc: residual tail bound too large for horizon");
  return sum;
}

/// Oracle CCDF P{Y > f} from the table (plus its over-horizon tail bound).
inline double ccdf_trunc(const DpTable& table, std::int64_t f) {
  if (f < 0) f = 0;
  double sum = table.survival_mass;  // everything beyond the horizon is > f
  for (std::int64_t y = table.horizon; y > f; --y)
    sum += table.first_passage[static_cast<std::size_t>(y)];
  return sum;
}

}  // namespace agekit
