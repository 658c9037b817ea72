#pragma once

#include <array>
#include <cstddef>

#include "agekit/params.hpp"

namespace agekit {

// Three-state chain of the inter-update process: Success (update delivered
// this slot), Miss (channel good, nothing delivered), Bad (channel bad).
enum class ChainState : int { Success = 0, Miss = 1, Bad = 2 };

inline constexpr std::array<ChainState, 3> kChainStates = {ChainState::Success, ChainState::Miss,
                                                           ChainState::Bad};

// One-step transition probabilities q(from, to). The Success and Miss rows
// are identical: both mean "channel currently good", and the next slot only
// depends on that.
struct TransitionMatrix {
  std::array<std::array<double, 3>, 3> q{};

  double operator()(ChainState from, ChainState to) const {
    return q[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
  }

  double row_sum(ChainState from) const {
    const auto& row = q[static_cast<std::size_t>(from)];
    return row[0] + row[1] + row[2];
  }
};

inline TransitionMatrix transition_matrix(const SystemParams& params) {
  const double beta = params.beta();
  const double gamma = params.gamma();
  const double ps = params.p_s();

  TransitionMatrix t;
  const std::array<double, 3> good_row = {(1.0 - beta) * ps, (1.0 - beta) * (1.0 - ps), beta};
  t.q[static_cast<std::size_t>(ChainState::Success)] = good_row;
  t.q[static_cast<std::size_t>(ChainState::Miss)] = good_row;
  t.q[static_cast<std::size_t>(ChainState::Bad)] = {gamma * ps, gamma * (1.0 - ps), 1.0 - gamma};
  return t;
}

}  // namespace agekit
