#pragma once

#include <cstddef>

#include "arena/envs/config.hpp"
#include "arena/envs/state.hpp"

namespace arena::envs {

/// Stage 1: sum of weighted shaping terms + delta * 1[reached this step]
/// + gamma_dist * (1 - tanh(alpha * d)), d = planar distance to the goal.
double reward_walk_to_point(const EnvState& state, std::size_t agent, const RewardConfig& cfg);

/// Stage 2: (tanh(r / r_max) + 1 - tanh(d / r_max)) * dt + T
/// + delta * (1[block out] - 1[left ring]); r is the block's distance from the
/// arena center, d the surface gap between agent and block.
double reward_block_push(const EnvState& state, std::size_t agent, const RewardConfig& cfg);

/// Terminal sumo reward tau * (L_j - L_i - phi) * kappa for team i in {0, 1}.
double reward_sumo(const EliminationStatus& elim, int team, const RewardConfig& cfg);

/// Laser tag: tanks (team 0) earn knockout_reward per drone knockout plus a
/// per-step penalty; drones (team 1) earn the mean over surviving drones of
/// exp(-distance to offset goal) minus knockout_reward per own knockout.
double reward_laser_tag(const EnvState& state, int team, const RewardConfig& cfg);

}  // namespace arena::envs
