#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "arena/harl/learner.hpp"
#include "arena/harl/rollout.hpp"

namespace arena::harl {

/// Negated clipped surrogate: -min(r A, clip(r, 1-eps, 1+eps) A).
double ppo_clip_loss(double ratio, double advantage, double eps);

/// Derivative of ppo_clip_loss w.r.t. the ratio (zero where the clip binds).
double ppo_clip_loss_grad(double ratio, double advantage, double eps);

/// Computes advantages and returns for every team (and the shared-critic
/// targets in ablation mode). In ablation mode each team's advantages use
/// the shared critic's values.
void finalize_buffer(RolloutBuffer& buffer, const HappoConfig& cfg);

struct TeamUpdateStats {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  bool updated = false;
  double policy_loss = kNaN;
  double value_loss = kNaN;
  double entropy = kNaN;
  double approx_kl = kNaN;
  double clip_frac = kNaN;
  double adv_mean = kNaN;
  double adv_std = kNaN;
};

struct UpdateStats {
  std::vector<TeamUpdateStats> teams;
  double shared_value_loss = TeamUpdateStats::kNaN;
};

/// HAPPO update of every unfrozen team on a finalized buffer. Within a team,
/// agents are updated one at a time in a random permutation; agent k's
/// advantage is scaled by the product of probability ratios of the agents
/// updated before it. Team critics regress onto their own returns. Frozen
/// teams are left bit-identical. Throws NumericError naming the team, agent
/// and minibatch when a loss turns non-finite.
UpdateStats happo_update(LearnerSet& learners, const RolloutBuffer& buffer, const HappoConfig& cfg);

/// One Adam step of value regression, loss value_coef * mean((V - target)^2)
/// over the rows of `inputs` (row-major, critic in_dim wide) picked by
/// indices. Returns mean((V - target)^2) before the step.
double critic_step(CriticNet& critic, numcore::AdamState& opt, std::span<const double> inputs,
                   std::span<const double> targets, std::span<const std::size_t> indices, const HappoConfig& cfg);

/// Stateless zero-sum toy: two single-agent teams, one-step episodes, a
/// constant observation, rewards +c and -c. Trains both team critics and a
/// shared critic (on the averaged reward) for `steps` full-batch steps.
struct ZeroSumToyResult {
  double shared_value = 0.0;
  std::vector<double> team_values;
  std::vector<double> true_returns;
};
ZeroSumToyResult zero_sum_critic_toy(double c, int steps, const HappoConfig& cfg, std::uint64_t seed);

}  // namespace arena::harl
