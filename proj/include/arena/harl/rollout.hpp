#pragma once

#include <cstdint>
#include <vector>

#include "arena/core/binary_io.hpp"
#include "arena/core/rng.hpp"
#include "arena/envs/environment.hpp"
#include "arena/harl/learner.hpp"

namespace arena::harl {

/// N environment instances carried across updates, with the per-instance
/// action-noise streams and episode counters that make auto-reset seeds
/// reproducible.
struct EnvBatch {
  std::uint64_t seed = 0;
  std::vector<envs::EnvState> states;
  std::vector<envs::Observations> observations;
  std::vector<Rng> action_rngs;
  std::vector<std::uint64_t> episodes;               // completed episodes per instance
  std::vector<std::vector<double>> running_returns;  // per instance, per team

  std::size_t size() const { return states.size(); }
  friend bool operator==(const EnvBatch&, const EnvBatch&) = default;
};

/// Seed for episode `episode` of instance `instance`.
std::uint64_t episode_seed(std::uint64_t batch_seed, std::size_t instance, std::uint64_t episode);

EnvBatch make_env_batch(const envs::Environment& env, std::size_t instances, std::uint64_t seed);

void write_env_batch(ByteWriter& out, const EnvBatch& batch);
EnvBatch read_env_batch(ByteReader& in);

struct EpisodeSummary {
  std::size_t instance = 0;
  int length = 0;
  std::vector<double> team_returns;
  double reach_fraction = 0.0;      // agents that reached their goal
  double block_out_fraction = 0.0;  // blocks pushed out
  int winner = -1;
  bool tie = false;
  bool timeout = false;
};

/// Samples of one team. Sample index is t * N + n.
struct TeamBuffer {
  std::vector<std::size_t> obs_dims;  // per agent
  std::vector<std::size_t> act_dims;  // per agent
  std::vector<std::vector<double>> obs;        // per agent, [T*N*obs_dim]
  std::vector<std::vector<double>> actions;    // per agent, [T*N*act_dim]
  std::vector<std::vector<double>> log_probs;  // per agent, [T*N]
  std::vector<double> rewards;                 // [T*N]
  std::vector<double> values;                  // [T*N]
  std::vector<double> dones;                   // [T*N], 1 when the transition ended an episode
  std::vector<double> bootstrap;               // [N]
  std::vector<double> advantages;              // [T*N]
  std::vector<double> returns;                 // [T*N]
};

struct RolloutBuffer {
  std::size_t horizon = 0;
  std::size_t instances = 0;
  std::vector<TeamBuffer> teams;
  /// Shared-critic ablation: values and targets on the mean team reward.
  std::vector<double> shared_values;
  std::vector<double> shared_bootstrap;
  std::vector<double> shared_rewards;
  std::vector<double> shared_returns;
  /// Episodes finished during collection, ordered by instance then time.
  std::vector<EpisodeSummary> episodes;

  std::size_t samples() const { return horizon * instances; }
};

/// Runs every instance for `horizon` steps. Each agent samples from its own
/// policy; each team critic scores the team's concatenated observation;
/// finished episodes reset automatically. Throws NumericError naming the
/// instance when an observation is not finite.
RolloutBuffer collect_rollouts(const envs::Environment& env, const LearnerSet& learners, EnvBatch& batch,
                               std::size_t horizon);

/// Fills the critic input of `team` for sample i (concatenated member observations).
void team_critic_input(const TeamBuffer& team, std::size_t sample, std::span<double> out);

}  // namespace arena::harl
