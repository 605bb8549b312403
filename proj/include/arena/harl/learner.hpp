#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "arena/core/binary_io.hpp"
#include "arena/core/rng.hpp"
#include "arena/envs/environment.hpp"
#include "arena/numcore/adam.hpp"
#include "arena/numcore/mlp.hpp"

namespace arena::harl {

struct HappoConfig {
  double clip = 0.2;
  double discount = 0.99;
  double gae_lambda = 0.95;
  int epochs = 4;
  int minibatches = 4;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double actor_lr = 3e-4;
  double critic_lr = 1e-3;
  bool normalize_advantages = true;
  double max_grad_norm = 0.5;
  bool shared_critic_ablation = false;
  double init_log_std = 0.0;
  std::vector<std::size_t> critic_hidden{64, 64};

  /// Throws ConfigError when a field is outside its valid range.
  void validate() const;
};

struct PolicyNet {
  numcore::MlpParams mlp;
  std::vector<double> log_std;

  friend bool operator==(const PolicyNet&, const PolicyNet&) = default;
};

struct CriticNet {
  numcore::MlpParams mlp;

  friend bool operator==(const CriticNet&, const CriticNet&) = default;
};

struct AgentLearner {
  PolicyNet policy;
  numcore::AdamState mlp_opt;
  numcore::AdamState log_std_opt;

  friend bool operator==(const AgentLearner&, const AgentLearner&) = default;
};

/// Actors of one team plus the team's own critic V^(i).
struct TeamLearner {
  int team_id = 0;
  std::vector<AgentLearner> agents;
  CriticNet critic;
  numcore::AdamState critic_opt;
  Rng rng;  // permutations and minibatch shuffles
  bool frozen = false;

  friend bool operator==(const TeamLearner&, const TeamLearner&) = default;
};

struct LearnerSet {
  std::vector<TeamLearner> teams;
  /// Shared-critic ablation: one critic over every agent's observation,
  /// trained on the mean of the team rewards.
  bool has_shared_critic = false;
  CriticNet shared_critic;
  numcore::AdamState shared_opt;

  friend bool operator==(const LearnerSet&, const LearnerSet&) = default;
};

/// Input width of a team critic: concatenated observations of the team.
std::size_t critic_input_dim(const envs::Environment& env, std::size_t team);
/// Input width of the shared critic: every agent's observation.
std::size_t shared_critic_input_dim(const envs::Environment& env);

/// Fresh learners for env: per-agent policies (hidden sizes from AgentSpec,
/// output gain 0.01), per-team critics, zeroed optimizers. The shared critic
/// exists only when cfg.shared_critic_ablation is set.
LearnerSet make_learners(const envs::Environment& env, const HappoConfig& cfg, std::uint64_t seed);

/// Throws ConfigError when learner shapes do not fit env.
void check_compatible(const LearnerSet& learners, const envs::Environment& env);

/// Zeroes every Adam moment and step counter.
void reset_optimizers(LearnerSet& learners);

/// Policy mean for one observation.
std::vector<double> policy_mean(const PolicyNet& policy, std::span<const double> obs);

void write_learners(ByteWriter& out, const LearnerSet& learners);
LearnerSet read_learners(ByteReader& in);

}  // namespace arena::harl
