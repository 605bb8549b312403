#include "arena/harl/learner.hpp"

#include <cmath>
#include <string>

#include "arena/core/error.hpp"

namespace arena::harl {

using numcore::AdamState;

void HappoConfig::validate() const {
  if (!(clip > 0.0 && clip < 1.0)) throw ConfigError("clip must lie in (0, 1)");
  if (!(discount > 0.0 && discount <= 1.0)) throw ConfigError("discount must lie in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw ConfigError("gae_lambda must lie in [0, 1]");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (minibatches < 1) throw ConfigError("minibatches must be >= 1");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) throw ConfigError("learning rates must be positive");
  if (!(value_coef >= 0.0) || !(entropy_coef >= 0.0)) throw ConfigError("loss coefficients must be >= 0");
  if (!(max_grad_norm > 0.0)) throw ConfigError("max_grad_norm must be positive");
  if (!std::isfinite(init_log_std)) throw ConfigError("init_log_std must be finite");
}

std::size_t critic_input_dim(const envs::Environment& env, std::size_t team) {
  std::size_t n = 0;
  for (std::size_t g : env.team_agents(team)) n += env.obs_dim(g);
  return n;
}

std::size_t shared_critic_input_dim(const envs::Environment& env) {
  std::size_t n = 0;
  for (std::size_t g = 0; g < env.agent_count(); ++g) n += env.obs_dim(g);
  return n;
}

LearnerSet make_learners(const envs::Environment& env, const HappoConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  LearnerSet set;
  Rng init = Rng::derive(seed, 0x1e4a);
  for (std::size_t t = 0; t < env.team_count(); ++t) {
    TeamLearner team;
    team.team_id = static_cast<int>(t);
    for (std::size_t g : env.team_agents(t)) {
      AgentLearner a;
      const auto& spec = env.agent(g);
      a.policy.mlp = numcore::make_mlp(env.obs_dim(g), spec.hidden, env.action_dim(g), 1.0, 0.01, init);
      a.policy.log_std.assign(env.action_dim(g), cfg.init_log_std);
      a.mlp_opt = AdamState::zeros(a.policy.mlp.size());
      a.log_std_opt = AdamState::zeros(a.policy.log_std.size());
      team.agents.push_back(std::move(a));
    }
    team.critic.mlp = numcore::make_mlp(critic_input_dim(env, t), cfg.critic_hidden, 1, 1.0, 1.0, init);
    team.critic_opt = AdamState::zeros(team.critic.mlp.size());
    team.rng = Rng::derive(seed, 0x7ea0 + t);
    set.teams.push_back(std::move(team));
  }
  if (cfg.shared_critic_ablation) {
    set.has_shared_critic = true;
    set.shared_critic.mlp = numcore::make_mlp(shared_critic_input_dim(env), cfg.critic_hidden, 1, 1.0, 1.0, init);
    set.shared_opt = AdamState::zeros(set.shared_critic.mlp.size());
  }
  return set;
}

void check_compatible(const LearnerSet& learners, const envs::Environment& env) {
  if (learners.teams.size() != env.team_count()) {
    throw ConfigError("learners cover " + std::to_string(learners.teams.size()) + " teams, environment has " +
                      std::to_string(env.team_count()));
  }
  for (std::size_t t = 0; t < env.team_count(); ++t) {
    const auto& team = learners.teams[t];
    const auto members = env.team_agents(t);
    if (team.agents.size() != members.size()) {
      throw ConfigError("team " + std::to_string(t) + " agent count differs from the environment");
    }
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto& p = team.agents[k].policy;
      if (p.mlp.in_dim() != env.obs_dim(members[k]) || p.mlp.out_dim() != env.action_dim(members[k]) ||
          p.log_std.size() != env.action_dim(members[k])) {
        throw ConfigError("team " + std::to_string(t) + " agent " + std::to_string(k) +
                          " policy shape does not fit the environment");
      }
    }
    if (team.critic.mlp.in_dim() != critic_input_dim(env, t) || team.critic.mlp.out_dim() != 1) {
      throw ConfigError("team " + std::to_string(t) + " critic shape does not fit the environment");
    }
  }
  if (learners.has_shared_critic && learners.shared_critic.mlp.in_dim() != shared_critic_input_dim(env)) {
    throw ConfigError("shared critic shape does not fit the environment");
  }
}

void reset_optimizers(LearnerSet& learners) {
  for (auto& team : learners.teams) {
    for (auto& a : team.agents) {
      a.mlp_opt = AdamState::zeros(a.policy.mlp.size());
      a.log_std_opt = AdamState::zeros(a.policy.log_std.size());
    }
    team.critic_opt = AdamState::zeros(team.critic.mlp.size());
  }
  if (learners.has_shared_critic) learners.shared_opt = AdamState::zeros(learners.shared_critic.mlp.size());
}

std::vector<double> policy_mean(const PolicyNet& policy, std::span<const double> obs) {
  return numcore::mlp_forward(policy.mlp, obs);
}

void write_learners(ByteWriter& out, const LearnerSet& learners) {
  out.u32(static_cast<std::uint32_t>(learners.teams.size()));
  for (const auto& team : learners.teams) {
    out.i64(team.team_id);
    out.u32(static_cast<std::uint32_t>(team.agents.size()));
    for (const auto& a : team.agents) {
      numcore::write_mlp(out, a.policy.mlp);
      out.f64s(a.policy.log_std);
      numcore::write_adam(out, a.mlp_opt);
      numcore::write_adam(out, a.log_std_opt);
    }
    numcore::write_mlp(out, team.critic.mlp);
    numcore::write_adam(out, team.critic_opt);
    out.str(team.rng.state());
    out.boolean(team.frozen);
  }
  out.boolean(learners.has_shared_critic);
  if (learners.has_shared_critic) {
    numcore::write_mlp(out, learners.shared_critic.mlp);
    numcore::write_adam(out, learners.shared_opt);
  }
}

LearnerSet read_learners(ByteReader& in) {
  LearnerSet set;
  const auto n_teams = in.u32();
  if (n_teams > 4096) throw LoadError("implausible team count");
  for (std::uint32_t t = 0; t < n_teams; ++t) {
    TeamLearner team;
    team.team_id = static_cast<int>(in.i64());
    const auto n_agents = in.u32();
    if (n_agents > 4096) throw LoadError("implausible agent count");
    for (std::uint32_t k = 0; k < n_agents; ++k) {
      AgentLearner a;
      a.policy.mlp = numcore::read_mlp(in);
      a.policy.log_std = in.f64s();
      a.mlp_opt = numcore::read_adam(in);
      a.log_std_opt = numcore::read_adam(in);
      if (a.policy.log_std.size() != a.policy.mlp.out_dim() || a.mlp_opt.m.size() != a.policy.mlp.size() ||
          a.log_std_opt.m.size() != a.policy.log_std.size()) {
        throw LoadError("inconsistent policy record");
      }
      team.agents.push_back(std::move(a));
    }
    team.critic.mlp = numcore::read_mlp(in);
    team.critic_opt = numcore::read_adam(in);
    if (team.critic_opt.m.size() != team.critic.mlp.size()) throw LoadError("inconsistent critic record");
    team.rng.set_state(in.str());
    team.frozen = in.boolean();
    set.teams.push_back(std::move(team));
  }
  set.has_shared_critic = in.boolean();
  if (set.has_shared_critic) {
    set.shared_critic.mlp = numcore::read_mlp(in);
    set.shared_opt = numcore::read_adam(in);
  }
  return set;
}

}  // namespace arena::harl
