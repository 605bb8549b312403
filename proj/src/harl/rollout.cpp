#include "arena/harl/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arena/core/error.hpp"
#include "arena/core/parallel.hpp"
#include "arena/numcore/gaussian.hpp"

namespace arena::harl {

std::uint64_t episode_seed(std::uint64_t batch_seed, std::size_t instance, std::uint64_t episode) {
  return mix_seed(mix_seed(batch_seed, instance), episode);
}

EnvBatch make_env_batch(const envs::Environment& env, std::size_t instances, std::uint64_t seed) {
  if (instances == 0) throw ConfigError("environment batch needs at least one instance");
  EnvBatch batch;
  batch.seed = seed;
  for (std::size_t n = 0; n < instances; ++n) {
    auto r = env.reset(episode_seed(seed, n, 0));
    batch.states.push_back(std::move(r.state));
    batch.observations.push_back(std::move(r.observations));
    batch.action_rngs.push_back(Rng::derive(seed, 0xac710 + n));
    batch.episodes.push_back(0);
    batch.running_returns.emplace_back(env.team_count(), 0.0);
  }
  return batch;
}

void write_env_batch(ByteWriter& out, const EnvBatch& batch) {
  out.u64(batch.seed);
  out.u64(batch.size());
  for (std::size_t n = 0; n < batch.size(); ++n) {
    envs::write_env_state(out, batch.states[n]);
    out.u64(batch.observations[n].size());
    for (const auto& o : batch.observations[n]) out.f64s(o);
    out.str(batch.action_rngs[n].state());
    out.u64(batch.episodes[n]);
    out.f64s(batch.running_returns[n]);
  }
}

EnvBatch read_env_batch(ByteReader& in) {
  EnvBatch batch;
  batch.seed = in.u64();
  const auto n = in.u64();
  if (n > (1u << 24)) throw LoadError("implausible batch size");
  for (std::uint64_t k = 0; k < n; ++k) {
    batch.states.push_back(envs::read_env_state(in));
    const auto agents = in.u64();
    if (agents > 4096) throw LoadError("implausible agent count");
    envs::Observations obs;
    for (std::uint64_t a = 0; a < agents; ++a) obs.push_back(in.f64s());
    batch.observations.push_back(std::move(obs));
    Rng rng;
    rng.set_state(in.str());
    batch.action_rngs.push_back(rng);
    batch.episodes.push_back(in.u64());
    batch.running_returns.push_back(in.f64s());
  }
  return batch;
}

void team_critic_input(const TeamBuffer& team, std::size_t sample, std::span<double> out) {
  std::size_t off = 0;
  for (std::size_t k = 0; k < team.obs.size(); ++k) {
    const std::size_t d = team.obs_dims[k];
    std::copy_n(team.obs[k].begin() + static_cast<std::ptrdiff_t>(sample * d), d, out.begin() + static_cast<std::ptrdiff_t>(off));
    off += d;
  }
}

namespace {

double critic_value(const numcore::MlpParams& critic, std::span<const double> input, numcore::MlpTape& tape) {
  numcore::mlp_forward(critic, input, tape);
  return tape.output()[0];
}

EpisodeSummary summarize(const envs::EnvState& s, std::size_t instance, std::span<const double> returns) {
  EpisodeSummary e;
  e.instance = instance;
  e.length = s.step;
  e.team_returns.assign(returns.begin(), returns.end());
  const double n = static_cast<double>(s.agent_count);
  e.reach_fraction = static_cast<double>(std::count(s.reached.begin(), s.reached.end(), true)) / n;
  e.block_out_fraction = static_cast<double>(std::count(s.block_out.begin(), s.block_out.end(), true)) / n;
  e.winner = envs::winning_team(s.elim);
  e.tie = s.elim.tie;
  e.timeout = s.elim.timeout;
  return e;
}

}  // namespace

RolloutBuffer collect_rollouts(const envs::Environment& env, const LearnerSet& learners, EnvBatch& batch,
                               std::size_t horizon) {
  if (horizon == 0) throw ConfigError("horizon must be >= 1");
  check_compatible(learners, env);
  const std::size_t n_inst = batch.size();
  const std::size_t n_teams = env.team_count();
  const std::size_t samples = horizon * n_inst;

  RolloutBuffer buf;
  buf.horizon = horizon;
  buf.instances = n_inst;
  buf.teams.resize(n_teams);
  for (std::size_t t = 0; t < n_teams; ++t) {
    auto& tb = buf.teams[t];
    for (std::size_t g : env.team_agents(t)) {
      tb.obs_dims.push_back(env.obs_dim(g));
      tb.act_dims.push_back(env.action_dim(g));
      tb.obs.emplace_back(samples * env.obs_dim(g));
      tb.actions.emplace_back(samples * env.action_dim(g));
      tb.log_probs.emplace_back(samples);
    }
    tb.rewards.assign(samples, 0.0);
    tb.values.assign(samples, 0.0);
    tb.dones.assign(samples, 0.0);
    tb.bootstrap.assign(n_inst, 0.0);
  }
  if (learners.has_shared_critic) {
    buf.shared_values.assign(samples, 0.0);
    buf.shared_bootstrap.assign(n_inst, 0.0);
    buf.shared_rewards.assign(samples, 0.0);
  }

  std::vector<std::vector<EpisodeSummary>> finished(n_inst);
  parallel_for(n_inst, [&](std::size_t n) {
    numcore::MlpTape tape;
    std::vector<double> critic_in, shared_in, mean, action;
    std::vector<double> rewards;
    envs::Actions actions(env.agent_count());
    auto& state = batch.states[n];
    auto& obs = batch.observations[n];
    Rng& rng = batch.action_rngs[n];

    auto evaluate_critics = [&](std::size_t t_index, bool bootstrap) {
      shared_in.clear();
      for (std::size_t t = 0; t < n_teams; ++t) {
        critic_in.clear();
        for (std::size_t g : env.team_agents(t)) critic_in.insert(critic_in.end(), obs[g].begin(), obs[g].end());
        shared_in.insert(shared_in.end(), critic_in.begin(), critic_in.end());
        const double v = critic_value(learners.teams[t].critic.mlp, critic_in, tape);
        if (bootstrap) buf.teams[t].bootstrap[n] = v;
        else buf.teams[t].values[t_index] = v;
      }
      if (learners.has_shared_critic) {
        const double v = critic_value(learners.shared_critic.mlp, shared_in, tape);
        if (bootstrap) buf.shared_bootstrap[n] = v;
        else buf.shared_values[t_index] = v;
      }
    };

    for (std::size_t step = 0; step < horizon; ++step) {
      const std::size_t i = step * n_inst + n;
      for (std::size_t g = 0; g < env.agent_count(); ++g) {
        for (double v : obs[g]) {
          if (!std::isfinite(v)) throw NumericError("non-finite observation in environment instance " + std::to_string(n));
        }
      }
      evaluate_critics(i, false);
      for (std::size_t t = 0; t < n_teams; ++t) {
        auto& tb = buf.teams[t];
        const auto members = env.team_agents(t);
        for (std::size_t k = 0; k < members.size(); ++k) {
          const std::size_t g = members[k];
          const auto& policy = learners.teams[t].agents[k].policy;
          numcore::mlp_forward(policy.mlp, obs[g], tape);
          const auto m = tape.output();
          mean.assign(m.begin(), m.end());
          action.resize(mean.size());
          const numcore::GaussianHead head{mean, policy.log_std};
          numcore::gaussian_sample(head, rng, action);
          tb.log_probs[k][i] = numcore::gaussian_log_prob(head, action);
          std::copy(obs[g].begin(), obs[g].end(), tb.obs[k].begin() + static_cast<std::ptrdiff_t>(i * tb.obs_dims[k]));
          std::copy(action.begin(), action.end(), tb.actions[k].begin() + static_cast<std::ptrdiff_t>(i * tb.act_dims[k]));
          actions[g] = action;
        }
      }
      const bool done = env.step_in_place(state, actions, rewards);
      double mean_reward = 0.0;
      for (std::size_t t = 0; t < n_teams; ++t) {
        buf.teams[t].rewards[i] = rewards[t];
        buf.teams[t].dones[i] = done ? 1.0 : 0.0;
        batch.running_returns[n][t] += rewards[t];
        mean_reward += rewards[t];
      }
      if (learners.has_shared_critic) buf.shared_rewards[i] = mean_reward / static_cast<double>(n_teams);
      if (done) {
        finished[n].push_back(summarize(state, n, batch.running_returns[n]));
        batch.episodes[n] += 1;
        std::fill(batch.running_returns[n].begin(), batch.running_returns[n].end(), 0.0);
        auto r = env.reset(episode_seed(batch.seed, n, batch.episodes[n]));
        state = std::move(r.state);
        obs = std::move(r.observations);
      } else {
        for (std::size_t g = 0; g < env.agent_count(); ++g) env.build_observation(state, g, obs[g]);
      }
    }
    evaluate_critics(0, true);
  });
  for (auto& f : finished) {
    for (auto& e : f) buf.episodes.push_back(std::move(e));
  }
  return buf;
}

}  // namespace arena::harl
