#include "arena/harl/happo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "arena/core/error.hpp"
#include "arena/core/parallel.hpp"
#include "arena/harl/gae.hpp"
#include "arena/numcore/gaussian.hpp"

namespace arena::harl {

using numcore::AdamConfig;
using numcore::AdamState;
using numcore::GaussianHead;
using numcore::MlpTape;

double ppo_clip_loss(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  return -std::min(ratio * advantage, clipped * advantage);
}

double ppo_clip_loss_grad(double ratio, double advantage, double eps) {
  if (advantage >= 0.0 && ratio > 1.0 + eps) return 0.0;
  if (advantage < 0.0 && ratio < 1.0 - eps) return 0.0;
  return -advantage;
}

void finalize_buffer(RolloutBuffer& buffer, const HappoConfig& cfg) {
  const bool shared = !buffer.shared_values.empty();
  for (auto& team : buffer.teams) {
    const auto& values = shared ? buffer.shared_values : team.values;
    const auto& boot = shared ? buffer.shared_bootstrap : team.bootstrap;
    auto gae = compute_gae(team.rewards, values, team.dones, boot, buffer.horizon, cfg.discount, cfg.gae_lambda);
    team.advantages = std::move(gae.advantages);
    team.returns = std::move(gae.returns);
  }
  if (shared && !buffer.teams.empty()) {
    auto gae = compute_gae(buffer.shared_rewards, buffer.shared_values, buffer.teams[0].dones,
                           buffer.shared_bootstrap, buffer.horizon, cfg.discount, cfg.gae_lambda);
    buffer.shared_returns = std::move(gae.returns);
  }
}

namespace {

// Gradients are summed over a fixed number of chunks so results do not
// depend on the worker count.
constexpr std::size_t kChunks = 16;

struct ChunkRange {
  std::size_t begin, end;
};

ChunkRange chunk(std::size_t c, std::size_t chunks, std::size_t n) { return {c * n / chunks, (c + 1) * n / chunks}; }

void clip_global_norm(std::span<double> a, std::span<double> b, double max_norm) {
  double sq = 0.0;
  for (double v : a) sq += v * v;
  for (double v : b) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& v : a) v *= scale;
    for (double& v : b) v *= scale;
  }
}

std::vector<std::vector<std::size_t>> split_minibatches(std::size_t samples, int minibatches, Rng& rng) {
  std::vector<std::size_t> order(samples);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(minibatches), samples);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < m; ++k) {
    const auto r = chunk(k, m, samples);
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(r.begin), order.begin() + static_cast<std::ptrdiff_t>(r.end));
  }
  return out;
}

std::vector<double> critic_inputs(const TeamBuffer& team, std::size_t samples) {
  std::size_t dim = 0;
  for (std::size_t d : team.obs_dims) dim += d;
  std::vector<double> out(samples * dim);
  for (std::size_t i = 0; i < samples; ++i) team_critic_input(team, i, std::span<double>(out).subspan(i * dim, dim));
  return out;
}

struct ActorBatchResult {
  double loss_sum = 0.0;
  double clipped = 0.0;
};

// Accumulates the mean clipped-surrogate gradient over `indices` into
// grad_mlp / grad_ls and returns loss and clip counts.
ActorBatchResult actor_gradient(const PolicyNet& policy, const TeamBuffer& team, std::size_t k,
                                std::span<const double> adv, std::span<const std::size_t> indices, double eps,
                                std::span<double> grad_mlp, std::span<double> grad_ls) {
  const std::size_t obs_dim = team.obs_dims[k];
  const std::size_t act_dim = team.act_dims[k];
  const std::size_t chunks = std::min(kChunks, indices.size());
  const double inv_b = 1.0 / static_cast<double>(indices.size());
  std::vector<std::vector<double>> g_mlp(chunks, std::vector<double>(grad_mlp.size(), 0.0));
  std::vector<std::vector<double>> g_ls(chunks, std::vector<double>(grad_ls.size(), 0.0));
  std::vector<ActorBatchResult> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    MlpTape tape;
    std::vector<double> mean(act_dim), d_mean(act_dim), d_ls(act_dim), upstream(act_dim);
    const auto r = chunk(c, chunks, indices.size());
    for (std::size_t j = r.begin; j < r.end; ++j) {
      const std::size_t i = indices[j];
      const std::span<const double> obs(team.obs[k].data() + i * obs_dim, obs_dim);
      const std::span<const double> act(team.actions[k].data() + i * act_dim, act_dim);
      numcore::mlp_forward(policy.mlp, obs, tape);
      const auto out = tape.output();
      std::copy(out.begin(), out.end(), mean.begin());
      const GaussianHead head{mean, policy.log_std};
      const double logp = numcore::gaussian_log_prob(head, act);
      const double ratio = std::exp(logp - team.log_probs[k][i]);
      const double a = adv[i];
      parts[c].loss_sum += ppo_clip_loss(ratio, a, eps);
      if (std::abs(ratio - 1.0) > eps) parts[c].clipped += 1.0;
      const double d_logp = ppo_clip_loss_grad(ratio, a, eps) * ratio * inv_b;
      if (d_logp == 0.0) continue;
      numcore::gaussian_log_prob_grad(head, act, d_mean, d_ls);
      for (std::size_t q = 0; q < act_dim; ++q) {
        upstream[q] = d_logp * d_mean[q];
        g_ls[c][q] += d_logp * d_ls[q];
      }
      numcore::mlp_backward_accumulate(policy.mlp, tape, upstream, g_mlp[c]);
    }
  });
  ActorBatchResult total;
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t p = 0; p < grad_mlp.size(); ++p) grad_mlp[p] += g_mlp[c][p];
    for (std::size_t p = 0; p < grad_ls.size(); ++p) grad_ls[p] += g_ls[c][p];
    total.loss_sum += parts[c].loss_sum;
    total.clipped += parts[c].clipped;
  }
  return total;
}

std::vector<double> full_log_probs(const PolicyNet& policy, const TeamBuffer& team, std::size_t k, std::size_t samples) {
  std::vector<double> out(samples);
  const std::size_t obs_dim = team.obs_dims[k];
  const std::size_t act_dim = team.act_dims[k];
  parallel_for(kChunks, [&](std::size_t c) {
    MlpTape tape;
    const auto r = chunk(c, kChunks, samples);
    for (std::size_t i = r.begin; i < r.end; ++i) {
      numcore::mlp_forward(policy.mlp, std::span<const double>(team.obs[k].data() + i * obs_dim, obs_dim), tape);
      const GaussianHead head{tape.output(), policy.log_std};
      out[i] = numcore::gaussian_log_prob(head, std::span<const double>(team.actions[k].data() + i * act_dim, act_dim));
    }
  });
  return out;
}

void normalize(std::vector<double>& adv, double& mean_out, double& std_out, bool apply) {
  const double n = static_cast<double>(adv.size());
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  var /= n;
  mean_out = mean;
  std_out = std::sqrt(var);
  // Zero variance: leave the batch as is.
  if (!apply || !(std_out > 0.0)) return;
  for (double& a : adv) a = (a - mean) / std_out;
}

std::string where(std::size_t team, const std::string& who, int epoch, std::size_t mb) {
  return "team " + std::to_string(team) + " " + who + " epoch " + std::to_string(epoch) + " minibatch " +
         std::to_string(mb);
}

double critic_phase(CriticNet& critic, AdamState& opt, const std::vector<double>& inputs,
                    std::span<const double> targets, std::size_t samples, const HappoConfig& cfg, Rng& rng,
                    std::size_t team_index) {
  double loss_sum = 0.0;
  int count = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto batches = split_minibatches(samples, cfg.minibatches, rng);
    for (std::size_t mb = 0; mb < batches.size(); ++mb) {
      const double loss = critic_step(critic, opt, inputs, targets, batches[mb], cfg);
      if (!std::isfinite(loss)) throw NumericError("non-finite value loss in " + where(team_index, "critic", epoch, mb));
      loss_sum += loss;
      ++count;
    }
  }
  return loss_sum / count;
}

}  // namespace

double critic_step(CriticNet& critic, AdamState& opt, std::span<const double> inputs, std::span<const double> targets,
                   std::span<const std::size_t> indices, const HappoConfig& cfg) {
  const std::size_t dim = critic.mlp.in_dim();
  if (indices.empty()) throw ContractError("critic step needs at least one sample");
  if (inputs.size() != targets.size() * dim) throw ShapeError("critic inputs and targets disagree");
  const std::size_t chunks = std::min(kChunks, indices.size());
  const double inv_b = 1.0 / static_cast<double>(indices.size());
  std::vector<std::vector<double>> grads(chunks, std::vector<double>(critic.mlp.size(), 0.0));
  std::vector<double> losses(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    MlpTape tape;
    double upstream[1];
    const auto r = chunk(c, chunks, indices.size());
    for (std::size_t j = r.begin; j < r.end; ++j) {
      const std::size_t i = indices[j];
      numcore::mlp_forward(critic.mlp, inputs.subspan(i * dim, dim), tape);
      const double err = tape.output()[0] - targets[i];
      losses[c] += err * err;
      upstream[0] = cfg.value_coef * 2.0 * err * inv_b;
      numcore::mlp_backward_accumulate(critic.mlp, tape, upstream, grads[c]);
    }
  });
  std::vector<double> grad(critic.mlp.size(), 0.0);
  double loss = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += grads[c][p];
    loss += losses[c];
  }
  loss *= inv_b;
  if (!std::isfinite(loss)) return loss;
  clip_global_norm(grad, {}, cfg.max_grad_norm);
  numcore::adam_step(critic.mlp.values(), grad, opt, AdamConfig{cfg.critic_lr});
  return loss;
}

UpdateStats happo_update(LearnerSet& learners, const RolloutBuffer& buffer, const HappoConfig& cfg) {
  cfg.validate();
  if (learners.teams.size() != buffer.teams.size()) throw ShapeError("buffer and learners cover different teams");
  const std::size_t samples = buffer.samples();
  UpdateStats stats;
  stats.teams.resize(learners.teams.size());
  bool any_unfrozen = false;

  for (std::size_t t = 0; t < learners.teams.size(); ++t) {
    TeamLearner& team = learners.teams[t];
    const TeamBuffer& tb = buffer.teams[t];
    auto& st = stats.teams[t];
    if (tb.advantages.size() != samples) throw ContractError("buffer was not finalized before the update");
    if (team.frozen) continue;
    any_unfrozen = true;
    st.updated = true;

    std::vector<double> adv = tb.advantages;
    normalize(adv, st.adv_mean, st.adv_std, cfg.normalize_advantages);

    std::vector<std::size_t> perm(team.agents.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    team.rng.shuffle(std::span<std::size_t>(perm));

    std::vector<double> factor(samples, 1.0);
    std::vector<double> scaled(samples);
    double loss_sum = 0.0, clip_sum = 0.0, kl_sum = 0.0, entropy_sum = 0.0;
    double evaluated = 0.0;
    for (std::size_t k : perm) {
      AgentLearner& agent = team.agents[k];
      PolicyNet& policy = agent.policy;
      for (std::size_t i = 0; i < samples; ++i) scaled[i] = factor[i] * adv[i];
      std::vector<double> grad_mlp(policy.mlp.size());
      std::vector<double> grad_ls(policy.log_std.size());
      for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto batches = split_minibatches(samples, cfg.minibatches, team.rng);
        for (std::size_t mb = 0; mb < batches.size(); ++mb) {
          std::fill(grad_mlp.begin(), grad_mlp.end(), 0.0);
          std::fill(grad_ls.begin(), grad_ls.end(), 0.0);
          const auto res = actor_gradient(policy, tb, k, scaled, batches[mb], cfg.clip, grad_mlp, grad_ls);
          const double entropy = numcore::gaussian_entropy(policy.log_std);
          const double loss = res.loss_sum / static_cast<double>(batches[mb].size()) - cfg.entropy_coef * entropy;
          if (!std::isfinite(loss)) {
            throw NumericError("non-finite policy loss in " + where(t, "agent " + std::to_string(k), epoch, mb));
          }
          for (std::size_t q = 0; q < grad_ls.size(); ++q) {
            if (numcore::clamp_log_std(policy.log_std[q]) == policy.log_std[q]) grad_ls[q] -= cfg.entropy_coef;
          }
          clip_global_norm(grad_mlp, grad_ls, cfg.max_grad_norm);
          numcore::adam_step(policy.mlp.values(), grad_mlp, agent.mlp_opt, AdamConfig{cfg.actor_lr});
          numcore::adam_step(policy.log_std, grad_ls, agent.log_std_opt, AdamConfig{cfg.actor_lr});
          loss_sum += loss;
          clip_sum += res.clipped / static_cast<double>(batches[mb].size());
          evaluated += 1.0;
        }
      }
      const auto new_logp = full_log_probs(policy, tb, k, samples);
      double kl = 0.0;
      for (std::size_t i = 0; i < samples; ++i) {
        const double diff = new_logp[i] - tb.log_probs[k][i];
        kl -= diff;
        factor[i] *= std::exp(diff);
      }
      kl_sum += kl / static_cast<double>(samples);
      entropy_sum += numcore::gaussian_entropy(policy.log_std);
    }
    const double n_agents = static_cast<double>(team.agents.size());
    st.policy_loss = loss_sum / evaluated;
    st.clip_frac = clip_sum / evaluated;
    st.approx_kl = kl_sum / n_agents;
    st.entropy = entropy_sum / n_agents;

    if (!learners.has_shared_critic) {
      const auto inputs = critic_inputs(tb, samples);
      st.value_loss = critic_phase(team.critic, team.critic_opt, inputs, tb.returns, samples, cfg, team.rng, t);
    }
  }

  if (learners.has_shared_critic && any_unfrozen) {
    std::vector<double> inputs;
    const std::size_t dim = learners.shared_critic.mlp.in_dim();
    inputs.reserve(samples * dim);
    for (std::size_t i = 0; i < samples; ++i) {
      for (const auto& tb : buffer.teams) {
        std::size_t td = 0;
        for (std::size_t d : tb.obs_dims) td += d;
        const std::size_t at = inputs.size();
        inputs.resize(at + td);
        team_critic_input(tb, i, std::span<double>(inputs).subspan(at, td));
      }
    }
    Rng& rng = learners.teams.front().rng;
    stats.shared_value_loss = critic_phase(learners.shared_critic, learners.shared_opt, inputs, buffer.shared_returns,
                                           samples, cfg, rng, 0);
    for (auto& st : stats.teams) {
      if (st.updated) st.value_loss = stats.shared_value_loss;
    }
  }
  return stats;
}

ZeroSumToyResult zero_sum_critic_toy(double c, int steps, const HappoConfig& cfg, std::uint64_t seed) {
  constexpr std::size_t kObs = 4;
  constexpr std::size_t kInstances = 64;
  Rng init = Rng::derive(seed, 0x70e);
  std::vector<CriticNet> team(2);
  std::vector<AdamState> team_opt(2);
  for (std::size_t t = 0; t < 2; ++t) {
    team[t].mlp = numcore::make_mlp(kObs, cfg.critic_hidden, 1, 1.0, 1.0, init);
    team_opt[t] = AdamState::zeros(team[t].mlp.size());
  }
  CriticNet shared{numcore::make_mlp(2 * kObs, cfg.critic_hidden, 1, 1.0, 1.0, init)};
  AdamState shared_opt = AdamState::zeros(shared.mlp.size());

  // One-step episodes from a constant observation: every transition is terminal.
  const std::vector<double> obs(kObs * kInstances, 0.5);
  const std::vector<double> shared_obs(2 * kObs * kInstances, 0.5);
  const std::vector<double> dones(kInstances, 1.0);
  const std::vector<double> boot(kInstances, 0.0);
  const std::vector<double> rewards[2] = {std::vector<double>(kInstances, c), std::vector<double>(kInstances, -c)};
  std::vector<double> mean_reward(kInstances);
  for (std::size_t n = 0; n < kInstances; ++n) mean_reward[n] = 0.5 * (rewards[0][n] + rewards[1][n]);
  std::vector<std::size_t> all(kInstances);
  std::iota(all.begin(), all.end(), std::size_t{0});

  auto values_of = [&](const CriticNet& critic, const std::vector<double>& inputs) {
    const std::size_t dim = critic.mlp.in_dim();
    std::vector<double> v(kInstances);
    for (std::size_t n = 0; n < kInstances; ++n) {
      v[n] = numcore::mlp_forward(critic.mlp, std::span<const double>(inputs).subspan(n * dim, dim))[0];
    }
    return v;
  };
  for (int s = 0; s < steps; ++s) {
    for (std::size_t t = 0; t < 2; ++t) {
      const auto gae = compute_gae(rewards[t], values_of(team[t], obs), dones, boot, 1, cfg.discount, cfg.gae_lambda);
      critic_step(team[t], team_opt[t], obs, gae.returns, all, cfg);
    }
    const auto gae = compute_gae(mean_reward, values_of(shared, shared_obs), dones, boot, 1, cfg.discount, cfg.gae_lambda);
    critic_step(shared, shared_opt, shared_obs, gae.returns, all, cfg);
  }
  ZeroSumToyResult out;
  out.shared_value = values_of(shared, shared_obs)[0];
  for (std::size_t t = 0; t < 2; ++t) out.team_values.push_back(values_of(team[t], obs)[0]);
  out.true_returns = {c, -c};
  return out;
}

}  // namespace arena::harl
