#include "arena/harl/regime.hpp"

#include <string>

#include "arena/core/error.hpp"

namespace arena::harl {

std::string_view regime_name(RegimeKind kind) {
  return kind == RegimeKind::Simultaneous ? "simultaneous" : "leapfrog";
}

RegimeKind parse_regime(std::string_view name) {
  if (name == "simultaneous") return RegimeKind::Simultaneous;
  if (name == "leapfrog") return RegimeKind::Leapfrog;
  throw ConfigError("unknown regime '" + std::string(name) + "'");
}

std::vector<bool> frozen_flags(const Regime& regime, int update, std::size_t n_teams) {
  std::vector<bool> frozen(n_teams, false);
  if (regime.kind == RegimeKind::Leapfrog) {
    if (regime.interval < 1) throw ConfigError("leapfrog interval must be >= 1");
    const std::size_t active = static_cast<std::size_t>(update / regime.interval) % n_teams;
    for (std::size_t t = 0; t < n_teams; ++t) frozen[t] = t != active;
  }
  return frozen;
}

bool is_snapshot_update(int update, int total_updates, int every) {
  if (every <= 0) return false;
  return (update + 1) % every == 0 || update == total_updates - 1;
}

RolloutSummary summarize_rollout(const RolloutBuffer& buffer, std::size_t n_teams) {
  RolloutSummary s;
  s.episodes = buffer.episodes.size();
  s.mean_return.assign(n_teams, TeamUpdateStats::kNaN);
  s.wins.assign(n_teams, 0);
  if (s.episodes == 0) return s;
  std::vector<double> ret(n_teams, 0.0);
  double reach = 0.0, block = 0.0, length = 0.0;
  for (const auto& e : buffer.episodes) {
    for (std::size_t t = 0; t < n_teams; ++t) ret[t] += e.team_returns[t];
    reach += e.reach_fraction;
    block += e.block_out_fraction;
    length += e.length;
    if (e.winner >= 0) s.wins[static_cast<std::size_t>(e.winner)] += 1;
    if (e.winner < 0) s.ties += 1;
  }
  const double n = static_cast<double>(s.episodes);
  for (std::size_t t = 0; t < n_teams; ++t) s.mean_return[t] = ret[t] / n;
  s.reach_rate = reach / n;
  s.block_out_rate = block / n;
  s.mean_length = length / n;
  return s;
}

UpdateRecord training_iteration(const envs::Environment& env, LearnerSet& learners, EnvBatch& batch,
                                const HappoConfig& cfg, std::size_t horizon, int update,
                                const std::vector<bool>& frozen) {
  if (frozen.size() != learners.teams.size()) throw ShapeError("one frozen flag per team required");
  for (std::size_t t = 0; t < frozen.size(); ++t) learners.teams[t].frozen = frozen[t];
  auto buffer = collect_rollouts(env, learners, batch, horizon);
  finalize_buffer(buffer, cfg);
  UpdateRecord rec;
  rec.update = update;
  rec.frozen = frozen;
  rec.stats = happo_update(learners, buffer, cfg);
  rec.rollout = summarize_rollout(buffer, env.team_count());
  return rec;
}

std::vector<UpdateRecord> run_regime(const Regime& regime, const envs::Environment& env, LearnerSet& learners,
                                     EnvBatch& batch, const HappoConfig& cfg, std::size_t horizon,
                                     int first_update, int total_updates, const RegimeHooks& hooks) {
  if (regime.kind == RegimeKind::Leapfrog && env.team_count() < 2) {
    throw ConfigError("leapfrog needs at least 2 teams");
  }
  std::vector<UpdateRecord> history;
  for (int u = first_update; u < total_updates; ++u) {
    history.push_back(training_iteration(env, learners, batch, cfg, horizon, u, frozen_flags(regime, u, env.team_count())));
    const bool keep_going = !hooks.on_update || hooks.on_update(history.back());
    if (hooks.on_snapshot && is_snapshot_update(u, total_updates, hooks.snapshot_every)) hooks.on_snapshot(u);
    if (!keep_going) break;
  }
  return history;
}

}  // namespace arena::harl
