#include "arena/harness/tournament.hpp"

#include <cmath>
#include <json.hpp>
#include <memory>

#include "arena/core/error.hpp"
#include "arena/core/parallel.hpp"
#include "arena/core/rng.hpp"

namespace arena::harness {

Controller mean_controller(const harl::LearnerSet& learners) {
  auto owned = std::make_shared<const harl::LearnerSet>(learners);
  return [owned](const envs::Environment& env, const envs::EnvState&, const envs::Observations& obs,
                 std::size_t team, envs::Actions& actions) {
    const auto members = env.team_agents(team);
    const auto& tl = owned->teams[team];
    for (std::size_t k = 0; k < members.size(); ++k) {
      actions[members[k]] = harl::policy_mean(tl.agents[k].policy, obs[members[k]]);
    }
  };
}

double WinRateReport::standard_error() const {
  if (n_instances == 0) return 0.0;
  return std::sqrt(win_rate * (1.0 - win_rate) / static_cast<double>(n_instances));
}

namespace {

enum class Outcome : std::uint8_t { Win, Loss, Tie };

Outcome play(const Controller& a, const Controller& b, const envs::Environment& env, std::uint64_t spawn_seed,
             std::size_t seat) {
  auto reset = env.reset(spawn_seed);
  envs::EnvState state = std::move(reset.state);
  envs::Observations obs = std::move(reset.observations);
  envs::Actions actions(env.agent_count());
  for (std::size_t g = 0; g < env.agent_count(); ++g) actions[g].assign(env.action_dim(g), 0.0);
  std::vector<double> rewards;
  const int limit = env.config().max_episode_len + 1;
  for (int t = 0; t < limit && !state.done; ++t) {
    a(env, state, obs, seat, actions);
    b(env, state, obs, 1 - seat, actions);
    env.step_in_place(state, actions, rewards);
    if (!state.done) obs = env.observe_all(state);
  }
  if (!state.done) throw ContractError("tournament episode did not terminate");
  const int winner = envs::winning_team(state.elim);
  if (winner < 0) return Outcome::Tie;
  return static_cast<std::size_t>(winner) == seat ? Outcome::Win : Outcome::Loss;
}

}  // namespace

WinRateReport run_tournament(const Controller& a, const Controller& b, const envs::Environment& env,
                             std::size_t n_instances, std::uint64_t seed, std::string opponent_tag) {
  if (env.team_count() != 2) throw ConfigError("tournaments need a 2-team environment");
  if (n_instances == 0) throw ConfigError("tournament needs at least one instance");
  std::vector<Outcome> outcomes(n_instances);
  parallel_for(n_instances, [&](std::size_t i) {
    outcomes[i] = play(a, b, env, mix_seed(seed, i / 2), i % 2);
  });
  WinRateReport r;
  r.opponent = std::move(opponent_tag);
  r.n_instances = n_instances;
  for (std::size_t i = 0; i < n_instances; ++i) {
    const std::size_t seat = i % 2;
    switch (outcomes[i]) {
      case Outcome::Win: r.wins++; r.seat_wins[seat]++; break;
      case Outcome::Loss: r.losses++; r.seat_losses[seat]++; break;
      case Outcome::Tie: r.ties++; r.seat_ties[seat]++; break;
    }
  }
  r.win_rate = static_cast<double>(r.wins) / static_cast<double>(n_instances);
  return r;
}

WinRateReport run_tournament(const harl::LearnerSet& a, const harl::LearnerSet& b, const envs::Environment& env,
                             std::size_t n_instances, std::uint64_t seed, std::string opponent_tag) {
  harl::check_compatible(a, env);
  harl::check_compatible(b, env);
  return run_tournament(mean_controller(a), mean_controller(b), env, n_instances, seed, std::move(opponent_tag));
}

envs::TrajectoryLog record_match(const Controller& a, const Controller& b, const envs::Environment& env,
                                 std::uint64_t spawn_seed, std::size_t seat, std::string context) {
  if (seat >= env.team_count()) throw ConfigError("seat is not a team of the environment");
  auto log = envs::begin_trajectory(env, spawn_seed, std::move(context));
  auto reset = env.reset(spawn_seed);
  envs::EnvState state = std::move(reset.state);
  envs::Observations obs = std::move(reset.observations);
  envs::Actions actions(env.agent_count());
  for (std::size_t g = 0; g < env.agent_count(); ++g) actions[g].assign(env.action_dim(g), 0.0);
  std::vector<double> rewards;
  const int limit = env.config().max_episode_len + 1;
  for (int t = 0; t < limit && !state.done; ++t) {
    for (std::size_t team = 0; team < env.team_count(); ++team) (team == seat ? a : b)(env, state, obs, team, actions);
    env.step_in_place(state, actions, rewards);
    log.steps.push_back({actions, rewards, state.done});
    if (!state.done) obs = env.observe_all(state);
  }
  return log;
}

std::string report_to_json(const WinRateReport& r) {
  nlohmann::ordered_json j = {{"opponent", r.opponent},
                              {"n_instances", r.n_instances},
                              {"wins", r.wins},
                              {"losses", r.losses},
                              {"ties", r.ties},
                              {"win_rate", r.win_rate},
                              {"standard_error", r.standard_error()},
                              {"seat_wins", r.seat_wins},
                              {"seat_losses", r.seat_losses},
                              {"seat_ties", r.seat_ties}};
  return j.dump(2) + "\n";
}

}  // namespace arena::harness
