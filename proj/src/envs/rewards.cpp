#include "arena/envs/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arena/core/error.hpp"

namespace arena::envs {

using physics2d::Vec2;

namespace {

double shaping_value(const EnvState& state, std::size_t agent, ShapingTerm term) {
  const auto& body = state.bodies[agent];
  switch (term) {
    case ShapingTerm::VelocityTowardGoal: {
      const Vec2 to_goal = state.goals[agent] - body.position;
      const double dist = physics2d::norm(to_goal);
      if (dist == 0.0) return 0.0;
      return physics2d::dot(body.velocity, (1.0 / dist) * to_goal);
    }
    case ShapingTerm::ActionMagnitude: {
      double sq = 0.0;
      if (agent < state.last_actions.size()) {
        for (double a : state.last_actions[agent]) {
          const double c = std::clamp(a, -1.0, 1.0);
          sq += c * c;
        }
      }
      return sq;
    }
  }
  return 0.0;
}

bool flag(const std::vector<bool>& v, std::size_t i) { return i < v.size() && v[i]; }

}  // namespace

double reward_walk_to_point(const EnvState& state, std::size_t agent, const RewardConfig& cfg) {
  double shaped = 0.0;
  for (const auto& w : cfg.shaping) shaped += w.weight * shaping_value(state, agent, w.term);
  const double d = physics2d::norm(state.goals[agent] - state.bodies[agent].position);
  const double reached = flag(state.events.reached_goal, agent) ? 1.0 : 0.0;
  return shaped + cfg.delta * reached + cfg.gamma_dist * (1.0 - std::tanh(cfg.alpha * d));
}

double reward_block_push(const EnvState& state, std::size_t agent, const RewardConfig& cfg) {
  const double r_max = state.arena.ring_radius();
  const auto& robot = state.bodies[agent];
  const auto& block = state.bodies[state.agent_count + agent];
  const double r = physics2d::norm(block.position);
  const double gap = std::max(0.0, physics2d::norm(block.position - robot.position) - robot.radius - block.radius);
  const double r_hat = std::tanh(r / r_max);
  const double d_hat = 1.0 - std::tanh(gap / r_max);
  const double events = (flag(state.events.block_out, agent) ? 1.0 : 0.0) -
                        (flag(state.events.left_ring, agent) ? 1.0 : 0.0);
  return (r_hat + d_hat) * cfg.dt + cfg.step_penalty + cfg.delta * events;
}

double reward_sumo(const EliminationStatus& elim, int team, const RewardConfig& cfg) {
  if (team != 0 && team != 1) throw ContractError("sumo reward is defined for teams 0 and 1, got " + std::to_string(team));
  if (elim.team_out.size() != 2) throw ContractError("sumo reward requires exactly two teams");
  const double tau = elim.tie ? 0.0 : 1.0;
  const double l_i = elim.team_out[team] ? 1.0 : 0.0;
  const double l_j = elim.team_out[1 - team] ? 1.0 : 0.0;
  const double phi = elim.timeout ? 1.0 : 0.0;
  return tau * (l_j - l_i - phi) * cfg.kappa;
}

double reward_laser_tag(const EnvState& state, int team, const RewardConfig& cfg) {
  if (team != 0 && team != 1) throw ContractError("laser tag has teams 0 (tanks) and 1 (drones)");
  double knockouts = 0.0;
  double dense = 0.0;
  double drones = 0.0;
  for (std::size_t i = 0; i < state.agent_count; ++i) {
    if (state.agent_team[i] != 1) continue;
    drones += 1.0;
    if (flag(state.events.knocked_out, i)) {
      knockouts += 1.0;
    } else if (!flag(state.elim.agent_out, i)) {
      dense += std::exp(-physics2d::norm(state.goals[i] - state.bodies[i].position));
    }
  }
  if (team == 0) return cfg.knockout_reward * knockouts + cfg.tank_step_penalty;
  return (drones > 0.0 ? dense / drones : 0.0) - cfg.knockout_reward * knockouts;
}

}  // namespace arena::envs
