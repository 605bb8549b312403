#include "arena/envs/config.hpp"

#include <array>
#include <string>

#include "arena/core/error.hpp"

namespace arena::envs {

namespace {

constexpr std::array<std::string_view, 4> kTaskNames{"walk_to_point", "block_push", "sumo", "laser_tag"};

}  // namespace

std::string_view task_name(TaskKind task) { return kTaskNames[static_cast<std::size_t>(task)]; }

TaskKind parse_task(std::string_view name) {
  for (std::size_t i = 0; i < kTaskNames.size(); ++i)
    if (kTaskNames[i] == name) return static_cast<TaskKind>(i);
  throw ConfigError("unknown task '" + std::string(name) + "'");
}

bool is_adversarial(TaskKind task) {
  return task == TaskKind::SumoAdversarial || task == TaskKind::LaserTag;
}

void RewardConfig::validate() const {
  if (!(kappa > 0.0)) throw ConfigError("reward kappa must be positive");
  if (step_penalty > 0.0) throw ConfigError("reward step penalty T must be <= 0");
  if (!(alpha > 0.0)) throw ConfigError("reward alpha must be positive");
  if (!(dt > 0.0)) throw ConfigError("reward dt must be positive");
  if (!(reach_radius > 0.0)) throw ConfigError("reach radius must be positive");
}

std::size_t AgentSpec::action_arity() const {
  switch (kind) {
    case physics2d::BodyKind::Holonomic: return aerial ? 3 : 2;
    case physics2d::BodyKind::DifferentialDrive: return 2;
    case physics2d::BodyKind::Static: return 0;
  }
  return 0;
}

void validate_teams(const std::vector<TeamSpec>& teams) {
  if (teams.empty()) throw ConfigError("at least one team is required");
  for (std::size_t t = 0; t < teams.size(); ++t) {
    if (teams[t].team_id != static_cast<int>(t)) {
      throw ConfigError("team ids must be contiguous from 0 (found " + std::to_string(teams[t].team_id) +
                        " at position " + std::to_string(t) + ")");
    }
    if (teams[t].agents.empty()) throw ConfigError("team " + std::to_string(t) + " has no agents");
    for (const auto& a : teams[t].agents) {
      if (!(a.radius > 0.0) || !(a.mass > 0.0)) throw ConfigError("agent radius and mass must be positive");
      if (a.kind == physics2d::BodyKind::Static) throw ConfigError("agents cannot be static bodies");
      if (a.aerial && a.kind != physics2d::BodyKind::Holonomic) {
        throw ConfigError("aerial agents must be holonomic");
      }
    }
  }
}

physics2d::ArenaSpec EnvConfig::arena() const {
  physics2d::ArenaSpec spec;
  if (task == TaskKind::LaserTag) {
    spec.shape = physics2d::Rect{rect_width, rect_height};
    spec.min_height = min_height;
  } else {
    spec.shape = physics2d::Ring{ring_radius};
  }
  return spec;
}

void EnvConfig::validate() const {
  reward.validate();
  if (!(ring_radius > 0.0) || !(rect_width > 0.0) || !(rect_height > 0.0)) {
    throw ConfigError("arena dimensions must be positive");
  }
  if (min_height < 0.0) throw ConfigError("min_height must be >= 0");
  if (max_episode_len < 1) throw ConfigError("max_episode_len must be >= 1");
  if (!(physics.dt > 0.0)) throw ConfigError("physics dt must be positive");
  if (physics.restitution < 0.0 || physics.restitution > 1.0) throw ConfigError("restitution must be in [0, 1]");
  if (physics.drag < 0.0) throw ConfigError("drag must be >= 0");
  if (!(spawn_fraction > 0.0 && spawn_fraction < 1.0)) throw ConfigError("spawn_fraction must be in (0, 1)");
  if (!(goal_min >= 0.0 && goal_max >= goal_min)) throw ConfigError("goal distance band is invalid");
}

}  // namespace arena::envs
