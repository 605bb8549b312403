#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arena/physics2d/physics.hpp"

namespace arena::envs {

enum class TaskKind : std::uint8_t { WalkToPoint = 0, BlockPush = 1, SumoAdversarial = 2, LaserTag = 3 };

std::string_view task_name(TaskKind task);
/// Throws ConfigError for unknown names.
TaskKind parse_task(std::string_view name);
bool is_adversarial(TaskKind task);

enum class ShapingTerm : std::uint8_t {
  VelocityTowardGoal = 0,  // v . unit(goal - p)
  ActionMagnitude = 1,     // |clip(a)|^2
};

struct ShapingWeight {
  double weight = 0.0;
  ShapingTerm term = ShapingTerm::VelocityTowardGoal;
};

/// Reward scalars shared by all tasks.
struct RewardConfig {
  std::vector<ShapingWeight> shaping{{0.1, ShapingTerm::VelocityTowardGoal},
                                     {-0.01, ShapingTerm::ActionMagnitude}};
  double delta = 10.0;       // sparse-event scale
  double gamma_dist = 1.0;   // goal-distance reward scale
  double alpha = 1.0;        // goal-distance sharpness
  double step_penalty = -0.005;
  double kappa = 1.0;        // sumo scale
  double dt = 1.0 / 60.0;
  double reach_radius = 0.25;
  double knockout_reward = 1.0;
  double tank_step_penalty = -0.01;

  /// Throws ConfigError when kappa <= 0, step_penalty > 0 or alpha <= 0.
  void validate() const;
};

struct AgentSpec {
  int agent_id = 0;
  physics2d::BodyKind kind = physics2d::BodyKind::Holonomic;
  bool aerial = false;
  double radius = 0.3;
  double mass = 1.0;
  physics2d::ActuationLimits limits;
  std::vector<std::size_t> hidden{64, 64};

  std::size_t action_arity() const;
};

struct TeamSpec {
  int team_id = 0;
  std::vector<AgentSpec> agents;
};

/// Throws ConfigError unless team ids are 0..n-1 in order and every team
/// has at least one agent with a consistent action arity.
void validate_teams(const std::vector<TeamSpec>& teams);

struct LaserTagConfig {
  double knockout_radius = 0.3;
  double ray_height_band = 3.0;
  double initial_altitude = 2.0;
  double max_altitude = 5.0;
  double goal_offset = 2.0;
};

struct EnvConfig {
  TaskKind task = TaskKind::SumoAdversarial;
  double ring_radius = 4.0;
  double rect_width = 20.0;
  double rect_height = 10.0;
  double min_height = 0.5;
  physics2d::PhysicsConfig physics;
  RewardConfig reward;
  int max_episode_len = 600;
  double spawn_fraction = 0.6;  // spawn disc radius as a fraction of r_max
  double goal_min = 1.0;
  double goal_max = 3.0;
  double block_radius = 0.4;
  double block_mass = 2.0;
  LaserTagConfig laser;

  physics2d::ArenaSpec arena() const;
  void validate() const;
};

}  // namespace arena::envs
