#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arena/curriculum/layout.hpp"
#include "arena/envs/config.hpp"
#include "arena/envs/state.hpp"

namespace arena::envs {

using Observations = std::vector<std::vector<double>>;  // per agent
using Actions = std::vector<std::vector<double>>;       // per agent

/// Feature blocks a task exposes to an agent, as (slot name, width) in the
/// canonical slot order shared by every task.
std::vector<std::pair<std::string, std::size_t>> task_features(TaskKind task,
                                                               std::size_t opponents,
                                                               std::size_t teammates);

struct ResetResult {
  EnvState state;
  Observations observations;
};

struct StepResult {
  EnvState state;
  std::vector<double> team_rewards;
  bool done = false;
  Observations observations;
};

/// Immutable description of a multi-team task: teams, physics/reward
/// configuration, per-agent observation layouts and the active curriculum
/// stage. reset and step are pure functions of their arguments.
class Environment {
 public:
  /// layouts holds one entry per agent (global order). Throws ConfigError
  /// when the agent specs do not fit the task (e.g. sumo needs exactly 2 teams).
  Environment(std::vector<TeamSpec> teams, EnvConfig cfg,
              std::vector<curriculum::ObservationLayout> layouts, int stage);

  /// Single-stage convenience: every agent gets the task's default layout.
  static Environment with_default_layouts(std::vector<TeamSpec> teams, EnvConfig cfg);

  const std::vector<TeamSpec>& teams() const { return teams_; }
  const EnvConfig& config() const { return cfg_; }
  int stage() const { return stage_; }
  std::size_t team_count() const { return teams_.size(); }
  std::size_t agent_count() const { return agent_specs_.size(); }
  const AgentSpec& agent(std::size_t global) const { return agent_specs_[global]; }
  int team_of(std::size_t global) const { return agent_team_[global]; }
  /// Global agent indices of a team, in declaration order.
  std::span<const std::size_t> team_agents(std::size_t team) const { return team_members_[team]; }
  const curriculum::ObservationLayout& layout(std::size_t global) const { return layouts_[global]; }
  std::size_t obs_dim(std::size_t global) const { return layouts_[global].total_width(); }
  std::size_t action_dim(std::size_t global) const { return agent_specs_[global].action_arity(); }

  ResetResult reset(std::uint64_t seed) const;
  StepResult step(const EnvState& state, const Actions& actions) const;

  /// In-place step used by rollout workers. Returns done; fills team_rewards.
  bool step_in_place(EnvState& state, const Actions& actions, std::vector<double>& team_rewards) const;

  /// Observation of one agent under its layout at the environment's stage.
  std::vector<double> build_observation(const EnvState& state, std::size_t agent) const;
  void build_observation(const EnvState& state, std::size_t agent, std::span<double> out) const;
  Observations observe_all(const EnvState& state) const;

  /// Hash of teams, configuration, layouts and stage; identifies the
  /// simulation a trajectory log was recorded against.
  std::uint32_t spec_hash() const;

 private:
  struct SlotBinding {
    enum class Feature : std::uint8_t {
      OwnVelocity, Heading, Goal, Block, Opponent, Teammate, RingRadius, CenterDistance, Altitude
    } feature;
    std::size_t index = 0;  // opponent / teammate ordinal
    std::size_t offset = 0;
    bool active = false;
    bool known = false;
  };

  void place_agents(EnvState& state) const;
  void update_goals(EnvState& state) const;

  std::vector<TeamSpec> teams_;
  EnvConfig cfg_;
  std::vector<curriculum::ObservationLayout> layouts_;
  int stage_ = 0;
  std::vector<AgentSpec> agent_specs_;
  std::vector<int> agent_team_;
  std::vector<std::vector<std::size_t>> team_members_;
  std::vector<std::vector<std::size_t>> opponents_;  // per agent, global indices
  std::vector<std::vector<std::size_t>> teammates_;
  std::vector<std::vector<SlotBinding>> bindings_;
};

}  // namespace arena::envs
