#pragma once

#include <cstddef>
#include <vector>

#include "arena/core/binary_io.hpp"
#include "arena/core/rng.hpp"
#include "arena/physics2d/physics.hpp"

namespace arena::envs {

/// Elimination bookkeeping. team_out holds L_i, tie holds the simultaneous
/// elimination flag (tau = 0), timeout holds phi.
struct EliminationStatus {
  std::vector<bool> team_out;
  bool tie = false;
  bool timeout = false;
  std::vector<bool> agent_out;

  friend bool operator==(const EliminationStatus&, const EliminationStatus&) = default;
};

/// Transition indicators for the most recent step, one entry per agent.
struct StepEvents {
  std::vector<bool> reached_goal;
  std::vector<bool> left_ring;
  std::vector<bool> block_out;  // the agent's own block left the ring
  std::vector<bool> knocked_out;

  friend bool operator==(const StepEvents&, const StepEvents&) = default;
};

struct EnvState {
  /// Agents in declaration order, then task objects (one block per agent in BlockPush).
  std::vector<physics2d::DiscBody> bodies;
  physics2d::ArenaSpec arena;
  std::vector<physics2d::Vec2> goals;  // per agent
  std::vector<int> agent_team;
  std::size_t agent_count = 0;
  EliminationStatus elim;
  StepEvents events;
  std::vector<bool> reached;    // goal reached at least once
  std::vector<bool> block_out;  // per agent block
  std::vector<std::vector<double>> last_actions;
  int step = 0;
  bool done = false;
  Rng rng;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

/// Index of the only team still standing when every other team is out,
/// or -1 (no elimination, tie, or several teams left).
int winning_team(const EliminationStatus& elim);

void write_env_state(ByteWriter& out, const EnvState& state);
EnvState read_env_state(ByteReader& in);

}  // namespace arena::envs
