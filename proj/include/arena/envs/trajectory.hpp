#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arena/envs/environment.hpp"

namespace arena::envs {

/// Binary trajectory log, little-endian:
///
///   "HARLTRAJ"  8 bytes magic
///   u32         format version (1)
///   u8          task tag (TaskKind)
///   u32         Environment::spec_hash of the recording environment
///   f64         dt
///   u64         reset seed
///   i64         curriculum stage
///   str         context: free text (the harness embeds the run config)
///   u32, u32    agent count, team count
///   u64         step count, then per step:
///                 per agent: u64 arity + f64 action values
///                 per team:  f64 reward
///                 u8 done
///   u32         crc32 of every preceding byte
struct TrajectoryHeader {
  TaskKind task = TaskKind::WalkToPoint;
  std::uint32_t spec_hash = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  int stage = 0;
  std::string context;
  std::uint32_t agent_count = 0;
  std::uint32_t team_count = 0;
};

struct TrajectoryStep {
  Actions actions;
  std::vector<double> team_rewards;
  bool done = false;
};

struct TrajectoryLog {
  TrajectoryHeader header;
  std::vector<TrajectoryStep> steps;
};

/// Starts a log for an episode of env reset with seed.
TrajectoryLog begin_trajectory(const Environment& env, std::uint64_t seed, std::string context);

std::string encode_trajectory(const TrajectoryLog& log);
TrajectoryLog decode_trajectory(std::string_view bytes);
void save_trajectory(const std::string& path, const TrajectoryLog& log);
TrajectoryLog load_trajectory(const std::string& path);

/// Re-simulates the logged actions from reset(seed). Throws IncompatibleError
/// when env does not match the header and ContractError when any replayed
/// reward or done flag differs from the log. Returns the visited states,
/// initial state first.
std::vector<EnvState> replay_trajectory(const Environment& env, const TrajectoryLog& log);

/// CSV with one row per visited state: step, time, per-body position,
/// velocity and heading, per-team reward and done flag.
std::string trajectory_csv(const Environment& env, const TrajectoryLog& log);

}  // namespace arena::envs
