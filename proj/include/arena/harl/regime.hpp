#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "arena/envs/environment.hpp"
#include "arena/harl/happo.hpp"
#include "arena/harl/learner.hpp"
#include "arena/harl/rollout.hpp"

namespace arena::harl {

enum class RegimeKind { Simultaneous, Leapfrog };

struct Regime {
  RegimeKind kind = RegimeKind::Simultaneous;
  int interval = 10;  // updates per leapfrog turn
};

std::string_view regime_name(RegimeKind kind);
RegimeKind parse_regime(std::string_view name);

/// Frozen flag of every team at a given update: none for Simultaneous; for
/// Leapfrog only team (update / interval) mod n_teams trains.
std::vector<bool> frozen_flags(const Regime& regime, int update, std::size_t n_teams);

/// Snapshot after update u when (u + 1) % every == 0 or u is the last
/// update, giving ceil(total / every) snapshots.
bool is_snapshot_update(int update, int total_updates, int every);

/// Aggregates of the episodes that finished during one rollout.
struct RolloutSummary {
  std::size_t episodes = 0;
  std::vector<double> mean_return;  // per team, NaN without episodes
  double reach_rate = TeamUpdateStats::kNaN;
  double block_out_rate = TeamUpdateStats::kNaN;
  double mean_length = TeamUpdateStats::kNaN;
  std::vector<std::size_t> wins;  // per team
  std::size_t ties = 0;
};

RolloutSummary summarize_rollout(const RolloutBuffer& buffer, std::size_t n_teams);

struct UpdateRecord {
  int update = 0;
  std::vector<bool> frozen;
  UpdateStats stats;
  RolloutSummary rollout;
};

/// collect -> GAE -> HAPPO with the given frozen flags applied to learners.
UpdateRecord training_iteration(const envs::Environment& env, LearnerSet& learners, EnvBatch& batch,
                                const HappoConfig& cfg, std::size_t horizon, int update,
                                const std::vector<bool>& frozen);

struct RegimeHooks {
  /// Called after every update; returning false stops the run early.
  std::function<bool(const UpdateRecord&)> on_update;
  /// Called after snapshot updates (see is_snapshot_update).
  std::function<void(int update)> on_snapshot;
  int snapshot_every = 0;  // 0 disables snapshots
};

/// Runs updates [first_update, total_updates) under the regime. Throws
/// ConfigError for Leapfrog with fewer than 2 teams.
std::vector<UpdateRecord> run_regime(const Regime& regime, const envs::Environment& env, LearnerSet& learners,
                                     EnvBatch& batch, const HappoConfig& cfg, std::size_t horizon,
                                     int first_update, int total_updates, const RegimeHooks& hooks = {});

}  // namespace arena::harl
