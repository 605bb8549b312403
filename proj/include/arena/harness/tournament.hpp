#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "arena/envs/environment.hpp"
#include "arena/envs/trajectory.hpp"
#include "arena/harl/learner.hpp"

namespace arena::harness {

/// Deterministic controller: writes the actions of every agent of `team`.
using Controller = std::function<void(const envs::Environment& env, const envs::EnvState& state,
                                      const envs::Observations& obs, std::size_t team, envs::Actions& actions)>;

/// Acts with the policy means of learners.teams[team].
Controller mean_controller(const harl::LearnerSet& learners);

/// Outcomes from side A's point of view.
struct WinRateReport {
  std::string opponent;  // e.g. "initial-snapshot", "update-500"
  std::size_t n_instances = 0;
  std::size_t wins = 0;
  std::size_t losses = 0;
  std::size_t ties = 0;
  double win_rate = 0.0;  // wins / n_instances
  /// Breakdown by the team seat side A occupied.
  std::array<std::size_t, 2> seat_wins{};
  std::array<std::size_t, 2> seat_losses{};
  std::array<std::size_t, 2> seat_ties{};

  double standard_error() const;
  friend bool operator==(const WinRateReport&, const WinRateReport&) = default;
};

/// Instance i plays spawn seed mix_seed(seed, i / 2) with side A on team
/// seat i % 2, so consecutive instances form seat-swapped pairs over the
/// same spawn. A wins when the opponent's team is the only one out; ties and
/// timeouts without a sole eliminated team count as ties. Needs a 2-team env.
WinRateReport run_tournament(const Controller& a, const Controller& b, const envs::Environment& env,
                             std::size_t n_instances, std::uint64_t seed, std::string opponent_tag);

/// Learner-set version; throws ConfigError when either set does not fit env.
WinRateReport run_tournament(const harl::LearnerSet& a, const harl::LearnerSet& b, const envs::Environment& env,
                             std::size_t n_instances, std::uint64_t seed, std::string opponent_tag);

/// Plays one deterministic episode with side A on team `seat` (the other
/// team is driven by b, or by a as well for single-team tasks) and logs it.
envs::TrajectoryLog record_match(const Controller& a, const Controller& b, const envs::Environment& env,
                                 std::uint64_t spawn_seed, std::size_t seat, std::string context);

std::string report_to_json(const WinRateReport& report);

}  // namespace arena::harness
