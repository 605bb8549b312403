#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arena/curriculum/layout.hpp"
#include "arena/envs/config.hpp"

namespace arena::curriculum {

/// Gate metrics understood by advance().
inline constexpr std::string_view kKnownMetrics[] = {"mean_episode_return", "reach_rate", "block_out_rate",
                                                     "win_rate_vs_initial"};

struct AdvanceGate {
  std::string metric = "mean_episode_return";
  double threshold = 0.0;
  int patience = 1;  // consecutive evaluations at or above threshold
};

struct StagePlan {
  std::string name;
  envs::EnvConfig env;
  AdvanceGate gate;
  /// Optional explicit feature list; empty means the task's default features.
  std::vector<std::pair<std::string, std::size_t>> features;
  /// Hard cap on updates spent in the stage; 0 means no cap.
  int max_updates = 0;
};

struct CurriculumPlan {
  std::vector<StagePlan> stages;
  std::size_t zero_buffer_width = 50;

  /// Throws ConfigError for an empty plan, non-finite thresholds, patience < 1
  /// or unknown gate metrics.
  void validate() const;
};

/// Walk-to-point, block push, adversarial sumo with the default gates.
CurriculumPlan default_sumo_plan();

/// Single-stage plan around one environment configuration.
CurriculumPlan single_stage_plan(const envs::EnvConfig& env, std::size_t zero_buffer_width = 0);

/// Features of one stage for the given agent, as (name, width).
std::vector<std::pair<std::string, std::size_t>> stage_features(const StagePlan& stage,
                                                                const std::vector<envs::TeamSpec>& teams,
                                                                std::size_t global_agent);

/// Union of all stages' features in first-appearance order, each slot active
/// from the first stage that uses it, followed by the zero-buffer tail.
/// Throws ConfigError for duplicate names within a stage or one name used
/// with two widths.
ObservationLayout make_layout(const CurriculumPlan& plan, const std::vector<envs::TeamSpec>& teams,
                              std::size_t global_agent);

/// Layouts for every agent in global order.
std::vector<ObservationLayout> make_layouts(const CurriculumPlan& plan, const std::vector<envs::TeamSpec>& teams);

/// One evaluation of gate metrics.
using MetricRecord = std::map<std::string, double>;

enum class Advance { Stay, Advance, Done };

/// Decides from the evaluations made in the current stage (oldest first).
/// Throws ConfigError for an unknown metric and ContractError when a record
/// lacks the gate metric.
Advance advance(std::span<const MetricRecord> history, const CurriculumPlan& plan, int current_stage);

}  // namespace arena::curriculum
