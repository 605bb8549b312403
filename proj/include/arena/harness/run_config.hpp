#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arena/curriculum/plan.hpp"
#include "arena/envs/config.hpp"
#include "arena/harl/learner.hpp"
#include "arena/harl/regime.hpp"

namespace arena::harness {

struct TrainSettings {
  std::size_t instances = 64;  // N
  std::size_t horizon = 64;    // T
  int total_updates = 500;
  int snapshot_every = 50;     // 0 disables periodic checkpoints
  int eval_every = 25;         // tournament cadence in adversarial stages, 0 disables
  std::size_t eval_instances = 1000;
  std::uint64_t eval_seed = 1000003;
  /// Completed episodes pooled into one gate evaluation; 0 means `instances`.
  std::size_t gate_episodes = 0;
  /// Curriculum stage a fresh run starts in.
  int start_stage = 0;
  /// Stop once the final stage's gate passes; otherwise train to total_updates.
  bool stop_at_final_gate = true;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "run";
  std::vector<envs::TeamSpec> teams;
  curriculum::CurriculumPlan plan;
  harl::HappoConfig happo;
  harl::Regime regime;
  TrainSettings train;

  /// Throws ConfigError on any invalid field.
  void validate() const;
};

/// Parses the JSON run config. Every object rejects unknown keys; omitted
/// keys keep their defaults.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

/// Complete canonical JSON of a config (every field written). Parsing it
/// back yields an identical config.
std::string run_config_to_json(const RunConfig& cfg);

/// crc32 of the canonical JSON.
std::uint32_t config_hash(const RunConfig& cfg);

}  // namespace arena::harness
