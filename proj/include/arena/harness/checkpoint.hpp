#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arena/curriculum/plan.hpp"
#include "arena/harl/learner.hpp"
#include "arena/harl/rollout.hpp"
#include "arena/harness/metrics.hpp"
#include "arena/harness/run_config.hpp"

namespace arena::harness {

/// Episodes finished since the last gate evaluation.
struct GatePool {
  std::size_t episodes = 0;
  std::vector<double> return_sum;  // per team
  double reach_sum = 0.0;
  double block_out_sum = 0.0;

  friend bool operator==(const GatePool&, const GatePool&) = default;
};

/// Everything needed to continue a run bit-exactly.
struct TrainerState {
  int stage = 0;
  int update = 0;  // next global update index
  int stage_start_update = 0;
  bool finished = false;
  harl::LearnerSet learners;
  harl::LearnerSet stage_initial;  // learners as they entered the current stage
  harl::EnvBatch batch;
  std::vector<curriculum::MetricRecord> gate_history;  // evaluations in the current stage
  GatePool pool;
  std::vector<MetricsRow> metrics;
  std::vector<EvalRow> evals;

  friend bool operator==(const TrainerState&, const TrainerState&) = default;
};

/// Self-describing snapshot: carries the canonical config it was trained with.
///
/// File layout: "HARLCKPT", u32 version, u32 config hash, config JSON,
/// trainer state, u32 crc32 of everything before it.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;
  std::uint32_t version = kVersion;
  std::uint32_t config_hash = 0;
  std::string config_json;
  TrainerState state;

  RunConfig config() const { return parse_run_config(config_json); }
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

Checkpoint make_checkpoint(const RunConfig& cfg, TrainerState state);

std::string encode_checkpoint(const Checkpoint& ckpt);
/// Throws LoadError on bad magic, unsupported version, truncation, checksum
/// or config-hash mismatch.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace arena::harness
