#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "arena/envs/environment.hpp"
#include "arena/harness/checkpoint.hpp"
#include "arena/harness/run_config.hpp"

namespace arena::harness {

struct TrainerHooks {
  /// Called after every update; returning false stops run() early.
  std::function<bool(const MetricsRow&)> on_update;
};

/// Runs a curriculum: HAPPO updates under the configured regime, gate
/// evaluations, stage transfers, win-rate tournaments against the learners
/// each stage started from, and periodic checkpoints.
class Trainer {
 public:
  /// Fresh run from the config (validated here).
  explicit Trainer(RunConfig cfg);
  /// Continues from a checkpoint with the config embedded in it.
  explicit Trainer(const Checkpoint& ckpt);
  /// Continues from a state under a possibly edited config (e.g. a larger
  /// update budget). Throws IncompatibleError when the state does not fit.
  Trainer(RunConfig cfg, TrainerState state);

  const RunConfig& config() const { return cfg_; }
  const TrainerState& state() const { return state_; }
  bool finished() const { return state_.finished; }
  /// Environment of the current stage.
  const envs::Environment& env() const { return env_for(state_.stage); }
  const envs::Environment& env_for(int stage) const;

  /// One update with its gate and evaluation bookkeeping. Throws
  /// ContractError once the run has finished.
  const MetricsRow& step();

  /// Steps until finished. With a non-empty out_dir writes initial.ckpt (on
  /// a fresh run), update_NNNNNN.ckpt snapshots, final.ckpt, metrics.csv,
  /// eval.csv and the SVG plots.
  void run(const std::string& out_dir = "", const TrainerHooks& hooks = {});

  Checkpoint checkpoint() const { return make_checkpoint(cfg_, state_); }
  void write_outputs(const std::string& out_dir) const;

 private:
  void enter_stage(int stage, int first_update);
  void evaluate_gate(MetricsRow& row, const curriculum::MetricRecord* record);

  RunConfig cfg_;
  std::vector<curriculum::ObservationLayout> layouts_;
  mutable std::vector<std::unique_ptr<envs::Environment>> envs_;
  TrainerState state_;
};

}  // namespace arena::harness
