#include "arena/harness/trainer.hpp"

#include <cstdio>
#include <filesystem>

#include "arena/core/error.hpp"
#include "arena/core/rng.hpp"
#include "arena/curriculum/transfer.hpp"
#include "arena/harl/regime.hpp"
#include "arena/harness/tournament.hpp"

namespace arena::harness {

namespace {

constexpr std::uint64_t kLearnerStream = 1;
constexpr std::uint64_t kBatchStream = 0x5eed00;

std::uint64_t batch_seed(std::uint64_t seed, int stage) {
  return mix_seed(seed, kBatchStream + static_cast<std::uint64_t>(stage));
}

void add_event(MetricsRow& row, const std::string& event) {
  if (!row.event.empty()) row.event += ";";
  row.event += event;
}

}  // namespace

Trainer::Trainer(RunConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  layouts_ = curriculum::make_layouts(cfg_.plan, cfg_.teams);
  envs_.resize(cfg_.plan.stages.size());
  const int stage = cfg_.train.start_stage;
  state_.stage = stage;
  state_.learners = harl::make_learners(env_for(stage), cfg_.happo, mix_seed(cfg_.seed, kLearnerStream));
  enter_stage(stage, 0);
}

Trainer::Trainer(const Checkpoint& ckpt) : Trainer(ckpt.config(), ckpt.state) {}

Trainer::Trainer(RunConfig cfg, TrainerState state) : cfg_(std::move(cfg)), state_(std::move(state)) {
  cfg_.validate();
  layouts_ = curriculum::make_layouts(cfg_.plan, cfg_.teams);
  envs_.resize(cfg_.plan.stages.size());
  if (state_.stage < 0 || static_cast<std::size_t>(state_.stage) >= envs_.size()) {
    throw IncompatibleError("checkpoint stage is not part of the curriculum");
  }
  try {
    harl::check_compatible(state_.learners, env());
    harl::check_compatible(state_.stage_initial, env());
  } catch (const ConfigError& e) {
    throw IncompatibleError(std::string("checkpoint does not fit the config: ") + e.what());
  }
  if (state_.batch.size() != cfg_.train.instances) throw IncompatibleError("checkpoint batch size differs from config");
  if (state_.finished && state_.update < cfg_.train.total_updates && !state_.metrics.empty()) {
    // A larger update budget reopens a run that only stopped on its budget.
    const auto& ev = state_.metrics.back().event;
    const bool gate_end = ev.find("enter_stage") == std::string::npos &&
                          (ev.find("stage_cap") != std::string::npos ||
                           (ev.find("gate_passed") != std::string::npos && cfg_.train.stop_at_final_gate));
    state_.finished = gate_end;
  }
}

const envs::Environment& Trainer::env_for(int stage) const {
  auto& slot = envs_.at(static_cast<std::size_t>(stage));
  if (!slot) {
    slot = std::make_unique<envs::Environment>(cfg_.teams, cfg_.plan.stages[static_cast<std::size_t>(stage)].env,
                                               layouts_, stage);
  }
  return *slot;
}

void Trainer::enter_stage(int stage, int first_update) {
  state_.stage = stage;
  state_.stage_start_update = first_update;
  state_.stage_initial = state_.learners;
  state_.batch = harl::make_env_batch(env(), cfg_.train.instances, batch_seed(cfg_.seed, stage));
  state_.gate_history.clear();
  state_.pool = GatePool{};
  state_.pool.return_sum.assign(cfg_.teams.size(), 0.0);
}

const MetricsRow& Trainer::step() {
  if (state_.finished) throw ContractError("training has already finished");
  const envs::Environment& e = env();
  const std::size_t n_teams = e.team_count();
  const int local = state_.update - state_.stage_start_update;
  const auto frozen = harl::frozen_flags(cfg_.regime, local, n_teams);
  const auto rec = harl::training_iteration(e, state_.learners, state_.batch, cfg_.happo, cfg_.train.horizon,
                                            state_.update, frozen);

  MetricsRow row;
  row.update = state_.update;
  row.stage = state_.stage;
  row.episodes = rec.rollout.episodes;
  row.mean_length = rec.rollout.mean_length;
  row.reach_rate = rec.rollout.reach_rate;
  row.block_out_rate = rec.rollout.block_out_rate;
  row.ties = rec.rollout.ties;
  for (std::size_t t = 0; t < n_teams; ++t) {
    const auto& st = rec.stats.teams[t];
    TeamMetrics m;
    m.mean_return = rec.rollout.mean_return[t];
    m.wins = rec.rollout.wins[t];
    m.frozen = frozen[t];
    m.policy_loss = st.policy_loss;
    m.value_loss = st.value_loss;
    m.entropy = st.entropy;
    m.approx_kl = st.approx_kl;
    m.clip_frac = st.clip_frac;
    row.teams.push_back(m);
  }
  row.shared_value_loss = rec.stats.shared_value_loss;
  row.gate_value = harl::TeamUpdateStats::kNaN;
  row.win_rate_vs_initial = harl::TeamUpdateStats::kNaN;

  auto& pool = state_.pool;
  const double n_eps = static_cast<double>(rec.rollout.episodes);
  if (rec.rollout.episodes > 0) {
    pool.episodes += rec.rollout.episodes;
    for (std::size_t t = 0; t < n_teams; ++t) pool.return_sum[t] += rec.rollout.mean_return[t] * n_eps;
    pool.reach_sum += rec.rollout.reach_rate * n_eps;
    pool.block_out_sum += rec.rollout.block_out_rate * n_eps;
  }

  const auto& stage_plan = cfg_.plan.stages[static_cast<std::size_t>(state_.stage)];
  const bool win_gate = stage_plan.gate.metric == "win_rate_vs_initial";
  const bool last_update = state_.update + 1 >= cfg_.train.total_updates;
  curriculum::MetricRecord record;
  bool have_record = false;

  if (envs::is_adversarial(e.config().task) && n_teams == 2 && cfg_.train.eval_every > 0 &&
      ((local + 1) % cfg_.train.eval_every == 0 || last_update)) {
    EvalRow ev;
    ev.update = state_.update;
    ev.stage = state_.stage;
    ev.report = run_tournament(state_.learners, state_.stage_initial, e, cfg_.train.eval_instances,
                               cfg_.train.eval_seed, "initial-snapshot");
    row.win_rate_vs_initial = ev.report.win_rate;
    state_.evals.push_back(std::move(ev));
    if (win_gate) {
      record["win_rate_vs_initial"] = row.win_rate_vs_initial;
      have_record = true;
    }
  }
  const std::size_t pool_target = cfg_.train.gate_episodes > 0 ? cfg_.train.gate_episodes : cfg_.train.instances;
  if (!win_gate && pool.episodes >= pool_target) {
    const double n = static_cast<double>(pool.episodes);
    double ret = 0.0;
    for (double s : pool.return_sum) ret += s / n;
    record["mean_episode_return"] = ret / static_cast<double>(n_teams);
    record["reach_rate"] = pool.reach_sum / n;
    record["block_out_rate"] = pool.block_out_sum / n;
    pool = GatePool{};
    pool.return_sum.assign(n_teams, 0.0);
    have_record = true;
  }
  evaluate_gate(row, have_record ? &record : nullptr);
  ++state_.update;
  if (state_.update >= cfg_.train.total_updates) state_.finished = true;
  state_.metrics.push_back(std::move(row));
  return state_.metrics.back();
}

void Trainer::evaluate_gate(MetricsRow& row, const curriculum::MetricRecord* record) {
  const int stage = state_.stage;
  const auto& stage_plan = cfg_.plan.stages[static_cast<std::size_t>(stage)];
  const bool last_stage = static_cast<std::size_t>(stage) + 1 == cfg_.plan.stages.size();
  curriculum::Advance decision = curriculum::Advance::Stay;
  if (record) {
    row.gate_value = record->at(stage_plan.gate.metric);
    state_.gate_history.push_back(*record);
    decision = curriculum::advance(state_.gate_history, cfg_.plan, stage);
  }
  const int local_done = state_.update - state_.stage_start_update + 1;
  const bool capped = stage_plan.max_updates > 0 && local_done >= stage_plan.max_updates;

  if (decision != curriculum::Advance::Stay) add_event(row, "gate_passed:" + stage_plan.name);
  if (decision == curriculum::Advance::Done && cfg_.train.stop_at_final_gate) {
    state_.finished = true;
    return;
  }
  if (decision != curriculum::Advance::Advance) {
    if (!capped) return;
    add_event(row, "stage_cap:" + stage_plan.name);
  }
  if (last_stage) {
    state_.finished = true;
    return;
  }
  curriculum::StageCheckpoint ck{stage, state_.learners};
  state_.learners = curriculum::transfer_checkpoint(ck, stage, stage + 1, cfg_.plan, cfg_.teams).learners;
  enter_stage(stage + 1, state_.update + 1);
  add_event(row, "enter_stage:" + cfg_.plan.stages[static_cast<std::size_t>(stage + 1)].name);
}

void Trainer::write_outputs(const std::string& out_dir) const {
  export_metrics(state_.metrics, state_.evals, cfg_.teams.size(), out_dir);
}

void Trainer::run(const std::string& out_dir, const TrainerHooks& hooks) {
  const bool write = !out_dir.empty();
  if (write) {
    std::filesystem::create_directories(out_dir);
    if (state_.update == 0 && state_.metrics.empty()) save_checkpoint(out_dir + "/initial.ckpt", checkpoint());
  }
  while (!state_.finished) {
    const MetricsRow& row = step();
    const int u = row.update;
    if (write && harl::is_snapshot_update(u, cfg_.train.total_updates, cfg_.train.snapshot_every)) {
      char name[64];
      std::snprintf(name, sizeof name, "/update_%06d.ckpt", u + 1);
      save_checkpoint(out_dir + name, checkpoint());
      write_outputs(out_dir);
    }
    if (hooks.on_update && !hooks.on_update(row)) break;
  }
  if (write) {
    if (state_.finished) save_checkpoint(out_dir + "/final.ckpt", checkpoint());
    write_outputs(out_dir);
    export_plots(out_dir);
  }
}

}  // namespace arena::harness
