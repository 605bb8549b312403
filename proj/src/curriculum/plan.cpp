#include "arena/curriculum/plan.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "arena/core/error.hpp"
#include "arena/envs/environment.hpp"

namespace arena::curriculum {

namespace {

bool known_metric(const std::string& name) {
  return std::find(std::begin(kKnownMetrics), std::end(kKnownMetrics), name) != std::end(kKnownMetrics);
}

}  // namespace

void CurriculumPlan::validate() const {
  if (stages.empty()) throw ConfigError("curriculum needs at least one stage");
  for (std::size_t s = 0; s < stages.size(); ++s) {
    const auto& g = stages[s].gate;
    if (!known_metric(g.metric)) throw ConfigError("unknown gate metric '" + g.metric + "'");
    if (!std::isfinite(g.threshold)) throw ConfigError("stage " + std::to_string(s) + " gate threshold is not finite");
    if (g.patience < 1) throw ConfigError("stage " + std::to_string(s) + " gate patience must be >= 1");
    if (stages[s].max_updates < 0) throw ConfigError("stage " + std::to_string(s) + " max_updates must be >= 0");
    stages[s].env.validate();
  }
}

CurriculumPlan default_sumo_plan() {
  CurriculumPlan plan;
  StagePlan walk;
  walk.name = "walk_to_point";
  walk.env.task = envs::TaskKind::WalkToPoint;
  walk.gate = {"reach_rate", 0.8, 3};
  StagePlan push;
  push.name = "block_push";
  push.env.task = envs::TaskKind::BlockPush;
  push.gate = {"block_out_rate", 0.7, 3};
  StagePlan sumo;
  sumo.name = "sumo";
  sumo.env.task = envs::TaskKind::SumoAdversarial;
  sumo.gate = {"win_rate_vs_initial", 0.6, 1};
  plan.stages = {walk, push, sumo};
  return plan;
}

CurriculumPlan single_stage_plan(const envs::EnvConfig& env, std::size_t zero_buffer_width) {
  CurriculumPlan plan;
  StagePlan stage;
  stage.name = std::string(envs::task_name(env.task));
  stage.env = env;
  plan.stages = {stage};
  plan.zero_buffer_width = zero_buffer_width;
  return plan;
}

std::vector<std::pair<std::string, std::size_t>> stage_features(const StagePlan& stage,
                                                                const std::vector<envs::TeamSpec>& teams,
                                                                std::size_t global_agent) {
  if (!stage.features.empty()) return stage.features;
  std::size_t total = 0, own = 0, seen = 0;
  bool found = false;
  for (const auto& t : teams) {
    if (!found && global_agent < seen + t.agents.size()) {
      own = t.agents.size();
      found = true;
    }
    seen += t.agents.size();
    total += t.agents.size();
  }
  if (!found) throw ConfigError("agent index " + std::to_string(global_agent) + " out of range");
  return envs::task_features(stage.env.task, total - own, own - 1);
}

ObservationLayout make_layout(const CurriculumPlan& plan, const std::vector<envs::TeamSpec>& teams,
                              std::size_t global_agent) {
  std::vector<Slot> slots;
  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    std::set<std::string> in_stage;
    for (const auto& [name, width] : stage_features(plan.stages[s], teams, global_agent)) {
      if (!in_stage.insert(name).second) {
        throw ConfigError("stage " + std::to_string(s) + " lists feature '" + name + "' twice");
      }
      auto it = std::find_if(slots.begin(), slots.end(), [&](const Slot& x) { return x.name == name; });
      if (it == slots.end()) {
        slots.push_back({name, width, static_cast<int>(s)});
      } else if (it->width != width) {
        throw ConfigError("feature '" + name + "' changes width between stages");
      }
    }
  }
  if (plan.zero_buffer_width > 0) slots.push_back({"zero_buffer", plan.zero_buffer_width, kNeverActive});
  return ObservationLayout(std::move(slots));
}

std::vector<ObservationLayout> make_layouts(const CurriculumPlan& plan, const std::vector<envs::TeamSpec>& teams) {
  std::vector<ObservationLayout> out;
  std::size_t n = 0;
  for (const auto& t : teams) n += t.agents.size();
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_layout(plan, teams, i));
  return out;
}

Advance advance(std::span<const MetricRecord> history, const CurriculumPlan& plan, int current_stage) {
  if (current_stage < 0 || static_cast<std::size_t>(current_stage) >= plan.stages.size()) {
    throw ContractError("stage index " + std::to_string(current_stage) + " outside the plan");
  }
  const auto& gate = plan.stages[current_stage].gate;
  if (!known_metric(gate.metric)) throw ConfigError("unknown gate metric '" + gate.metric + "'");
  int streak = 0;
  for (auto it = history.rbegin(); it != history.rend() && streak < gate.patience; ++it) {
    const auto m = it->find(gate.metric);
    if (m == it->end()) throw ContractError("evaluation record lacks gate metric '" + gate.metric + "'");
    if (!(m->second >= gate.threshold)) break;
    ++streak;
  }
  if (streak < gate.patience) return Advance::Stay;
  return static_cast<std::size_t>(current_stage) + 1 == plan.stages.size() ? Advance::Done : Advance::Advance;
}

}  // namespace arena::curriculum
