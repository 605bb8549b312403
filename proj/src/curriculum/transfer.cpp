#include "arena/curriculum/transfer.hpp"

#include <string>

#include "arena/core/error.hpp"

namespace arena::curriculum {

StageCheckpoint transfer_checkpoint(const StageCheckpoint& ckpt, int from_stage, int to_stage,
                                    const CurriculumPlan& from_plan, const CurriculumPlan& to_plan,
                                    const std::vector<envs::TeamSpec>& teams) {
  if (!(from_stage < to_stage)) throw ContractError("transfer must move to a later stage");
  if (ckpt.stage != from_stage) {
    throw ContractError("checkpoint is at stage " + std::to_string(ckpt.stage) + ", not " + std::to_string(from_stage));
  }
  if (from_stage < 0 || static_cast<std::size_t>(from_stage) >= from_plan.stages.size() ||
      static_cast<std::size_t>(to_stage) >= to_plan.stages.size()) {
    throw ContractError("stage index outside the plan");
  }
  const auto src = make_layouts(from_plan, teams);
  const auto dst = make_layouts(to_plan, teams);
  std::size_t g = 0;
  for (const auto& team : ckpt.learners.teams) {
    for (const auto& agent : team.agents) {
      if (g >= src.size()) throw IncompatibleError("checkpoint has more agents than the team specification");
      const auto& a = src[g];
      const auto& b = dst[g];
      if (a.total_width() != b.total_width()) {
        throw IncompatibleError("agent " + std::to_string(g) + " observation width " + std::to_string(a.total_width()) +
                                " does not match " + std::to_string(b.total_width()));
      }
      if (agent.policy.mlp.in_dim() != b.total_width()) {
        throw IncompatibleError("agent " + std::to_string(g) + " policy input width does not match the target layout");
      }
      for (std::size_t s = 0; s < a.slots().size(); ++s) {
        const auto& slot = a.slots()[s];
        if (!slot.active_in(from_stage)) continue;
        const std::size_t k = b.find(slot.name);
        if (k == b.slots().size() || b.offset(k) != a.offset(s) || b.slots()[k].width != slot.width ||
            !b.slots()[k].active_in(to_stage)) {
          throw IncompatibleError("slot '" + slot.name + "' is not carried over unchanged to stage " +
                                  std::to_string(to_stage));
        }
      }
      ++g;
    }
  }
  if (g != src.size()) throw IncompatibleError("checkpoint agent count does not match the team specification");
  StageCheckpoint out = ckpt;
  out.stage = to_stage;
  harl::reset_optimizers(out.learners);
  return out;
}

}  // namespace arena::curriculum
