#pragma once

#include <vector>

#include "arena/curriculum/plan.hpp"
#include "arena/envs/config.hpp"
#include "arena/harl/learner.hpp"

namespace arena::curriculum {

/// Learner parameters tagged with the curriculum stage they were trained in.
struct StageCheckpoint {
  int stage = 0;
  harl::LearnerSet learners;

  friend bool operator==(const StageCheckpoint&, const StageCheckpoint&) = default;
};

/// Carries a checkpoint from from_stage of from_plan to to_stage of to_plan:
/// parameters copied verbatim, optimizer state reset, stage rewritten.
/// Throws ContractError unless from_stage < to_stage and the checkpoint is
/// at from_stage; IncompatibleError when an agent's layouts differ in total
/// width or a slot active at from_stage moves or changes width.
StageCheckpoint transfer_checkpoint(const StageCheckpoint& ckpt, int from_stage, int to_stage,
                                    const CurriculumPlan& from_plan, const CurriculumPlan& to_plan,
                                    const std::vector<envs::TeamSpec>& teams);

inline StageCheckpoint transfer_checkpoint(const StageCheckpoint& ckpt, int from_stage, int to_stage,
                                           const CurriculumPlan& plan, const std::vector<envs::TeamSpec>& teams) {
  return transfer_checkpoint(ckpt, from_stage, to_stage, plan, plan, teams);
}

}  // namespace arena::curriculum
