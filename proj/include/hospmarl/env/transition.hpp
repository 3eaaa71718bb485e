#pragma once

#include <string>
#include <vector>

#include "hospmarl/env/skills.hpp"
#include "hospmarl/env/world.hpp"

namespace hospmarl {

// Every action the agent could submit this tick without being coerced to
// Noop. Total: an agent that is mid-action can only continue (reported as
// Noop being the sole legal entry).
std::vector<Action> legal_actions(const WorldConfig& cfg, const WorldState& s, AgentId agent,
                                  const SkillProfile& skills);

// Same set as a mask over the flat action index space.
std::vector<bool> legal_action_mask(const WorldConfig& cfg, const WorldState& s, AgentId agent,
                                    const SkillProfile& skills);

// One completed subtask, attributed to the agent whose action finished it.
// Treatments report their own kind; board/pump goal placements come out as
// Manipulation events from the goal layer (see goal.hpp).
struct SubtaskEvent {
  Subtask kind;
  AgentId agent;

  bool operator==(const SubtaskEvent&) const = default;
};

struct StepResult {
  WorldState state;
  // True when the submitted action (or the ongoing multi-tick action) ran;
  // false when it was coerced to Noop.
  std::vector<bool> executed;
  // Treatment completions this tick, in agent order.
  std::vector<SubtaskEvent> treatment_completions;
};

// Applies one joint action. Agents act in ascending index order; an action
// whose preconditions no longer hold against the intermediate state is
// coerced to Noop. Multi-tick treatments progress one tick and apply their
// effect on the final one. Deterministic. Throws InconsistentStateError when
// the input state violates the placement invariants.
StepResult step(const WorldConfig& cfg, const WorldState& s, const std::vector<Action>& joint_action,
                const std::vector<SkillProfile>& skills);

// Stable line-oriented dump of the state; equal states render equally.
std::string render_text(const WorldConfig& cfg, const WorldState& s);

}  // namespace hospmarl
