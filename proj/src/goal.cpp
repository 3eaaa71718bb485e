#include "hospmarl/env/goal.hpp"

#include "hospmarl/errors.hpp"

namespace hospmarl {

GoalSpec cpr_goal(const WorldConfig& cfg, int n_compressions, int max_ticks) {
  GoalSpec g;
  g.name = "cpr";
  g.n_compressions = n_compressions;
  g.max_episode_ticks = max_ticks;
  g.steps.push_back({PredicateKind::ItemUnderPatient, cfg.cpr_board_item, 0,
                     PatientFlagKind::ChestCompressed, std::nullopt});
  g.steps.push_back({PredicateKind::CompressionsAtLeast, -1, n_compressions,
                     PatientFlagKind::ChestCompressed, 0});
  return g;
}

GoalSpec rescue_breaths_goal(const WorldConfig& cfg, int n_compressions, int max_ticks) {
  GoalSpec g = cpr_goal(cfg, n_compressions, max_ticks);
  g.name = "rescue_breaths";
  g.steps.push_back({PredicateKind::ItemOnPatient, cfg.pump_item, 0,
                     PatientFlagKind::ChestCompressed, std::nullopt});
  // Breaths come after the compressions in the task flow; the pump being
  // attached is already enforced by the action's own precondition.
  g.steps.push_back({PredicateKind::PatientFlag, -1, 0, PatientFlagKind::RescueBreathed, 1});
  return g;
}

bool predicate_holds(const WorldConfig& cfg, const WorldState& s, const SubgoalPredicate& p) {
  switch (p.kind) {
    case PredicateKind::ItemUnderPatient: return item_under_patient(cfg, s, p.item);
    case PredicateKind::ItemOnPatient: return item_on_patient(cfg, s, p.item);
    case PredicateKind::CompressionsAtLeast: return s.patient.compressions_done >= p.count;
    case PredicateKind::PatientFlag:
      switch (p.flag) {
        case PatientFlagKind::ChestCompressed: return s.patient.chest_compressed;
        case PatientFlagKind::RescueBreathed: return s.patient.rescue_breathed;
        case PatientFlagKind::Shocked: return s.patient.shocked;
        case PatientFlagKind::Medicated: return s.patient.medicated;
      }
  }
  return false;
}

namespace {
void validate_goal(const GoalSpec& goal) {
  if (goal.steps.empty()) throw ConfigError("goal needs at least one step");
  for (int i = 0; i < static_cast<int>(goal.steps.size()); ++i) {
    const auto& pre = goal.steps[i].prerequisite;
    if (pre && (*pre < 0 || *pre >= i))
      throw ConfigError("goal prerequisite must point to an earlier step");
  }
}

bool step_satisfied(const WorldConfig& cfg, const WorldState& s, const GoalSpec& goal, int index) {
  const auto& p = goal.steps[index];
  if (!predicate_holds(cfg, s, p)) return false;
  if (p.prerequisite) return step_satisfied(cfg, s, goal, *p.prerequisite);
  return true;
}
}  // namespace

int heuristic(const WorldConfig& cfg, const WorldState& s, const GoalSpec& goal) {
  validate_goal(goal);
  int done = 0;
  for (int i = 0; i < static_cast<int>(goal.steps.size()); ++i)
    if (step_satisfied(cfg, s, goal, i)) ++done;
  return done;
}

double base_reward(const WorldConfig& cfg, const WorldState& prev, const WorldState& next,
                   const GoalSpec& goal) {
  return static_cast<double>(heuristic(cfg, next, goal) - heuristic(cfg, prev, goal));
}

bool is_success(const WorldConfig& cfg, const WorldState& s, const GoalSpec& goal) {
  return heuristic(cfg, s, goal) == static_cast<int>(goal.steps.size());
}

std::vector<int> newly_satisfied_manipulation_steps(const WorldConfig& cfg, const WorldState& prev,
                                                    const WorldState& next, const GoalSpec& goal) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(goal.steps.size()); ++i) {
    const auto kind = goal.steps[i].kind;
    if (kind != PredicateKind::ItemUnderPatient && kind != PredicateKind::ItemOnPatient) continue;
    if (step_satisfied(cfg, next, goal, i) && !step_satisfied(cfg, prev, goal, i)) out.push_back(i);
  }
  return out;
}

}  // namespace hospmarl
