#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hospmarl/env/world.hpp"

namespace hospmarl {

enum class PredicateKind : std::uint8_t {
  ItemUnderPatient,
  ItemOnPatient,
  CompressionsAtLeast,
  PatientFlag,
};

enum class PatientFlagKind : std::uint8_t { ChestCompressed, RescueBreathed, Shocked, Medicated };

struct SubgoalPredicate {
  PredicateKind kind;
  ItemId item = -1;                // ItemUnderPatient / ItemOnPatient
  int count = 0;                   // CompressionsAtLeast
  PatientFlagKind flag = PatientFlagKind::ChestCompressed;
  std::optional<int> prerequisite; // index of an earlier step that must hold first
};

struct GoalSpec {
  std::string name;
  std::vector<SubgoalPredicate> steps;
  int n_compressions = 2;
  int max_episode_ticks = 50;
};

// Built-in goals matching the two benchmark tasks. `cpr`: board under the
// patient, then N compressions. `rescue_breaths`: additionally the pump on
// the patient and breaths given (ordered after the compressions).
GoalSpec cpr_goal(const WorldConfig& cfg, int n_compressions = 2, int max_ticks = 50);
GoalSpec rescue_breaths_goal(const WorldConfig& cfg, int n_compressions = 2, int max_ticks = 50);

bool predicate_holds(const WorldConfig& cfg, const WorldState& s, const SubgoalPredicate& p);

// Number of steps whose predicate holds and whose prerequisite chain holds.
// Integer in [0, |steps|], monotone along legal traces.
int heuristic(const WorldConfig& cfg, const WorldState& s, const GoalSpec& goal);

// Team reward for one transition: H(next) - H(prev).
double base_reward(const WorldConfig& cfg, const WorldState& prev, const WorldState& next,
                   const GoalSpec& goal);

bool is_success(const WorldConfig& cfg, const WorldState& s, const GoalSpec& goal);

// Goal steps of item-placement kind that newly became satisfied between prev
// and next; these are the manipulation subtask completions the fairness
// ledger records (treatment-backed steps are already covered by the
// treatment events themselves).
std::vector<int> newly_satisfied_manipulation_steps(const WorldConfig& cfg, const WorldState& prev,
                                                    const WorldState& next, const GoalSpec& goal);

}  // namespace hospmarl
