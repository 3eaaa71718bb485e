#pragma once

#include <array>
#include <vector>

#include "hospmarl/env/action.hpp"
#include "hospmarl/env/types.hpp"

namespace hospmarl {

struct EnergyParams {
  bool enabled = false;
  // Only treatments can carry a cost; indexed by Subtask. Default: compressions
  // cost 3, everything else free.
  std::array<int, kNumSubtasks> cost = {3, 0, 0, 0, 0};
  int recharge_rate = 1;
  int e_max = 3;

  int action_cost(ActionKind k) const {
    if (!enabled || !is_treatment(k)) return 0;
    return cost[static_cast<std::size_t>(treatment_subtask(k))];
  }
};

// Per-agent skill table over the five subtask kinds. Levels are restricted to
// {0, 0.5, 1}; anything not configured defaults to expert.
struct SkillProfile {
  std::array<double, kNumSubtasks> level = {kExpert, kExpert, kExpert, kExpert, kExpert};

  double at(Subtask k) const { return level[static_cast<std::size_t>(k)]; }
  void set(Subtask k, double v);

  bool operator==(const SkillProfile&) const = default;
};

enum class TeamComposition { Uniform, Specialized, ForcedCooperation };

const char* composition_name(TeamComposition c);
bool composition_from_name(const std::string& name, TeamComposition& out);

// Builds the default team profiles:
//   uniform             every agent expert at everything
//   specialized         agent i expert at treatment subtask (i mod K) over the
//                       given subtask list, beginner at the other treatments
//   forced_cooperation  agents alternate between a compressions profile and a
//                       rescue-breaths profile, each with two subtasks zeroed,
//                       so no single agent can run a CPR+breaths goal alone
// An empty subtask list selects the kind's default set: the two displayed
// skills for specialization, all four treatments for forced cooperation.
// Throws UnsatisfiableTeamError when forced cooperation cannot mask two
// subtasks per agent and still leave anyone able to act.
std::vector<SkillProfile> team_from_composition(TeamComposition kind, int n_agents,
                                                const std::vector<Subtask>& subtasks = {});

// Ticks a (started) action needs in total: treatments take round(1/skill)
// ticks, so 1 for experts and 2 for beginners; everything else takes 1 tick.
// Throws ZeroSkillError for a treatment at skill 0 (masked upstream).
int action_duration(ActionKind action, double skill);

// Energy book-keeping for a single agent-tick. Costed actions (cost <= e)
// drain; anything else recharges up to the cap.
int energy_after(int e, ActionKind action, const EnergyParams& params);

}  // namespace hospmarl
