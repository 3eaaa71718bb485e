#include "hospmarl/env/skills.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hospmarl/errors.hpp"

namespace hospmarl {

void SkillProfile::set(Subtask k, double v) {
  if (!valid_skill_level(v))
    throw ConfigError("skill level must be one of 0, 0.5, 1 (got " + std::to_string(v) + ")");
  level[static_cast<std::size_t>(k)] = v;
}

const char* composition_name(TeamComposition c) {
  switch (c) {
    case TeamComposition::Uniform: return "uniform";
    case TeamComposition::Specialized: return "specialized";
    case TeamComposition::ForcedCooperation: return "forced_cooperation";
  }
  return "?";
}

bool composition_from_name(const std::string& name, TeamComposition& out) {
  if (name == "uniform") out = TeamComposition::Uniform;
  else if (name == "specialized") out = TeamComposition::Specialized;
  else if (name == "forced_cooperation") out = TeamComposition::ForcedCooperation;
  else return false;
  return true;
}

std::vector<SkillProfile> team_from_composition(TeamComposition kind, int n_agents,
                                                const std::vector<Subtask>& subtasks) {
  if (n_agents < 2) throw UnsatisfiableTeamError("team compositions need at least 2 agents");
  std::vector<SkillProfile> team(n_agents);

  std::vector<Subtask> active = subtasks;
  if (active.empty()) {
    // Kind-specific defaults: specialization rotates over the two displayed
    // skills; forced cooperation needs the wider treatment set to have room
    // for two masked subtasks per agent.
    if (kind == TeamComposition::ForcedCooperation)
      active.assign(kTreatmentSubtasks.begin(), kTreatmentSubtasks.end());
    else
      active = {Subtask::CompressChest, Subtask::GiveRescueBreaths};
  }

  switch (kind) {
    case TeamComposition::Uniform:
      // default-constructed profiles are all-expert
      break;

    case TeamComposition::Specialized: {
      const int k = static_cast<int>(active.size());
      for (int i = 0; i < n_agents; ++i) {
        for (Subtask t : kTreatmentSubtasks) team[i].set(t, kBeginner);
        team[i].set(active[i % k], kExpert);
      }
      break;
    }

    case TeamComposition::ForcedCooperation: {
      // Mask two subtasks per agent, alternating between two complementary
      // profiles so no single skill set covers a CPR+breaths goal. With the
      // default set even agents keep compressions and medicine, odd agents
      // keep breaths and shocks.
      const int m = static_cast<int>(active.size());
      if (m < 3)
        throw UnsatisfiableTeamError(
            "forced cooperation needs >= 3 subtasks to mask 2 per agent (got " +
            std::to_string(m) + ")");
      for (int i = 0; i < n_agents; ++i) {
        if (i % 2 == 0) {
          team[i].set(active[1], kUnskilled);
          team[i].set(active[2], kUnskilled);
        } else {
          team[i].set(active[0], kUnskilled);
          team[i].set(active[m - 1], kUnskilled);
        }
      }
      break;
    }
  }
  return team;
}

int action_duration(ActionKind action, double skill) {
  if (!is_treatment(action)) return 1;
  if (skill <= 0.0)
    throw ZeroSkillError(std::string("action_duration: ") + action_kind_name(action) +
                         " at skill 0");
  return static_cast<int>(std::lround(1.0 / skill));
}

int energy_after(int e, ActionKind action, const EnergyParams& params) {
  const int cost = params.action_cost(action);
  if (cost > 0 && cost <= e) return e - cost;
  if (cost > 0) return e;  // gated upstream; never drawn below zero
  return std::min(e + params.recharge_rate, params.e_max);
}

}  // namespace hospmarl
