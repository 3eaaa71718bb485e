#pragma once

#include <random>
#include <vector>

#include "hospmarl/env/goal.hpp"
#include "hospmarl/env/transition.hpp"
#include "hospmarl/env/world.hpp"

namespace hospmarl::testutil {

// Hand-written optimal script for the default CPR layout with an all-expert
// team and energy off: agent 0 fetches the board, slides it under the patient
// and performs both compressions. One inner vector per tick, agent order.
inline std::vector<std::vector<Action>> cpr_expert_script(const WorldConfig& cfg) {
  const StationId table = cfg.station_index("table1");
  const StationId bed = cfg.station_index("patient_bed_station1");
  const Action noop = noop_action();
  std::vector<std::vector<Action>> script;
  auto tick = [&](Action a0) { script.push_back({a0, noop, noop}); };
  tick(move_action(table));
  tick(Action{ActionKind::PickUp, -1});
  tick(move_action(bed));
  tick(Action{ActionKind::StackUnder, -1});
  tick(Action{ActionKind::CompressChest, -1});
  tick(Action{ActionKind::CompressChest, -1});
  return script;
}

// Extends the CPR script to the rescue-breaths goal: agent 1 fetches the
// pump, stacks it on the patient once agent 0 has cleared the bed station,
// and gives the breaths.
inline std::vector<std::vector<Action>> rescue_expert_script(const WorldConfig& cfg) {
  const StationId table = cfg.station_index("table1");
  const StationId bed = cfg.station_index("patient_bed_station1");
  const StationId legs = cfg.station_index("patient_legs1");
  const Action noop = noop_action();
  std::vector<std::vector<Action>> script = {
      {move_action(table), Action{ActionKind::PickUp, -1}, noop},
      {Action{ActionKind::PickUp, -1}, noop, noop},
      {move_action(bed), noop, noop},
      {Action{ActionKind::StackUnder, -1}, noop, noop},
      {Action{ActionKind::CompressChest, -1}, noop, noop},
      {Action{ActionKind::CompressChest, -1}, noop, noop},
      {move_action(legs), noop, noop},
      {noop, move_action(bed), noop},
      {noop, Action{ActionKind::Stack, -1}, noop},
      {noop, Action{ActionKind::GiveRescueBreaths, -1}, noop},
  };
  return script;
}

// Uniform-random legal joint action, one independent draw per agent.
inline std::vector<Action> random_joint_action(const WorldConfig& cfg, const WorldState& s,
                                               const std::vector<SkillProfile>& skills,
                                               std::mt19937_64& rng) {
  std::vector<Action> joint;
  for (AgentId a = 0; a < cfg.n_agents(); ++a) {
    const auto legal = legal_actions(cfg, s, a, skills[a]);
    std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
    joint.push_back(legal[pick(rng)]);
  }
  return joint;
}

}  // namespace hospmarl::testutil
