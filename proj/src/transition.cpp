#include "hospmarl/env/transition.hpp"

#include <algorithm>
#include <sstream>

#include "hospmarl/errors.hpp"

namespace hospmarl {

namespace {

bool stack_contains(const std::vector<ItemId>& stack, ItemId item) {
  return std::find(stack.begin(), stack.end(), item) != stack.end();
}

bool treatment_prereqs_hold(const WorldConfig& cfg, const WorldState& s, ActionKind kind) {
  switch (kind) {
    case ActionKind::CompressChest:
      return cfg.cpr_board_item >= 0 && item_under_patient(cfg, s, cfg.cpr_board_item);
    case ActionKind::GiveRescueBreaths:
      return cfg.pump_item >= 0 && item_on_patient(cfg, s, cfg.pump_item);
    case ActionKind::GiveShock:
      return cfg.aed_item >= 0 && item_on_patient(cfg, s, cfg.aed_item);
    case ActionKind::GiveMedicine:
      return cfg.syringe_item >= 0 && item_on_patient(cfg, s, cfg.syringe_item);
    default: return false;
  }
}

// Single-action legality against an arbitrary (possibly intermediate) state.
// legal_actions enumerates with this same predicate, which keeps the mask and
// the executor's re-check consistent by construction.
bool action_legal(const WorldConfig& cfg, const WorldState& s, AgentId agent,
                  const SkillProfile& skills, const Action& a) {
  if (s.in_progress[agent]) return a.kind == ActionKind::Noop;

  const StationId at = s.agent_station[agent];
  const auto& stack = s.stacks[at];
  const auto& held = s.holding[agent];

  switch (a.kind) {
    case ActionKind::Noop: return true;

    case ActionKind::Move:
      return a.target >= 0 && a.target < cfg.n_stations() && a.target != at &&
             !s.station_occupied(a.target, agent);

    case ActionKind::PickUp:
      // Picking up empties the station, so it only applies to a lone item;
      // taller stacks go through Unstack.
      return !held && stack.size() == 1 && cfg.items[stack.back()].movable;

    case ActionKind::Place: return held.has_value() && stack.empty();

    case ActionKind::Stack: return held.has_value() && !stack.empty();

    case ActionKind::Unstack:
      // Items in the patient's stack are attached and stay there.
      return !held && stack.size() >= 2 && cfg.items[stack.back()].movable &&
             !stack_contains(stack, cfg.patient_item);

    case ActionKind::StackUnder:
      return held.has_value() && cfg.items[*held].can_stack_under && !stack.empty() &&
             !cfg.items[stack.front()].movable;

    case ActionKind::CompressChest:
    case ActionKind::GiveRescueBreaths:
    case ActionKind::GiveShock:
    case ActionKind::GiveMedicine: {
      if (std::find(cfg.treatment_stations.begin(), cfg.treatment_stations.end(), at) ==
          cfg.treatment_stations.end())
        return false;
      if (skills.at(treatment_subtask(a.kind)) <= 0.0) return false;
      if (cfg.energy.enabled && cfg.energy.action_cost(a.kind) > s.energy[agent]) return false;
      return treatment_prereqs_hold(cfg, s, a.kind);
    }
  }
  return false;
}

void apply_treatment_effect(const WorldConfig& cfg, WorldState& s, ActionKind kind) {
  switch (kind) {
    case ActionKind::CompressChest:
      s.patient.compressions_done += 1;
      if (s.patient.compressions_done >= cfg.compressions_target) s.patient.chest_compressed = true;
      break;
    case ActionKind::GiveRescueBreaths: s.patient.rescue_breathed = true; break;
    case ActionKind::GiveShock: s.patient.shocked = true; break;
    case ActionKind::GiveMedicine: s.patient.medicated = true; break;
    default: break;
  }
}

}  // namespace

std::vector<Action> legal_actions(const WorldConfig& cfg, const WorldState& s, AgentId agent,
                                  const SkillProfile& skills) {
  std::vector<Action> out;
  const int n = action_space_size(cfg.n_stations());
  for (int i = 0; i < n; ++i) {
    Action a = index_to_action(i, cfg.n_stations());
    if (action_legal(cfg, s, agent, skills, a)) out.push_back(a);
  }
  return out;
}

std::vector<bool> legal_action_mask(const WorldConfig& cfg, const WorldState& s, AgentId agent,
                                    const SkillProfile& skills) {
  const int n = action_space_size(cfg.n_stations());
  std::vector<bool> mask(n, false);
  for (int i = 0; i < n; ++i)
    mask[i] = action_legal(cfg, s, agent, skills, index_to_action(i, cfg.n_stations()));
  return mask;
}

StepResult step(const WorldConfig& cfg, const WorldState& s, const std::vector<Action>& joint_action,
                const std::vector<SkillProfile>& skills) {
  check_state(cfg, s);
  const int n = cfg.n_agents();
  if (static_cast<int>(joint_action.size()) != n || static_cast<int>(skills.size()) != n)
    throw InconsistentStateError("joint action / skill count does not match agent count");

  StepResult res;
  res.state = s;
  res.executed.assign(n, false);
  WorldState& next = res.state;

  enum class EnergyEvent { Recharge, StartCosted, MidCosted };
  std::vector<EnergyEvent> energy_event(n, EnergyEvent::Recharge);
  std::vector<int> start_cost(n, 0);

  for (AgentId a = 0; a < n; ++a) {
    if (next.in_progress[a]) {
      // Ongoing multi-tick action; the submitted action is ignored.
      InProgress ip = *next.in_progress[a];
      ip.remaining -= 1;
      res.executed[a] = true;
      if (cfg.energy.action_cost(ip.action.kind) > 0) energy_event[a] = EnergyEvent::MidCosted;
      if (ip.remaining <= 0) {
        apply_treatment_effect(cfg, next, ip.action.kind);
        res.treatment_completions.push_back({treatment_subtask(ip.action.kind), a});
        next.in_progress[a] = std::nullopt;
      } else {
        next.in_progress[a] = ip;
      }
      continue;
    }

    Action act = joint_action[a];
    if (!action_legal(cfg, next, a, skills[a], act)) {
      res.executed[a] = act.kind == ActionKind::Noop;
      continue;
    }
    res.executed[a] = true;

    const StationId at = next.agent_station[a];
    auto& stack = next.stacks[at];
    switch (act.kind) {
      case ActionKind::Noop: break;
      case ActionKind::Move: next.agent_station[a] = act.target; break;
      case ActionKind::PickUp:
      case ActionKind::Unstack:
        next.holding[a] = stack.back();
        stack.pop_back();
        break;
      case ActionKind::Place:
      case ActionKind::Stack:
        stack.push_back(*next.holding[a]);
        next.holding[a] = std::nullopt;
        break;
      case ActionKind::StackUnder:
        stack.insert(stack.begin(), *next.holding[a]);
        next.holding[a] = std::nullopt;
        break;
      case ActionKind::CompressChest:
      case ActionKind::GiveRescueBreaths:
      case ActionKind::GiveShock:
      case ActionKind::GiveMedicine: {
        if (cfg.energy.action_cost(act.kind) > 0) {
          energy_event[a] = EnergyEvent::StartCosted;
          start_cost[a] = cfg.energy.action_cost(act.kind);
        }
        const int ticks = action_duration(act.kind, skills[a].at(treatment_subtask(act.kind)));
        if (ticks <= 1) {
          apply_treatment_effect(cfg, next, act.kind);
          res.treatment_completions.push_back({treatment_subtask(act.kind), a});
        } else {
          next.in_progress[a] = InProgress{act, ticks - 1};
        }
        break;
      }
    }
  }

  if (cfg.energy.enabled) {
    for (AgentId a = 0; a < n; ++a) {
      switch (energy_event[a]) {
        case EnergyEvent::StartCosted:
          // Cost was checked against this tick's starting energy in the gate.
          next.energy[a] -= start_cost[a];
          break;
        case EnergyEvent::MidCosted: break;
        case EnergyEvent::Recharge:
          next.energy[a] = std::min(next.energy[a] + cfg.energy.recharge_rate, cfg.energy.e_max);
          break;
      }
    }
  }

  next.tick += 1;
  return res;
}

std::string render_text(const WorldConfig& cfg, const WorldState& s) {
  std::ostringstream os;
  os << "tick " << s.tick << "\n";
  os << "patient compressed=" << s.patient.chest_compressed
     << " breathed=" << s.patient.rescue_breathed << " medicated=" << s.patient.medicated
     << " shocked=" << s.patient.shocked << " compressions=" << s.patient.compressions_done
     << "\n";
  for (StationId st = 0; st < cfg.n_stations(); ++st) {
    os << "station " << cfg.stations[st] << ":";
    if (s.stacks[st].empty()) {
      os << " -";
    } else {
      for (ItemId it : s.stacks[st]) os << " " << cfg.items[it].name;
    }
    os << "\n";
  }
  for (AgentId a = 0; a < s.n_agents(); ++a) {
    os << "agent " << a << " @ " << cfg.stations[s.agent_station[a]]
       << " hand=" << (s.holding[a] ? cfg.items[*s.holding[a]].name : "-");
    if (cfg.energy.enabled) os << " energy=" << s.energy[a];
    if (s.in_progress[a])
      os << " busy=" << action_kind_name(s.in_progress[a]->action.kind) << "("
         << s.in_progress[a]->remaining << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace hospmarl
