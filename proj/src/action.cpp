#include "hospmarl/env/action.hpp"

#include <stdexcept>

namespace hospmarl {

bool is_treatment(ActionKind k) {
  switch (k) {
    case ActionKind::CompressChest:
    case ActionKind::GiveRescueBreaths:
    case ActionKind::GiveShock:
    case ActionKind::GiveMedicine: return true;
    default: return false;
  }
}

Subtask treatment_subtask(ActionKind k) {
  switch (k) {
    case ActionKind::CompressChest: return Subtask::CompressChest;
    case ActionKind::GiveRescueBreaths: return Subtask::GiveRescueBreaths;
    case ActionKind::GiveShock: return Subtask::GiveShock;
    case ActionKind::GiveMedicine: return Subtask::GiveMedicine;
    default: throw std::logic_error("treatment_subtask: not a treatment action");
  }
}

const char* action_kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::Noop: return "noop";
    case ActionKind::Move: return "move";
    case ActionKind::PickUp: return "pick_up";
    case ActionKind::Place: return "place";
    case ActionKind::Stack: return "stack";
    case ActionKind::Unstack: return "unstack";
    case ActionKind::StackUnder: return "stack_under";
    case ActionKind::CompressChest: return "compress_chest";
    case ActionKind::GiveRescueBreaths: return "give_rescue_breaths";
    case ActionKind::GiveShock: return "give_shock";
    case ActionKind::GiveMedicine: return "give_medicine";
  }
  return "?";
}

std::string action_name(const Action& a, const std::vector<std::string>& station_names) {
  if (a.kind == ActionKind::Move) {
    const bool known = a.target >= 0 && a.target < static_cast<StationId>(station_names.size());
    return std::string("move(") + (known ? station_names[a.target] : "?") + ")";
  }
  return action_kind_name(a.kind);
}

namespace {
constexpr int kManipCount = 5;      // PickUp, Place, Stack, Unstack, StackUnder
constexpr int kTreatmentCount = 4;  // CompressChest .. GiveMedicine
}  // namespace

int action_space_size(int n_stations) { return 1 + n_stations + kManipCount + kTreatmentCount; }

int action_to_index(const Action& a, int n_stations) {
  switch (a.kind) {
    case ActionKind::Noop: return 0;
    case ActionKind::Move:
      if (a.target < 0 || a.target >= n_stations)
        throw std::out_of_range("action_to_index: bad move target");
      return 1 + a.target;
    case ActionKind::PickUp: return 1 + n_stations + 0;
    case ActionKind::Place: return 1 + n_stations + 1;
    case ActionKind::Stack: return 1 + n_stations + 2;
    case ActionKind::Unstack: return 1 + n_stations + 3;
    case ActionKind::StackUnder: return 1 + n_stations + 4;
    case ActionKind::CompressChest: return 1 + n_stations + 5;
    case ActionKind::GiveRescueBreaths: return 1 + n_stations + 6;
    case ActionKind::GiveShock: return 1 + n_stations + 7;
    case ActionKind::GiveMedicine: return 1 + n_stations + 8;
  }
  throw std::logic_error("action_to_index: unknown kind");
}

Action index_to_action(int index, int n_stations) {
  if (index < 0 || index >= action_space_size(n_stations))
    throw std::out_of_range("index_to_action: index out of range");
  if (index == 0) return noop_action();
  if (index <= n_stations) return move_action(index - 1);
  static constexpr ActionKind tail[] = {
      ActionKind::PickUp,           ActionKind::Place,
      ActionKind::Stack,            ActionKind::Unstack,
      ActionKind::StackUnder,       ActionKind::CompressChest,
      ActionKind::GiveRescueBreaths, ActionKind::GiveShock,
      ActionKind::GiveMedicine,
  };
  return Action{tail[index - n_stations - 1], -1};
}

}  // namespace hospmarl
