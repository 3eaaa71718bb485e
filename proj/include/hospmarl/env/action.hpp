#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hospmarl/env/types.hpp"

namespace hospmarl {

enum class ActionKind : std::uint8_t {
  Noop = 0,
  Move,
  PickUp,
  Place,
  Stack,
  Unstack,
  StackUnder,
  CompressChest,
  GiveRescueBreaths,
  GiveShock,
  GiveMedicine,
};

// A concrete per-agent action. `target` is the destination station for Move
// and is ignored otherwise.
struct Action {
  ActionKind kind = ActionKind::Noop;
  StationId target = -1;

  bool operator==(const Action&) const = default;
};

inline Action noop_action() { return Action{}; }
inline Action move_action(StationId s) { return Action{ActionKind::Move, s}; }

bool is_treatment(ActionKind k);

// Treatment actions map 1:1 onto skill subtasks.
Subtask treatment_subtask(ActionKind k);

const char* action_kind_name(ActionKind k);
std::string action_name(const Action& a, const std::vector<std::string>& station_names);

// Flat per-agent action space used for masking and Q-value heads:
//   0          Noop
//   1 .. S     Move(station 0..S-1)
//   S+1 .. S+5 PickUp, Place, Stack, Unstack, StackUnder
//   S+6 .. S+9 CompressChest, GiveRescueBreaths, GiveShock, GiveMedicine
// The ordering is frozen; it is part of the checkpoint/replay wire format.
int action_space_size(int n_stations);
int action_to_index(const Action& a, int n_stations);
Action index_to_action(int index, int n_stations);

}  // namespace hospmarl
