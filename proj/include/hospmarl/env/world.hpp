#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hospmarl/env/action.hpp"
#include "hospmarl/env/skills.hpp"
#include "hospmarl/env/types.hpp"

namespace hospmarl {

struct ItemDef {
  std::string name;
  bool movable = true;          // the patient is pinned to its bed station
  bool can_stack_under = false; // only the CPR board may slide under the patient
};

// Static description of one scenario: stations, items, where everything and
// everyone starts, which stations give access to the patient, and the energy
// rules. legal_actions/step are pure functions of (config, state, inputs).
struct WorldConfig {
  std::vector<std::string> stations;
  std::vector<ItemDef> items;
  std::vector<StationId> agent_start;                // one entry per agent
  std::vector<std::vector<ItemId>> initial_stacks;   // per station, bottom to top
  std::vector<StationId> treatment_stations;         // stations adjacent to the patient
  ItemId patient_item = -1;
  ItemId cpr_board_item = -1;
  ItemId pump_item = -1;
  ItemId aed_item = -1;      // -1 when absent from the layout
  ItemId syringe_item = -1;
  int compressions_target = 2;  // N compressions that flip chest_compressed
  EnergyParams energy;

  int n_agents() const { return static_cast<int>(agent_start.size()); }
  int n_stations() const { return static_cast<int>(stations.size()); }
  int n_items() const { return static_cast<int>(items.size()); }
  StationId station_index(const std::string& name) const;
  ItemId item_index(const std::string& name) const;
};

// Default 6-station, 3-item CPR scene with 3 agents starting at the carts.
WorldConfig default_world(int n_agents = 3);

struct PatientFlags {
  bool chest_compressed = false;
  bool rescue_breathed = false;
  bool shocked = false;
  bool medicated = false;
  int compressions_done = 0;

  bool operator==(const PatientFlags&) const = default;
};

struct InProgress {
  Action action;
  int remaining = 0;  // ticks still needed after the current one

  bool operator==(const InProgress&) const = default;
};

struct WorldState {
  std::vector<StationId> agent_station;
  std::vector<std::optional<ItemId>> holding;
  std::vector<std::vector<ItemId>> stacks;  // per station, bottom to top
  PatientFlags patient;
  std::vector<int> energy;
  std::vector<std::optional<InProgress>> in_progress;
  int tick = 0;

  bool operator==(const WorldState&) const = default;

  int n_agents() const { return static_cast<int>(agent_station.size()); }
  bool station_occupied(StationId s, AgentId except = -1) const;
  // Station whose stack contains the item, or -1 if it is in someone's hand.
  StationId station_of_item(ItemId item) const;
};

WorldState initial_state(const WorldConfig& cfg);

// Throws InconsistentStateError when the placement invariants are broken:
// an item in two places (or nowhere), an agent holding more than it may,
// or a non-board item sitting below the patient.
void check_state(const WorldConfig& cfg, const WorldState& s);

// True iff `item` sits somewhere below the patient in the patient's stack.
bool item_under_patient(const WorldConfig& cfg, const WorldState& s, ItemId item);
// True iff `item` sits somewhere above the patient in the patient's stack.
bool item_on_patient(const WorldConfig& cfg, const WorldState& s, ItemId item);

}  // namespace hospmarl
