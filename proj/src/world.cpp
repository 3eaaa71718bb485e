#include "hospmarl/env/world.hpp"

#include <algorithm>

#include "hospmarl/errors.hpp"

namespace hospmarl {

StationId WorldConfig::station_index(const std::string& name) const {
  for (StationId i = 0; i < n_stations(); ++i)
    if (stations[i] == name) return i;
  return -1;
}

ItemId WorldConfig::item_index(const std::string& name) const {
  for (ItemId i = 0; i < n_items(); ++i)
    if (items[i].name == name) return i;
  return -1;
}

WorldConfig default_world(int n_agents) {
  WorldConfig cfg;
  cfg.stations = canonical_stations();
  cfg.items = {
      ItemDef{"pump1", true, false},
      ItemDef{"cpr_board1", true, true},
      ItemDef{"patient1", false, false},
  };
  cfg.pump_item = 0;
  cfg.cpr_board_item = 1;
  cfg.patient_item = 2;

  cfg.initial_stacks.assign(cfg.stations.size(), {});
  cfg.initial_stacks[cfg.station_index("hospital_cart1")] = {cfg.pump_item};
  cfg.initial_stacks[cfg.station_index("table1")] = {cfg.cpr_board_item};
  cfg.initial_stacks[cfg.station_index("patient_bed_station1")] = {cfg.patient_item};

  cfg.treatment_stations = {cfg.station_index("patient_legs1"),
                            cfg.station_index("patient_bed_station1")};

  // Agents line up at the carts; capacity is one agent per station.
  const std::vector<std::string> starts = {"hospital_cart_right1", "hospital_cart1",
                                           "hospital_cart_left1", "table1", "patient_legs1",
                                           "patient_bed_station1"};
  if (n_agents > static_cast<int>(starts.size()))
    throw ConfigError("default layout supports at most 6 agents");
  for (int i = 0; i < n_agents; ++i) cfg.agent_start.push_back(cfg.station_index(starts[i]));
  return cfg;
}

bool WorldState::station_occupied(StationId s, AgentId except) const {
  for (AgentId i = 0; i < n_agents(); ++i)
    if (i != except && agent_station[i] == s) return true;
  return false;
}

StationId WorldState::station_of_item(ItemId item) const {
  for (StationId s = 0; s < static_cast<StationId>(stacks.size()); ++s)
    for (ItemId it : stacks[s])
      if (it == item) return s;
  return -1;
}

WorldState initial_state(const WorldConfig& cfg) {
  WorldState s;
  s.agent_station = cfg.agent_start;
  s.holding.assign(cfg.n_agents(), std::nullopt);
  s.stacks = cfg.initial_stacks;
  s.stacks.resize(cfg.n_stations());
  s.energy.assign(cfg.n_agents(), cfg.energy.e_max);
  s.in_progress.assign(cfg.n_agents(), std::nullopt);
  s.tick = 0;
  return s;
}

void check_state(const WorldConfig& cfg, const WorldState& s) {
  if (s.n_agents() != cfg.n_agents() || static_cast<int>(s.stacks.size()) != cfg.n_stations() ||
      static_cast<int>(s.holding.size()) != cfg.n_agents())
    throw InconsistentStateError("state shape does not match the layout");

  std::vector<int> seen(cfg.n_items(), 0);
  for (const auto& stack : s.stacks)
    for (ItemId it : stack) {
      if (it < 0 || it >= cfg.n_items()) throw InconsistentStateError("unknown item in a stack");
      ++seen[it];
    }
  for (const auto& h : s.holding)
    if (h) {
      if (*h < 0 || *h >= cfg.n_items()) throw InconsistentStateError("unknown item in hand");
      ++seen[*h];
    }
  for (ItemId it = 0; it < cfg.n_items(); ++it)
    if (seen[it] != 1)
      throw InconsistentStateError("item " + cfg.items[it].name + " appears " +
                                   std::to_string(seen[it]) + " times");

  for (StationId st = 0; st < cfg.n_stations(); ++st) {
    const auto& stack = s.stacks[st];
    const auto patient_pos = std::find(stack.begin(), stack.end(), cfg.patient_item);
    if (patient_pos == stack.end()) continue;
    for (auto it = stack.begin(); it != patient_pos; ++it)
      if (!cfg.items[*it].can_stack_under)
        throw InconsistentStateError("item " + cfg.items[*it].name +
                                     " may not sit below the patient");
  }

  for (AgentId a = 0; a < cfg.n_agents(); ++a)
    if (s.agent_station[a] < 0 || s.agent_station[a] >= cfg.n_stations())
      throw InconsistentStateError("agent at unknown station");
}

namespace {
// Position of the patient in its stack, or (-1, -1) when absent.
std::pair<StationId, int> patient_position(const WorldConfig& cfg, const WorldState& s) {
  for (StationId st = 0; st < static_cast<StationId>(s.stacks.size()); ++st) {
    const auto& stack = s.stacks[st];
    for (int i = 0; i < static_cast<int>(stack.size()); ++i)
      if (stack[i] == cfg.patient_item) return {st, i};
  }
  return {-1, -1};
}
}  // namespace

bool item_under_patient(const WorldConfig& cfg, const WorldState& s, ItemId item) {
  auto [st, pos] = patient_position(cfg, s);
  if (st < 0) return false;
  for (int i = 0; i < pos; ++i)
    if (s.stacks[st][i] == item) return true;
  return false;
}

bool item_on_patient(const WorldConfig& cfg, const WorldState& s, ItemId item) {
  auto [st, pos] = patient_position(cfg, s);
  if (st < 0) return false;
  for (int i = pos + 1; i < static_cast<int>(s.stacks[st].size()); ++i)
    if (s.stacks[st][i] == item) return true;
  return false;
}

}  // namespace hospmarl
