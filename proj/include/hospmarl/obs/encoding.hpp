#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hospmarl/env/goal.hpp"
#include "hospmarl/env/skills.hpp"
#include "hospmarl/env/transition.hpp"
#include "hospmarl/env/world.hpp"

namespace hospmarl {

// Boolean observation wire format, per agent:
//   [patient 4][locations S per agent][held items I_h per agent]
//   [skill levels 3*K per agent][availability 1 + S + 2]
// Block contents and their orders:
//   patient       chest_compressed, rescue_breathed, medicated, shocked
//   locations     one-hot over stations in layout order, agents in index order
//   held items    one-hot over the held-item list (pump1, cpr_board1, patient1
//                 canonically), agents in index order
//   skill levels  one-hot over (unskilled, beginner, expert) per displayed
//                 skill (compressions, breaths canonically), agents in order
//   availability  treat patient; Move per station; move an item (pick/place/
//                 stack/unstack); stack under - all for the observing agent
// Canonical 3-agent layout: 4 + 18 + 9 + 18 + 9 = 58 per agent, 174 joint.
struct EncodingSpec {
  int n_agents = 3;
  int n_stations = 6;
  std::vector<ItemId> held_items;          // items encodable in the held block
  std::vector<Subtask> displayed_skills;   // skills encoded one-hot
  bool canonical = true;                   // false -> generalized layout sizes
  bool mask_other_agents = false;          // zero out other agents' blocks

  int per_agent_length() const;
  std::string version() const;
};

EncodingSpec make_encoding_spec(const WorldConfig& cfg, bool mask_other_agents = false);

struct ObservationVector {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits[i]; }
};

ObservationVector encode(const EncodingSpec& spec, const WorldConfig& cfg, const WorldState& s,
                         AgentId agent, const std::vector<SkillProfile>& skills);

std::vector<ObservationVector> joint_encode(const EncodingSpec& spec, const WorldConfig& cfg,
                                            const WorldState& s,
                                            const std::vector<SkillProfile>& skills);

}  // namespace hospmarl
