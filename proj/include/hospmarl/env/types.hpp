#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hospmarl {

using AgentId = int;
using StationId = int;  // index into WorldConfig::stations
using ItemId = int;     // index into WorldConfig::items

// Default station layout. Order is frozen: it defines the Move action ids and
// the location one-hot blocks of the observation wire format.
inline const std::vector<std::string>& canonical_stations() {
  static const std::vector<std::string> names = {
      "hospital_cart_right1", "table1",        "hospital_cart1",
      "hospital_cart_left1",  "patient_legs1", "patient_bed_station1",
  };
  return names;
}

// Items that can show up in an agent's hand in the default layout, in the
// order used by the held-item observation block.
inline const std::vector<std::string>& canonical_held_items() {
  static const std::vector<std::string> names = {"pump1", "cpr_board1", "patient1"};
  return names;
}

enum class Subtask : std::uint8_t {
  CompressChest = 0,
  GiveRescueBreaths,
  GiveShock,
  GiveMedicine,
  Manipulation,
};

inline constexpr std::array<Subtask, 4> kTreatmentSubtasks = {
    Subtask::CompressChest,
    Subtask::GiveRescueBreaths,
    Subtask::GiveShock,
    Subtask::GiveMedicine,
};

inline constexpr std::size_t kNumSubtasks = 5;

const char* subtask_name(Subtask k);
bool subtask_from_name(const std::string& name, Subtask& out);

// Skill levels are the three discrete values used everywhere: action gating,
// treatment durations and the alignment metric.
inline constexpr double kUnskilled = 0.0;
inline constexpr double kBeginner = 0.5;
inline constexpr double kExpert = 1.0;

bool valid_skill_level(double v);

}  // namespace hospmarl
