#include "hospmarl/env/types.hpp"

namespace hospmarl {

const char* subtask_name(Subtask k) {
  switch (k) {
    case Subtask::CompressChest: return "compress_chest";
    case Subtask::GiveRescueBreaths: return "give_rescue_breaths";
    case Subtask::GiveShock: return "give_shock";
    case Subtask::GiveMedicine: return "give_medicine";
    case Subtask::Manipulation: return "manipulation";
  }
  return "?";
}

bool subtask_from_name(const std::string& name, Subtask& out) {
  for (std::size_t i = 0; i < kNumSubtasks; ++i) {
    const auto k = static_cast<Subtask>(i);
    if (name == subtask_name(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

bool valid_skill_level(double v) { return v == kUnskilled || v == kBeginner || v == kExpert; }

}  // namespace hospmarl
