#include "hospmarl/obs/encoding.hpp"

#include <sstream>

#include "hospmarl/errors.hpp"

namespace hospmarl {

int EncodingSpec::per_agent_length() const {
  const int skills_len = 3 * static_cast<int>(displayed_skills.size()) * n_agents;
  return 4 + n_stations * n_agents + static_cast<int>(held_items.size()) * n_agents + skills_len +
         (1 + n_stations + 2);
}

std::string EncodingSpec::version() const {
  std::ostringstream os;
  os << "obs-v1-a" << n_agents << "-s" << n_stations << "-i" << held_items.size() << "-k"
     << displayed_skills.size() << (canonical ? "-canon" : "-gen");
  if (mask_other_agents) os << "-masked";
  return os.str();
}

EncodingSpec make_encoding_spec(const WorldConfig& cfg, bool mask_other_agents) {
  EncodingSpec spec;
  spec.n_agents = cfg.n_agents();
  spec.n_stations = cfg.n_stations();
  spec.displayed_skills = {Subtask::CompressChest, Subtask::GiveRescueBreaths};
  spec.mask_other_agents = mask_other_agents;

  bool canonical = cfg.n_agents() == 3 && cfg.stations == canonical_stations();
  for (const auto& name : canonical_held_items()) {
    const ItemId id = cfg.item_index(name);
    if (id < 0) canonical = false;
  }
  if (canonical) {
    for (const auto& name : canonical_held_items()) spec.held_items.push_back(cfg.item_index(name));
    if (cfg.n_items() != static_cast<int>(spec.held_items.size())) canonical = false;
  }
  if (!canonical) {
    // Generalized layout: every item is encodable in the held block.
    spec.held_items.clear();
    for (ItemId i = 0; i < cfg.n_items(); ++i) spec.held_items.push_back(i);
  }
  spec.canonical = canonical;
  return spec;
}

namespace {
int skill_level_slot(double level) {
  if (level == kUnskilled) return 0;
  if (level == kBeginner) return 1;
  if (level == kExpert) return 2;
  throw ConfigError("skill level outside {0, 0.5, 1}");
}
}  // namespace

ObservationVector encode(const EncodingSpec& spec, const WorldConfig& cfg, const WorldState& s,
                         AgentId agent, const std::vector<SkillProfile>& skills) {
  const int n = spec.n_agents;
  ObservationVector obs;
  obs.bits.assign(spec.per_agent_length(), 0);
  std::size_t at = 0;

  obs.bits[at + 0] = s.patient.chest_compressed;
  obs.bits[at + 1] = s.patient.rescue_breathed;
  obs.bits[at + 2] = s.patient.medicated;
  obs.bits[at + 3] = s.patient.shocked;
  at += 4;

  for (AgentId j = 0; j < n; ++j) {
    if (!spec.mask_other_agents || j == agent) obs.bits[at + s.agent_station[j]] = 1;
    at += spec.n_stations;
  }

  for (AgentId j = 0; j < n; ++j) {
    if (!spec.mask_other_agents || j == agent) {
      for (std::size_t k = 0; k < spec.held_items.size(); ++k)
        if (s.holding[j] && *s.holding[j] == spec.held_items[k]) obs.bits[at + k] = 1;
    }
    at += spec.held_items.size();
  }

  for (AgentId j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < spec.displayed_skills.size(); ++k) {
      if (!spec.mask_other_agents || j == agent)
        obs.bits[at + skill_level_slot(skills[j].at(spec.displayed_skills[k]))] = 1;
      at += 3;
    }
  }

  const auto mask = legal_action_mask(cfg, s, agent, skills[agent]);
  const int S = cfg.n_stations();
  bool treat = false, move_item = false;
  for (ActionKind k : {ActionKind::CompressChest, ActionKind::GiveRescueBreaths,
                       ActionKind::GiveShock, ActionKind::GiveMedicine})
    treat = treat || mask[action_to_index(Action{k, -1}, S)];
  for (ActionKind k :
       {ActionKind::PickUp, ActionKind::Place, ActionKind::Stack, ActionKind::Unstack})
    move_item = move_item || mask[action_to_index(Action{k, -1}, S)];

  obs.bits[at++] = treat;
  for (StationId st = 0; st < S; ++st) obs.bits[at++] = mask[action_to_index(move_action(st), S)];
  obs.bits[at++] = move_item;
  obs.bits[at++] = mask[action_to_index(Action{ActionKind::StackUnder, -1}, S)];

  return obs;
}

std::vector<ObservationVector> joint_encode(const EncodingSpec& spec, const WorldConfig& cfg,
                                            const WorldState& s,
                                            const std::vector<SkillProfile>& skills) {
  std::vector<ObservationVector> out;
  out.reserve(spec.n_agents);
  for (AgentId a = 0; a < spec.n_agents; ++a) out.push_back(encode(spec, cfg, s, a, skills));
  return out;
}

}  // namespace hospmarl
