#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "hospmarl/obs/encoding.hpp"
#include "test_helpers.hpp"

using namespace hospmarl;

namespace {

int block_sum(const ObservationVector& obs, int offset, int len) {
  int s = 0;
  for (int i = 0; i < len; ++i) s += obs.bits[offset + i];
  return s;
}

}  // namespace

TEST_CASE("canonical layout encodes 58 bits per agent, 174 joint") {
  WorldConfig cfg = default_world();
  const EncodingSpec spec = make_encoding_spec(cfg);
  CHECK(spec.canonical);
  CHECK(spec.per_agent_length() == 58);

  std::vector<SkillProfile> skills(3);
  const auto joint = joint_encode(spec, cfg, initial_state(cfg), skills);
  CHECK(joint.size() == 3);
  std::size_t total = 0;
  for (const auto& o : joint) total += o.size();
  CHECK(total == 174);
}

TEST_CASE("untreated patient encodes four zero bits") {
  WorldConfig cfg = default_world();
  const EncodingSpec spec = make_encoding_spec(cfg);
  std::vector<SkillProfile> skills(3);
  const auto obs = encode(spec, cfg, initial_state(cfg), 0, skills);
  for (int i = 0; i < 4; ++i) CHECK(obs.bits[i] == 0);
}

TEST_CASE("held board sets exactly its bit in the agent's held block") {
  WorldConfig cfg = default_world();
  const EncodingSpec spec = make_encoding_spec(cfg);
  std::vector<SkillProfile> skills(3);
  WorldState s = initial_state(cfg);
  s.stacks[cfg.station_index("table1")].clear();
  s.holding[1] = cfg.cpr_board_item;

  const auto obs = encode(spec, cfg, s, 0, skills);
  const int held_base = 4 + 6 * 3;
  // blocks: agent0 [0..2], agent1 [3..5]; canonical item order pump, board, patient
  CHECK(block_sum(obs, held_base + 0, 3) == 0);
  CHECK(block_sum(obs, held_base + 3, 3) == 1);
  CHECK(obs.bits[held_base + 3 + 1] == 1);
}

TEST_CASE("one-hot block invariants hold across random reachable states") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = true;
  const EncodingSpec spec = make_encoding_spec(cfg);
  auto skills = team_from_composition(TeamComposition::Specialized, 3);
  std::mt19937_64 rng(4);

  for (int episode = 0; episode < 30; ++episode) {
    WorldState s = initial_state(cfg);
    for (int t = 0; t < 25; ++t) {
      for (AgentId a = 0; a < 3; ++a) {
        const auto obs = encode(spec, cfg, s, a, skills);
        int at = 4;
        for (int j = 0; j < 3; ++j, at += 6) CHECK(block_sum(obs, at, 6) == 1);
        for (int j = 0; j < 3; ++j, at += 3) CHECK(block_sum(obs, at, 3) <= 1);
        for (int j = 0; j < 3 * 2; ++j, at += 3) CHECK(block_sum(obs, at, 3) == 1);
        CHECK(at == 4 + 18 + 9 + 18);
      }
      s = step(cfg, s, testutil::random_joint_action(cfg, s, skills, rng), skills).state;
    }
  }
}

TEST_CASE("availability bits mirror the legal-action families") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = true;
  const EncodingSpec spec = make_encoding_spec(cfg);
  std::vector<SkillProfile> skills(3);
  std::mt19937_64 rng(12);

  WorldState s = initial_state(cfg);
  for (int t = 0; t < 120; ++t) {
    for (AgentId a = 0; a < 3; ++a) {
      const auto obs = encode(spec, cfg, s, a, skills);
      const auto legal = legal_actions(cfg, s, a, skills[a]);
      auto has = [&](ActionKind k) {
        return std::any_of(legal.begin(), legal.end(),
                           [&](const Action& x) { return x.kind == k; });
      };
      const int avail = 4 + 18 + 9 + 18;
      CHECK(obs.bits[avail] == (has(ActionKind::CompressChest) ||
                                has(ActionKind::GiveRescueBreaths) ||
                                has(ActionKind::GiveShock) || has(ActionKind::GiveMedicine)));
      for (StationId st = 0; st < 6; ++st) {
        const bool can_move = std::any_of(legal.begin(), legal.end(), [&](const Action& x) {
          return x.kind == ActionKind::Move && x.target == st;
        });
        CHECK(obs.bits[avail + 1 + st] == can_move);
      }
      CHECK(obs.bits[avail + 7] == (has(ActionKind::PickUp) || has(ActionKind::Place) ||
                                    has(ActionKind::Stack) || has(ActionKind::Unstack)));
      CHECK(obs.bits[avail + 8] == has(ActionKind::StackUnder));
    }
    s = step(cfg, s, testutil::random_joint_action(cfg, s, skills, rng), skills).state;
  }
}

TEST_CASE("swapping two identical agents swaps exactly their blocks") {
  WorldConfig cfg = default_world();
  const EncodingSpec spec = make_encoding_spec(cfg);
  std::vector<SkillProfile> skills(3);

  WorldState s = initial_state(cfg);
  WorldState swapped = s;
  std::swap(swapped.agent_station[0], swapped.agent_station[1]);

  const auto a = encode(spec, cfg, s, 2, skills);
  const auto b = encode(spec, cfg, swapped, 2, skills);

  // location blocks of agents 0 and 1 swap
  for (int i = 0; i < 6; ++i) {
    CHECK(a.bits[4 + i] == b.bits[4 + 6 + i]);
    CHECK(a.bits[4 + 6 + i] == b.bits[4 + i]);
  }
  // everything outside the two location blocks is unchanged
  for (int i = 0; i < 58; ++i) {
    if (i >= 4 && i < 4 + 12) continue;
    CHECK(a.bits[i] == b.bits[i]);
  }
}

TEST_CASE("identical states produce identical joint encodings") {
  WorldConfig cfg = default_world();
  const EncodingSpec spec = make_encoding_spec(cfg);
  std::vector<SkillProfile> skills(3);
  const auto x = joint_encode(spec, cfg, initial_state(cfg), skills);
  const auto y = joint_encode(spec, cfg, initial_state(cfg), skills);
  for (int a = 0; a < 3; ++a) CHECK(x[a].bits == y[a].bits);
}

TEST_CASE("generalized layouts fall back to the length formula") {
  WorldConfig cfg = default_world(2);  // 2 agents: no longer canonical
  const EncodingSpec spec = make_encoding_spec(cfg);
  CHECK(!spec.canonical);
  // 4 + 6*2 + 3*2 + 6*2 + (1 + 6 + 2)
  CHECK(spec.per_agent_length() == 4 + 12 + 6 + 12 + 9);
  CHECK(spec.version() != make_encoding_spec(default_world()).version());

  std::vector<SkillProfile> skills(2);
  const auto obs = encode(spec, cfg, initial_state(cfg), 0, skills);
  CHECK(static_cast<int>(obs.size()) == spec.per_agent_length());
}

TEST_CASE("masking other agents zeroes their shared blocks") {
  WorldConfig cfg = default_world();
  const EncodingSpec spec = make_encoding_spec(cfg, /*mask_other_agents=*/true);
  std::vector<SkillProfile> skills(3);
  const auto obs = encode(spec, cfg, initial_state(cfg), 1, skills);
  // agent 0's location block must be all zero, agent 1's one-hot
  CHECK(block_sum(obs, 4, 6) == 0);
  CHECK(block_sum(obs, 4 + 6, 6) == 1);
}
