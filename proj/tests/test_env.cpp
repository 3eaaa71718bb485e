#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "hospmarl/env/transition.hpp"
#include "hospmarl/env/world.hpp"
#include "hospmarl/errors.hpp"
#include "test_helpers.hpp"

using namespace hospmarl;

namespace {

bool contains_kind(const std::vector<Action>& actions, ActionKind k) {
  return std::any_of(actions.begin(), actions.end(),
                     [&](const Action& a) { return a.kind == k; });
}

// Multiset of item locations: station stacks plus hands, for conservation checks.
std::multiset<ItemId> all_items(const WorldState& s) {
  std::multiset<ItemId> items;
  for (const auto& stack : s.stacks)
    for (ItemId it : stack) items.insert(it);
  for (const auto& h : s.holding)
    if (h) items.insert(*h);
  return items;
}

}  // namespace

TEST_CASE("default layout matches the canonical scene") {
  WorldConfig cfg = default_world();
  CHECK(cfg.n_stations() == 6);
  CHECK(cfg.n_agents() == 3);
  CHECK(cfg.stations == canonical_stations());
  CHECK(cfg.items[cfg.patient_item].movable == false);
  CHECK(cfg.items[cfg.cpr_board_item].can_stack_under == true);
  CHECK(action_space_size(cfg.n_stations()) == 16);
  check_state(cfg, initial_state(cfg));
}

TEST_CASE("pick up is offered for a lone board at the agent's station") {
  WorldConfig cfg = default_world();
  WorldState s = initial_state(cfg);
  s.agent_station[0] = cfg.station_index("table1");
  SkillProfile expert;
  const auto legal = legal_actions(cfg, s, 0, expert);
  CHECK(contains_kind(legal, ActionKind::PickUp));
  CHECK(contains_kind(legal, ActionKind::Noop));
  CHECK(!contains_kind(legal, ActionKind::Place));
}

TEST_CASE("empty hand at an empty station offers only noop and moves") {
  WorldConfig cfg = default_world();
  WorldState s = initial_state(cfg);
  s.agent_station[0] = cfg.station_index("patient_legs1");  // empty stack
  SkillProfile expert;
  for (const Action& a : legal_actions(cfg, s, 0, expert))
    CHECK((a.kind == ActionKind::Noop || a.kind == ActionKind::Move));
}

TEST_CASE("zero compression skill masks the treatment even when prepared") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = false;
  WorldState s = initial_state(cfg);
  const StationId bed = cfg.station_index("patient_bed_station1");
  s.stacks[bed] = {cfg.cpr_board_item, cfg.patient_item};
  s.stacks[cfg.station_index("table1")].clear();
  s.agent_station[0] = bed;
  SkillProfile unskilled;
  unskilled.set(Subtask::CompressChest, kUnskilled);
  CHECK(!contains_kind(legal_actions(cfg, s, 0, unskilled), ActionKind::CompressChest));
  SkillProfile expert;
  CHECK(contains_kind(legal_actions(cfg, s, 0, expert), ActionKind::CompressChest));
}

TEST_CASE("moves are offered only to unoccupied other stations") {
  WorldConfig cfg = default_world();
  WorldState s = initial_state(cfg);
  SkillProfile expert;
  const auto legal = legal_actions(cfg, s, 0, expert);
  for (const Action& a : legal)
    if (a.kind == ActionKind::Move) {
      CHECK(a.target != s.agent_station[0]);
      CHECK(!s.station_occupied(a.target, 0));
    }
  // three stations are free in the default layout
  CHECK(std::count_if(legal.begin(), legal.end(),
                      [](const Action& a) { return a.kind == ActionKind::Move; }) == 3);
}

TEST_CASE("contested pick-up goes to the lower agent index") {
  WorldConfig cfg = default_world();
  WorldState s = initial_state(cfg);
  const StationId table = cfg.station_index("table1");
  // Co-located agents cannot arise via legal moves but are a valid input.
  s.agent_station[0] = table;
  s.agent_station[1] = table;
  std::vector<SkillProfile> skills(3);
  const Action pick{ActionKind::PickUp, -1};
  const auto res = step(cfg, s, {pick, pick, noop_action()}, skills);
  CHECK(res.executed[0]);
  CHECK(!res.executed[1]);
  CHECK(res.state.holding[0] == cfg.cpr_board_item);
  CHECK(!res.state.holding[1].has_value());
}

TEST_CASE("contested move goes to the lower agent index") {
  WorldConfig cfg = default_world();
  WorldState s = initial_state(cfg);
  const StationId legs = cfg.station_index("patient_legs1");
  std::vector<SkillProfile> skills(3);
  const auto res = step(cfg, s, {move_action(legs), move_action(legs), noop_action()}, skills);
  CHECK(res.executed[0]);
  CHECK(!res.executed[1]);
  CHECK(res.state.agent_station[0] == legs);
  CHECK(res.state.agent_station[1] == initial_state(cfg).agent_station[1]);
}

TEST_CASE("the Nth compression raises the chest_compressed flag") {
  WorldConfig cfg = default_world();
  cfg.compressions_target = 2;
  cfg.energy.enabled = false;
  std::vector<SkillProfile> skills(3);
  WorldState s = initial_state(cfg);
  for (const auto& joint : testutil::cpr_expert_script(cfg)) {
    CHECK(!s.patient.chest_compressed);
    s = step(cfg, s, joint, skills).state;
  }
  CHECK(s.patient.chest_compressed);
  CHECK(s.patient.compressions_done == 2);
}

TEST_CASE("all noop leaves everything but the tick and energy untouched") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = true;
  WorldState s = initial_state(cfg);
  s.energy = {1, 2, 3};
  std::vector<SkillProfile> skills(3);
  const auto res = step(cfg, s, {noop_action(), noop_action(), noop_action()}, skills);
  CHECK(res.state.tick == s.tick + 1);
  CHECK(res.state.energy == std::vector<int>{2, 3, 3});
  WorldState frozen = res.state;
  frozen.tick = s.tick;
  frozen.energy = s.energy;
  CHECK(frozen == s);
}

TEST_CASE("inconsistent input state is rejected") {
  WorldConfig cfg = default_world();
  WorldState s = initial_state(cfg);
  s.holding[0] = cfg.cpr_board_item;  // board is now both on table1 and in hand
  std::vector<SkillProfile> skills(3);
  CHECK_THROWS_AS(step(cfg, s, {noop_action(), noop_action(), noop_action()}, skills),
                  InconsistentStateError);
}

TEST_CASE("items attached to the patient cannot be taken back") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = false;
  const StationId bed = cfg.station_index("patient_bed_station1");
  WorldState s = initial_state(cfg);
  s.stacks[cfg.station_index("hospital_cart1")].clear();
  s.stacks[bed] = {cfg.patient_item, cfg.pump_item};
  s.agent_station[0] = bed;
  SkillProfile expert;
  const auto legal = legal_actions(cfg, s, 0, expert);
  CHECK(!contains_kind(legal, ActionKind::Unstack));
  CHECK(!contains_kind(legal, ActionKind::PickUp));
}

TEST_CASE("render is deterministic and move edits only that agent's line") {
  WorldConfig cfg = default_world();
  WorldState s = initial_state(cfg);
  CHECK(render_text(cfg, s) == render_text(cfg, initial_state(cfg)));

  std::vector<SkillProfile> skills(3);
  const StationId legs = cfg.station_index("patient_legs1");
  WorldState moved = step(cfg, s, {move_action(legs), noop_action(), noop_action()}, skills).state;
  moved.tick = s.tick;  // ignore the tick header line for the comparison

  std::istringstream before(render_text(cfg, s)), after(render_text(cfg, moved));
  std::string a, b;
  int diff = 0;
  while (std::getline(before, a) && std::getline(after, b))
    if (a != b) ++diff;
  CHECK(diff == 1);
}

TEST_CASE("golden initial render") {
  WorldConfig cfg = default_world();
  const std::string expected =
      "tick 0\n"
      "patient compressed=0 breathed=0 medicated=0 shocked=0 compressions=0\n"
      "station hospital_cart_right1: -\n"
      "station table1: cpr_board1\n"
      "station hospital_cart1: pump1\n"
      "station hospital_cart_left1: -\n"
      "station patient_legs1: -\n"
      "station patient_bed_station1: patient1\n"
      "agent 0 @ hospital_cart_right1 hand=-\n"
      "agent 1 @ hospital_cart1 hand=-\n"
      "agent 2 @ hospital_cart_left1 hand=-\n";
  CHECK(render_text(cfg, initial_state(cfg)) == expected);
}

TEST_CASE("random playouts conserve items, keep the patient put, keep flags monotone") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = true;
  std::vector<SkillProfile> skills(3);
  std::mt19937_64 rng(7);
  const auto initial_items = all_items(initial_state(cfg));
  const StationId bed = cfg.station_index("patient_bed_station1");

  for (int episode = 0; episode < 40; ++episode) {
    WorldState s = initial_state(cfg);
    PatientFlags prev_flags = s.patient;
    for (int t = 0; t < 50; ++t) {
      const auto joint = testutil::random_joint_action(cfg, s, skills, rng);
      s = step(cfg, s, joint, skills).state;
      CHECK(all_items(s) == initial_items);
      CHECK(s.station_of_item(cfg.patient_item) == bed);
      CHECK(s.patient.chest_compressed >= prev_flags.chest_compressed);
      CHECK(s.patient.rescue_breathed >= prev_flags.rescue_breathed);
      CHECK(s.patient.compressions_done >= prev_flags.compressions_done);
      prev_flags = s.patient;
      check_state(cfg, s);
    }
  }
}

TEST_CASE("every advertised action executes when submitted alone") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = true;
  std::vector<SkillProfile> skills(3);
  std::mt19937_64 rng(11);

  for (int episode = 0; episode < 20; ++episode) {
    WorldState s = initial_state(cfg);
    for (int t = 0; t < 30; ++t) {
      for (AgentId a = 0; a < 3; ++a) {
        for (const Action& candidate : legal_actions(cfg, s, a, skills[a])) {
          std::vector<Action> joint(3, noop_action());
          joint[a] = candidate;
          CHECK(step(cfg, s, joint, skills).executed[a]);
        }
      }
      s = step(cfg, s, testutil::random_joint_action(cfg, s, skills, rng), skills).state;
    }
  }
}

TEST_CASE("step is deterministic for identical inputs") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = true;
  std::vector<SkillProfile> skills(3);

  auto run = [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<WorldState> trace;
    WorldState s = initial_state(cfg);
    for (int t = 0; t < 80; ++t) {
      s = step(cfg, s, testutil::random_joint_action(cfg, s, skills, rng), skills).state;
      trace.push_back(s);
    }
    return trace;
  };
  CHECK(run(123) == run(123));
}
