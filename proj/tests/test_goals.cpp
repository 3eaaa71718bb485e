#include <doctest.h>

#include <random>

#include "hospmarl/env/goal.hpp"
#include "hospmarl/env/transition.hpp"
#include "hospmarl/errors.hpp"
#include "test_helpers.hpp"

using namespace hospmarl;

TEST_CASE("heuristic counts prerequisite-respecting completed steps") {
  WorldConfig cfg = default_world();
  const GoalSpec goal = cpr_goal(cfg, 2);
  WorldState s = initial_state(cfg);
  CHECK(heuristic(cfg, s, goal) == 0);
  CHECK(!is_success(cfg, s, goal));

  const StationId bed = cfg.station_index("patient_bed_station1");
  s.stacks[cfg.station_index("table1")].clear();
  s.stacks[bed] = {cfg.cpr_board_item, cfg.patient_item};
  CHECK(heuristic(cfg, s, goal) == 1);

  s.patient.compressions_done = 2;
  s.patient.chest_compressed = true;
  CHECK(heuristic(cfg, s, goal) == 2);
  CHECK(is_success(cfg, s, goal));
}

TEST_CASE("compressions without the board do not count towards H") {
  WorldConfig cfg = default_world();
  const GoalSpec goal = cpr_goal(cfg, 2);
  WorldState s = initial_state(cfg);
  s.patient.compressions_done = 5;  // constructed state; unreachable via play
  CHECK(heuristic(cfg, s, goal) == 0);
}

TEST_CASE("base reward is the per-tick H delta and telescopes over the script") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = false;
  const GoalSpec goal = cpr_goal(cfg, 2);
  std::vector<SkillProfile> skills(3);

  WorldState s = initial_state(cfg);
  double total = 0.0;
  for (const auto& joint : testutil::cpr_expert_script(cfg)) {
    WorldState next = step(cfg, s, joint, skills).state;
    const double r = base_reward(cfg, s, next, goal);
    CHECK(r >= 0.0);
    total += r;
    s = next;
  }
  CHECK(total == doctest::Approx(2.0));
  CHECK(is_success(cfg, s, goal));
  CHECK(total == heuristic(cfg, s, goal) - heuristic(cfg, initial_state(cfg), goal));
}

TEST_CASE("rescue goal fails when the pump was never placed") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = false;
  const GoalSpec goal = rescue_breaths_goal(cfg, 2);
  std::vector<SkillProfile> skills(3);
  WorldState s = initial_state(cfg);
  for (const auto& joint : testutil::cpr_expert_script(cfg)) s = step(cfg, s, joint, skills).state;
  CHECK(heuristic(cfg, s, goal) == 2);
  CHECK(!is_success(cfg, s, goal));
}

TEST_CASE("the expert rescue script completes the rescue goal") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = false;
  const GoalSpec goal = rescue_breaths_goal(cfg, 2);
  std::vector<SkillProfile> skills(3);
  WorldState s = initial_state(cfg);
  double total = 0.0;
  for (const auto& joint : testutil::rescue_expert_script(cfg)) {
    WorldState next = step(cfg, s, joint, skills).state;
    total += base_reward(cfg, s, next, goal);
    s = next;
  }
  CHECK(is_success(cfg, s, goal));
  CHECK(total == doctest::Approx(4.0));
}

TEST_CASE("random episodes telescope exactly and keep H monotone") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = true;
  std::vector<SkillProfile> skills(3);
  std::mt19937_64 rng(31);

  for (const GoalSpec& goal : {cpr_goal(cfg, 2), rescue_breaths_goal(cfg, 2)}) {
    for (int episode = 0; episode < 50; ++episode) {
      WorldState s = initial_state(cfg);
      const int h0 = heuristic(cfg, s, goal);
      int prev_h = h0;
      double total = 0.0;
      for (int t = 0; t < goal.max_episode_ticks; ++t) {
        WorldState next =
            step(cfg, s, testutil::random_joint_action(cfg, s, skills, rng), skills).state;
        total += base_reward(cfg, s, next, goal);
        const int h = heuristic(cfg, next, goal);
        CHECK(h >= prev_h);
        prev_h = h;
        s = next;
      }
      CHECK(total == static_cast<double>(heuristic(cfg, s, goal) - h0));
    }
  }
}

TEST_CASE("board placement surfaces as a manipulation completion") {
  WorldConfig cfg = default_world();
  cfg.energy.enabled = false;
  const GoalSpec goal = cpr_goal(cfg, 2);
  std::vector<SkillProfile> skills(3);

  WorldState s = initial_state(cfg);
  int manip_events = 0;
  for (const auto& joint : testutil::cpr_expert_script(cfg)) {
    WorldState next = step(cfg, s, joint, skills).state;
    manip_events +=
        static_cast<int>(newly_satisfied_manipulation_steps(cfg, s, next, goal).size());
    s = next;
  }
  CHECK(manip_events == 1);
}

TEST_CASE("goal prerequisites must point backwards") {
  WorldConfig cfg = default_world();
  GoalSpec bad = cpr_goal(cfg, 2);
  bad.steps[0].prerequisite = 1;
  CHECK_THROWS_AS(heuristic(cfg, initial_state(cfg), bad), ConfigError);
}
