#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hospmarl/fairness/ledger.hpp"
#include "hospmarl/fairness/metrics.hpp"
#include "hospmarl/errors.hpp"

using namespace hospmarl;

namespace {

// Literal pairwise double sum; the independent route the implementation is
// checked against.
double gini_double_sum(const std::vector<int>& x) {
  const int n = static_cast<int>(x.size());
  double total = 0.0;
  for (int v : x) total += v;
  if (n == 0 || total <= 0.0) return 0.0;
  const double mean = total / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc += std::abs(static_cast<double>(x[i]) - x[j]);
  return acc / (2.0 * n * n * mean);
}

}  // namespace

TEST_CASE("gini matches the hand-computed reference points") {
  CHECK(gini_l1(std::vector<int>{5, 5, 5}) == 0.0);
  CHECK(gini_l1(std::vector<int>{2, 1, 0}) == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(gini_l1(std::vector<int>{1, 0, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(gini_l1(std::vector<int>{0, 0, 0}) == 0.0);
  CHECK(gini_l1(std::vector<int>{}) == 0.0);
  CHECK(gini_l1(std::vector<int>{7}) == 0.0);
}

TEST_CASE("gini agrees with the literal double sum on random vectors") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(1, 6), entry(0, 9);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<int> x(len(rng));
    for (int& v : x) v = entry(rng);
    CHECK(gini_l1(x) == doctest::Approx(gini_double_sum(x)).epsilon(1e-12));
  }
}

TEST_CASE("composite disparity endpoints are bit-exact") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double l1 = u(rng), l2 = u(rng);
    CHECK(composite_l3(l1, l2, 1.0) == l1);
    CHECK(composite_l3(l1, l2, 0.0) == l2);
  }
  CHECK(composite_l3(0.4, 0.2, 0.7) == doctest::Approx(0.34).epsilon(1e-12));
}

TEST_CASE("shaped reward is base minus lambda times L3") {
  CHECK(shaped_reward(1.0, 0.34, 1.0) == doctest::Approx(0.66).epsilon(1e-12));
  CHECK(shaped_reward(0.0, 0.5, 4.0) == doctest::Approx(-2.0).epsilon(1e-12));
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double base = u(rng);
    CHECK(shaped_reward(base, u(rng), 0.0) == base);  // no-shaping identity
  }
}

TEST_CASE("fen penalty is the normalized deviation from mean utilization") {
  CHECK(fen_penalty({4, 4, 4}) == std::vector<double>{0.0, 0.0, 0.0});
  const auto p = fen_penalty({6, 3, 3});
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fen_penalty({9}) == std::vector<double>{0.0});
  // sub-1 means are clamped in the denominator
  const auto q = fen_penalty({1, 0});
  CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ledger tallies counts, skill sums and the composite metric") {
  std::vector<SkillProfile> skills(3);
  skills[0].set(Subtask::CompressChest, kBeginner);
  skills[1].set(Subtask::CompressChest, kExpert);
  skills[2].set(Subtask::CompressChest, kUnskilled);

  FairnessLedger ledger(skills, 0.7, 1.0);
  CHECK(ledger.l1() == 0.0);
  CHECK(ledger.l2() == 0.0);

  ledger.record_subtask(Subtask::CompressChest, 0);
  ledger.record_subtask(Subtask::CompressChest, 0);
  CHECK(ledger.total_subtasks() == 2);
  CHECK(ledger.subtask_counts() == std::vector<int>{2, 0, 0});
  // both compressions ran at 0.5 while an expert was available
  CHECK(ledger.l2() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ledger.l1() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(ledger.l3() ==
        doctest::Approx(0.7 * (2.0 / 3.0) + 0.3 * 0.5).epsilon(1e-12));

  const auto pct = ledger.contribution_pct();
  CHECK(pct[0] == doctest::Approx(100.0));
  CHECK(pct[1] == 0.0);
  CHECK(ledger.range() == doctest::Approx(100.0));

  CHECK_THROWS_AS(ledger.record_subtask(Subtask::CompressChest, 9), UnknownSubtaskError);
}

TEST_CASE("ledger is deterministic over a replayed event sequence") {
  std::vector<SkillProfile> skills(3);
  auto play = [&] {
    FairnessLedger ledger(skills, 0.5, 2.0);
    ledger.record_subtask(Subtask::Manipulation, 2);
    ledger.record_subtask(Subtask::CompressChest, 0);
    ledger.record_subtask(Subtask::CompressChest, 1);
    ledger.record_subtask(Subtask::GiveRescueBreaths, 1);
    return ledger;
  };
  const auto a = play(), b = play();
  CHECK(a.subtask_counts() == b.subtask_counts());
  CHECK(a.l3() == b.l3());
  CHECK(a.total_subtasks() == 4);
}

TEST_CASE("alignment is perfect when every executor is a per-subtask maximum") {
  auto skills = std::vector<SkillProfile>(3);  // all expert
  FairnessLedger ledger(skills, 0.7, 1.0);
  ledger.record_subtask(Subtask::CompressChest, 1);
  ledger.record_subtask(Subtask::GiveRescueBreaths, 2);
  ledger.record_subtask(Subtask::Manipulation, 1);
  CHECK(ledger.l2() == 0.0);
}

TEST_CASE("a degenerate alignment denominator reports zero") {
  std::vector<SkillProfile> skills(2);
  for (auto& p : skills) p.set(Subtask::GiveShock, kUnskilled);
  FairnessLedger ledger(skills, 0.7, 1.0);
  ledger.record_subtask(Subtask::GiveShock, 0);
  CHECK(ledger.l2() == 0.0);
}
