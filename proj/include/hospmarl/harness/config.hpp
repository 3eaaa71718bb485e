#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hospmarl/env/goal.hpp"
#include "hospmarl/env/skills.hpp"
#include "hospmarl/env/world.hpp"
#include "hospmarl/fairness/ledger.hpp"
#include "hospmarl/learn/common.hpp"
#include "hospmarl/learn/mappo.hpp"
#include "hospmarl/learn/value_learner.hpp"

namespace hospmarl {

// Fully resolved experiment description. Everything that can influence a
// result lives here and is serialized back out as resolved_config.json.
struct ExperimentConfig {
  WorldConfig world;
  bool mask_other_agents = false;

  std::string composition = "uniform";  // or "explicit" with profiles below
  std::vector<SkillProfile> profiles;

  GoalSpec goal;
  std::string goal_name = "cpr";

  FairnessMode fairness = FairnessMode::FairSkill;
  double alpha = 0.7;
  double lambda = 1.0;

  Algo algo = Algo::Iql;
  ValueHyper value_hyper = default_value_hyper(Algo::Iql);
  MappoHyper mappo_hyper;

  long total_steps = 50000;
  long eval_interval = 10000;
  int eval_episodes = 100;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3};

  int n_agents() const { return world.n_agents(); }

  nlohmann::json resolved_json() const;
};

// Parses, validates (unknown keys rejected, ranges checked) and resolves all
// defaults. Throws ConfigError with the offending path on any problem.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig config_from_file(const std::string& path);
ExperimentConfig default_config();

// FNV-1a over the resolved dump; stamped into checkpoints and metadata.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string config_hash_hex(const ExperimentConfig& cfg);

}  // namespace hospmarl
