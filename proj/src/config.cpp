#include "hospmarl/harness/config.hpp"

#include <fstream>
#include <set>

#include "hospmarl/errors.hpp"

namespace hospmarl {

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get_or(const nlohmann::json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

WorldConfig parse_layout(const nlohmann::json& j, int n_agents) {
  if (j.is_null()) return default_world(n_agents);
  reject_unknown_keys(j, {"stations", "items", "agent_start", "treatment_stations"}, "layout");

  WorldConfig cfg;
  cfg.stations = get_or<std::vector<std::string>>(j, "stations", canonical_stations());
  if (cfg.stations.empty()) throw ConfigError("layout.stations: needs at least one station");
  cfg.initial_stacks.assign(cfg.stations.size(), {});

  if (j.contains("items")) {
    for (const auto& item : j.at("items")) {
      reject_unknown_keys(item, {"name", "station", "movable", "can_stack_under"}, "layout.items[]");
      ItemDef def;
      def.name = item.at("name").get<std::string>();
      // the two special items keep their properties unless overridden
      def.movable = get_or<bool>(item, "movable", def.name != "patient1");
      def.can_stack_under = get_or<bool>(item, "can_stack_under", def.name == "cpr_board1");
      const std::string station = item.at("station").get<std::string>();
      const StationId st = [&] {
        for (StationId i = 0; i < static_cast<StationId>(cfg.stations.size()); ++i)
          if (cfg.stations[i] == station) return i;
        throw ConfigError("layout.items: unknown station '" + station + "'");
      }();
      const ItemId id = static_cast<ItemId>(cfg.items.size());
      cfg.items.push_back(def);
      cfg.initial_stacks[st].push_back(id);
    }
  } else {
    const WorldConfig dflt = default_world(n_agents);
    cfg.items = dflt.items;
    cfg.initial_stacks = dflt.initial_stacks;
  }
  cfg.patient_item = cfg.item_index("patient1");
  cfg.cpr_board_item = cfg.item_index("cpr_board1");
  cfg.pump_item = cfg.item_index("pump1");
  cfg.aed_item = cfg.item_index("aed1");
  cfg.syringe_item = cfg.item_index("syringe1");
  if (cfg.patient_item < 0) throw ConfigError("layout.items: patient1 is required");

  const auto to_station = [&](const std::string& name, const char* where) {
    const StationId st = cfg.station_index(name);
    if (st < 0) throw ConfigError(std::string(where) + ": unknown station '" + name + "'");
    return st;
  };

  if (j.contains("agent_start")) {
    for (const auto& name : j.at("agent_start"))
      cfg.agent_start.push_back(to_station(name.get<std::string>(), "layout.agent_start"));
  } else {
    const WorldConfig dflt = default_world(n_agents);
    for (int i = 0; i < n_agents; ++i)
      cfg.agent_start.push_back(to_station(dflt.stations[dflt.agent_start[i]], "layout"));
  }
  if (static_cast<int>(cfg.agent_start.size()) != n_agents)
    throw ConfigError("layout.agent_start: entry count must equal agents.count");

  if (j.contains("treatment_stations")) {
    for (const auto& name : j.at("treatment_stations"))
      cfg.treatment_stations.push_back(
          to_station(name.get<std::string>(), "layout.treatment_stations"));
  } else {
    for (const auto& name : {"patient_legs1", "patient_bed_station1"}) {
      const StationId st = cfg.station_index(name);
      if (st >= 0) cfg.treatment_stations.push_back(st);
    }
    if (cfg.treatment_stations.empty())
      throw ConfigError("layout: treatment_stations required for this station set");
  }
  return cfg;
}

EnergyParams parse_energy(const nlohmann::json& j) {
  EnergyParams e;
  e.enabled = false;
  if (j.is_null()) return e;
  reject_unknown_keys(j, {"enabled", "cost", "recharge_rate", "e_max"}, "energy");
  e.enabled = get_or<bool>(j, "enabled", false);
  e.recharge_rate = get_or<int>(j, "recharge_rate", 1);
  e.e_max = get_or<int>(j, "e_max", 3);
  if (j.contains("cost")) {
    e.cost = {0, 0, 0, 0, 0};
    for (const auto& [key, value] : j.at("cost").items()) {
      Subtask k;
      if (!subtask_from_name(key, k)) throw ConfigError("energy.cost: unknown subtask '" + key + "'");
      e.cost[static_cast<std::size_t>(k)] = value.get<int>();
    }
  }
  if (e.recharge_rate < 0) throw ConfigError("energy.recharge_rate must be >= 0");
  for (int c : e.cost)
    if (c < 0 || c > e.e_max) throw ConfigError("energy.cost must satisfy 0 <= cost <= e_max");
  return e;
}

SubgoalPredicate parse_step(const nlohmann::json& j, const WorldConfig& world) {
  reject_unknown_keys(j, {"kind", "item", "count", "flag", "prerequisite"}, "goal.steps[]");
  SubgoalPredicate p;
  const std::string kind = j.at("kind").get<std::string>();
  const auto item = [&] {
    const ItemId id = world.item_index(j.at("item").get<std::string>());
    if (id < 0) throw ConfigError("goal.steps: unknown item");
    return id;
  };
  if (kind == "item_under_patient") {
    p.kind = PredicateKind::ItemUnderPatient;
    p.item = item();
  } else if (kind == "item_on_patient") {
    p.kind = PredicateKind::ItemOnPatient;
    p.item = item();
  } else if (kind == "compressions_at_least") {
    p.kind = PredicateKind::CompressionsAtLeast;
    p.count = j.at("count").get<int>();
  } else if (kind == "patient_flag") {
    p.kind = PredicateKind::PatientFlag;
    const std::string flag = j.at("flag").get<std::string>();
    if (flag == "chest_compressed") p.flag = PatientFlagKind::ChestCompressed;
    else if (flag == "rescue_breathed") p.flag = PatientFlagKind::RescueBreathed;
    else if (flag == "shocked") p.flag = PatientFlagKind::Shocked;
    else if (flag == "medicated") p.flag = PatientFlagKind::Medicated;
    else throw ConfigError("goal.steps: unknown flag '" + flag + "'");
  } else {
    throw ConfigError("goal.steps: unknown kind '" + kind + "'");
  }
  if (j.contains("prerequisite")) p.prerequisite = j.at("prerequisite").get<int>();
  return p;
}

std::vector<SkillProfile> parse_profiles(const nlohmann::json& arr, int n_agents) {
  std::vector<SkillProfile> out;
  for (const auto& entry : arr) {
    SkillProfile p;
    for (const auto& [key, value] : entry.items()) {
      Subtask k;
      if (!subtask_from_name(key, k))
        throw ConfigError("agents.profiles: unknown subtask '" + key + "'");
      p.set(k, value.get<double>());
    }
    out.push_back(p);
  }
  if (static_cast<int>(out.size()) != n_agents)
    throw ConfigError("agents.profiles: entry count must equal agents.count");
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(
      j, {"layout", "agents", "energy", "goal", "fairness", "learner", "observation", "schedule"},
      "config");

  ExperimentConfig cfg;

  const nlohmann::json agents = j.contains("agents") ? j.at("agents") : nlohmann::json::object();
  reject_unknown_keys(agents, {"count", "composition", "profiles"}, "agents");
  const int n_agents = get_or<int>(agents, "count", 3);
  if (n_agents < 1) throw ConfigError("agents.count must be >= 1");

  cfg.world = parse_layout(j.contains("layout") ? j.at("layout") : nlohmann::json(), n_agents);
  cfg.world.energy = parse_energy(j.contains("energy") ? j.at("energy") : nlohmann::json());

  if (agents.contains("profiles")) {
    cfg.composition = "explicit";
    cfg.profiles = parse_profiles(agents.at("profiles"), n_agents);
    if (agents.contains("composition"))
      throw ConfigError("agents: give either composition or profiles, not both");
  } else {
    cfg.composition = get_or<std::string>(agents, "composition", "uniform");
    TeamComposition kind;
    if (!composition_from_name(cfg.composition, kind))
      throw ConfigError("agents.composition: unknown value '" + cfg.composition + "'");
    cfg.profiles = team_from_composition(kind, n_agents);
  }

  const nlohmann::json goal = j.contains("goal") ? j.at("goal") : nlohmann::json::object();
  reject_unknown_keys(goal, {"name", "steps", "n_compressions", "max_episode_ticks"}, "goal");
  const int n_comp = get_or<int>(goal, "n_compressions", 2);
  const int max_ticks = get_or<int>(goal, "max_episode_ticks", 50);
  if (n_comp < 1) throw ConfigError("goal.n_compressions must be >= 1");
  if (max_ticks < 1) throw ConfigError("goal.max_episode_ticks must be >= 1");
  cfg.goal_name = get_or<std::string>(goal, "name", "cpr");
  if (goal.contains("steps")) {
    cfg.goal_name = get_or<std::string>(goal, "name", "custom");
    cfg.goal.name = cfg.goal_name;
    cfg.goal.n_compressions = n_comp;
    cfg.goal.max_episode_ticks = max_ticks;
    for (const auto& s : goal.at("steps")) cfg.goal.steps.push_back(parse_step(s, cfg.world));
    if (cfg.goal.steps.empty()) throw ConfigError("goal.steps must not be empty");
  } else if (cfg.goal_name == "cpr") {
    cfg.goal = cpr_goal(cfg.world, n_comp, max_ticks);
  } else if (cfg.goal_name == "rescue_breaths") {
    cfg.goal = rescue_breaths_goal(cfg.world, n_comp, max_ticks);
  } else {
    throw ConfigError("goal.name: unknown goal '" + cfg.goal_name + "'");
  }
  cfg.world.compressions_target = n_comp;

  const nlohmann::json fair = j.contains("fairness") ? j.at("fairness") : nlohmann::json::object();
  reject_unknown_keys(fair, {"mode", "alpha", "lambda"}, "fairness");
  const std::string mode = get_or<std::string>(fair, "mode", "fairskill");
  if (!fairness_mode_from_name(mode, cfg.fairness))
    throw ConfigError("fairness.mode: unknown value '" + mode + "'");
  cfg.alpha = get_or<double>(fair, "alpha", 0.7);
  cfg.lambda = get_or<double>(fair, "lambda", 1.0);
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0) throw ConfigError("fairness.alpha must be in [0, 1]");
  if (cfg.lambda < 0.0) throw ConfigError("fairness.lambda must be >= 0");

  const nlohmann::json learner = j.contains("learner") ? j.at("learner") : nlohmann::json::object();
  reject_unknown_keys(learner,
                      {"algo", "lr", "gamma", "batch_size", "target_update", "hidden",
                       "mixing_embed", "eps_start", "eps_final", "eps_decay_fraction",
                       "eval_epsilon", "replay_capacity", "learn_start", "train_freq",
                       "gae_lambda", "clip", "entropy_coef", "value_coef", "epochs", "minibatch",
                       "rollout_steps", "target_tau", "standardize_rewards"},
                      "learner");
  const std::string algo = get_or<std::string>(learner, "algo", "iql");
  if (!algo_from_name(algo, cfg.algo)) throw ConfigError("learner.algo: unknown value '" + algo + "'");

  const nlohmann::json sched = j.contains("schedule") ? j.at("schedule") : nlohmann::json::object();
  reject_unknown_keys(sched, {"total_steps", "eval_interval", "eval_episodes", "seeds"},
                      "schedule");
  cfg.total_steps = get_or<long>(sched, "total_steps", 50000);
  cfg.eval_interval = get_or<long>(sched, "eval_interval", 10000);
  cfg.eval_episodes = get_or<int>(sched, "eval_episodes", 100);
  cfg.seeds = get_or<std::vector<std::uint64_t>>(sched, "seeds", {0, 1, 2, 3});
  if (cfg.total_steps < 1) throw ConfigError("schedule.total_steps must be >= 1");
  if (cfg.eval_interval < 1) throw ConfigError("schedule.eval_interval must be >= 1");
  if (cfg.eval_episodes < 1) throw ConfigError("schedule.eval_episodes must be >= 1");
  if (cfg.seeds.empty()) throw ConfigError("schedule.seeds must not be empty");

  cfg.value_hyper = default_value_hyper(cfg.algo);
  cfg.value_hyper.gamma = get_or<double>(learner, "gamma", 0.99);
  cfg.value_hyper.lr = get_or<double>(learner, "lr", cfg.value_hyper.lr);
  cfg.value_hyper.batch_size = get_or<int>(learner, "batch_size", cfg.value_hyper.batch_size);
  cfg.value_hyper.target_update = get_or<int>(learner, "target_update", cfg.value_hyper.target_update);
  cfg.value_hyper.hidden = get_or<int>(learner, "hidden", 64);
  cfg.value_hyper.mixing_embed = get_or<int>(learner, "mixing_embed", 32);
  cfg.value_hyper.eps_start = get_or<double>(learner, "eps_start", 1.0);
  cfg.value_hyper.eps_final = get_or<double>(learner, "eps_final", 0.05);
  const double decay_fraction = get_or<double>(learner, "eps_decay_fraction", 0.1);
  cfg.value_hyper.eps_decay_steps =
      std::max<long>(1, static_cast<long>(decay_fraction * static_cast<double>(cfg.total_steps)));
  cfg.value_hyper.eval_epsilon =
      get_or<double>(learner, "eval_epsilon", cfg.value_hyper.eval_epsilon);
  cfg.value_hyper.replay_capacity = get_or<int>(learner, "replay_capacity", 50000);
  cfg.value_hyper.learn_start = get_or<int>(learner, "learn_start", 500);
  cfg.value_hyper.train_freq = get_or<int>(learner, "train_freq", 1);

  cfg.mappo_hyper.lr = get_or<double>(learner, "lr", 0.002);
  cfg.mappo_hyper.gamma = get_or<double>(learner, "gamma", 0.99);
  cfg.mappo_hyper.gae_lambda = get_or<double>(learner, "gae_lambda", 0.95);
  cfg.mappo_hyper.clip = get_or<double>(learner, "clip", 0.2);
  cfg.mappo_hyper.entropy_coef = get_or<double>(learner, "entropy_coef", 0.01);
  cfg.mappo_hyper.value_coef = get_or<double>(learner, "value_coef", 0.5);
  cfg.mappo_hyper.epochs = get_or<int>(learner, "epochs", 4);
  cfg.mappo_hyper.minibatch = get_or<int>(learner, "minibatch", 64);
  cfg.mappo_hyper.rollout_steps = get_or<int>(learner, "rollout_steps", 512);
  cfg.mappo_hyper.target_tau = get_or<double>(learner, "target_tau", 0.05);
  cfg.mappo_hyper.standardize_rewards = get_or<bool>(learner, "standardize_rewards", true);
  cfg.mappo_hyper.hidden = get_or<int>(learner, "hidden", 64);

  const nlohmann::json obs = j.contains("observation") ? j.at("observation") : nlohmann::json::object();
  reject_unknown_keys(obs, {"mask_other_agents"}, "observation");
  cfg.mask_other_agents = get_or<bool>(obs, "mask_other_agents", false);

  // Every subtask the goal references must be defined for every agent. Profile
  // entries default to expert, so this only rejects out-of-range levels, which
  // SkillProfile::set already did. Validate goal/profile agreement shape-wise.
  heuristic(cfg.world, initial_state(cfg.world), cfg.goal);  // validates the step DAG
  check_state(cfg.world, initial_state(cfg.world));
  return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig default_config() { return config_from_json(nlohmann::json::object()); }

nlohmann::json ExperimentConfig::resolved_json() const {
  nlohmann::json layout;
  layout["stations"] = world.stations;
  nlohmann::json items = nlohmann::json::array();
  for (StationId st = 0; st < world.n_stations(); ++st)
    for (ItemId id : world.initial_stacks[st])
      items.push_back({{"name", world.items[id].name},
                       {"station", world.stations[st]},
                       {"movable", world.items[id].movable},
                       {"can_stack_under", world.items[id].can_stack_under}});
  layout["items"] = items;
  nlohmann::json starts = nlohmann::json::array();
  for (StationId st : world.agent_start) starts.push_back(world.stations[st]);
  layout["agent_start"] = starts;
  nlohmann::json treat = nlohmann::json::array();
  for (StationId st : world.treatment_stations) treat.push_back(world.stations[st]);
  layout["treatment_stations"] = treat;

  nlohmann::json profiles = nlohmann::json::array();
  for (const auto& p : profiles_as_json()) profiles.push_back(p);

  nlohmann::json cost;
  for (std::size_t k = 0; k < kNumSubtasks; ++k)
    cost[subtask_name(static_cast<Subtask>(k))] = world.energy.cost[k];

  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : goal.steps) {
    nlohmann::json step;
    switch (s.kind) {
      case PredicateKind::ItemUnderPatient:
        step["kind"] = "item_under_patient";
        step["item"] = world.items[s.item].name;
        break;
      case PredicateKind::ItemOnPatient:
        step["kind"] = "item_on_patient";
        step["item"] = world.items[s.item].name;
        break;
      case PredicateKind::CompressionsAtLeast:
        step["kind"] = "compressions_at_least";
        step["count"] = s.count;
        break;
      case PredicateKind::PatientFlag:
        step["kind"] = "patient_flag";
        switch (s.flag) {
          case PatientFlagKind::ChestCompressed: step["flag"] = "chest_compressed"; break;
          case PatientFlagKind::RescueBreathed: step["flag"] = "rescue_breathed"; break;
          case PatientFlagKind::Shocked: step["flag"] = "shocked"; break;
          case PatientFlagKind::Medicated: step["flag"] = "medicated"; break;
        }
        break;
    }
    if (s.prerequisite) step["prerequisite"] = *s.prerequisite;
    steps.push_back(step);
  }

  nlohmann::json learner{{"algo", algo_name(algo)}};
  if (algo == Algo::Mappo) {
    const auto h = mappo_hyper.to_json();
    learner.update(h);
  } else {
    const auto h = value_hyper.to_json();
    learner.update(h);
  }

  return nlohmann::json{
      {"layout", layout},
      {"agents",
       {{"count", world.n_agents()}, {"composition", composition}, {"profiles", profiles}}},
      {"energy",
       {{"enabled", world.energy.enabled},
        {"cost", cost},
        {"recharge_rate", world.energy.recharge_rate},
        {"e_max", world.energy.e_max}}},
      {"goal",
       {{"name", goal_name},
        {"n_compressions", goal.n_compressions},
        {"max_episode_ticks", goal.max_episode_ticks},
        {"steps", steps}}},
      {"fairness",
       {{"mode", fairness_mode_name(fairness)}, {"alpha", alpha}, {"lambda", lambda}}},
      {"learner", learner},
      {"observation", {{"mask_other_agents", mask_other_agents}}},
      {"schedule",
       {{"total_steps", total_steps},
        {"eval_interval", eval_interval},
        {"eval_episodes", eval_episodes},
        {"seeds", seeds}}}};
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string dump = cfg.resolved_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return buf;
}

}  // namespace hospmarl
