#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

#include "hospmarl/learn/common.hpp"
#include "hospmarl/learn/net.hpp"
#include "hospmarl/learn/replay.hpp"

namespace hospmarl {

struct ValueHyper {
  double lr = 5e-4;
  double gamma = 0.99;
  int batch_size = 32;
  int target_update = 20;  // hard sync period, in gradient updates
  int hidden = 64;
  int mixing_embed = 32;   // QMIX mixer width
  double eps_start = 1.0;
  double eps_final = 0.05;
  long eps_decay_steps = 1;  // env steps to anneal over (10% of budget)
  double eval_epsilon = 0.0;
  int replay_capacity = 50000;
  int learn_start = 500;  // env steps before gradient updates begin
  int train_freq = 1;     // env steps between gradient updates

  nlohmann::json to_json() const;
  static ValueHyper from_json(const nlohmann::json& j);
};

ValueHyper default_value_hyper(Algo algo);

// Shared-parameter Q-learner covering independent heads (per-agent TD),
// additive decomposition (team TD on the sum) and monotonic mixing (team TD
// through a state-conditioned mixer). One network serves every agent with a
// one-hot agent id appended to the observation.
class ValueLearner {
 public:
  ValueLearner(Algo algo, int n_agents, int obs_dim, int n_actions, ValueHyper hyper,
               std::uint64_t seed);

  Algo algo() const { return algo_; }
  const ValueHyper& hyper() const { return hyper_; }
  long env_steps() const { return env_steps_; }
  long updates() const { return updates_; }
  double epsilon() const;

  // Training-mode selection uses the internal RNG and the epsilon schedule;
  // eval-mode uses the caller's RNG and the evaluation epsilon. Masks are
  // [agent][action]; an illegal action is never returned.
  std::vector<int> select_actions(const std::vector<std::uint8_t>& joint_obs,
                                  const std::vector<std::uint8_t>& masks, bool eval,
                                  std::mt19937_64* eval_rng = nullptr);

  void note_env_step() { env_steps_ += 1; }
  bool ready_to_update(int buffer_size) const;

  // One gradient step on a uniform batch. Returns the TD loss. Throws
  // NanDetectedError when the loss or parameters stop being finite and
  // MonotonicityViolationError when a QMIX probe fails.
  double update(const ReplayBuffer& buffer);

  // dQtot moved by bumping one agent's Q input; used by the probe and tests.
  double mixer_total(const std::vector<double>& agent_q, const std::vector<double>& state) const;

  const Mlp& q_net() const { return q_; }
  const Mlp& q_target() const { return q_target_; }

  nlohmann::json to_json() const;
  static ValueLearner from_json(const nlohmann::json& j);

 private:
  std::vector<double> features(const std::uint8_t* joint_obs) const;  // [n, obs+n]
  std::vector<double> state_features(const std::uint8_t* joint_obs) const;
  void hard_sync();

  Algo algo_;
  int n_agents_, obs_dim_, n_actions_;
  ValueHyper hyper_;
  Mlp q_, q_target_;
  AdamState opt_;
  // mixer (Qmix only): hypernetworks generating non-negative mixing weights
  Mlp hyper_w1_, hyper_b1_, hyper_w2_, hyper_b2_;
  Mlp hyper_w1_t_, hyper_b1_t_, hyper_w2_t_, hyper_b2_t_;
  AdamState opt_w1_, opt_b1_, opt_w2_, opt_b2_;
  long env_steps_ = 0;
  long updates_ = 0;
  std::mt19937_64 rng_;

  ValueLearner() = default;
};

}  // namespace hospmarl
