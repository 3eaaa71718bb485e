#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

#include "hospmarl/learn/common.hpp"
#include "hospmarl/learn/net.hpp"

namespace hospmarl {

struct MappoHyper {
  double lr = 2e-3;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip = 0.2;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  int epochs = 4;
  int minibatch = 64;        // env-steps per minibatch
  int rollout_steps = 512;   // minimum steps before an update (whole episodes)
  double target_tau = 0.05;  // soft critic target coefficient
  bool standardize_rewards = true;
  int hidden = 64;

  nlohmann::json to_json() const;
  static MappoHyper from_json(const nlohmann::json& j);
};

// Inputs for the clipped-surrogate policy loss, shared between the learner
// and the gradient checks: rows are agent-steps.
struct PolicyBatch {
  int batch = 0;
  std::vector<double> inputs;      // [batch, actor input]
  std::vector<int> actions;
  std::vector<double> old_logp;
  std::vector<double> advantages;
  std::vector<std::uint8_t> masks;  // [batch, n_actions]
};

struct PolicyLossResult {
  double loss = 0.0;     // clipped surrogate minus entropy bonus (mean)
  double entropy = 0.0;  // mean policy entropy over the batch
  Mlp::Grad grad;
};

// Mean over the batch of -min(ratio * A, clip(ratio) * A) - entropy_coef * H,
// with the analytic gradient.
PolicyLossResult clipped_policy_loss(const Mlp& actor, const PolicyBatch& batch, double clip,
                                     double entropy_coef);

// On-policy actor-critic with a centralized state-value critic, PPO-style
// clipped updates, GAE and shared actor parameters (agent-id one-hot input).
class MappoLearner {
 public:
  MappoLearner(int n_agents, int obs_dim, int n_actions, MappoHyper hyper, std::uint64_t seed);

  const MappoHyper& hyper() const { return hyper_; }

  // Samples (train) or argmaxes (eval) per agent; fills logp for training.
  std::vector<int> select_actions(const std::vector<std::uint8_t>& joint_obs,
                                  const std::vector<std::uint8_t>& masks, bool eval,
                                  std::vector<double>* logp = nullptr,
                                  std::mt19937_64* eval_rng = nullptr);

  void add_step(const std::vector<std::uint8_t>& joint_obs, const std::vector<int>& actions,
                const std::vector<double>& logp, const std::vector<std::uint8_t>& masks,
                double team_reward, bool done);

  bool wants_update() const;
  // PPO epochs over the stored rollout; clears it. Returns the last policy
  // loss. Throws NanDetectedError on non-finite losses or parameters.
  double update();

  long updates() const { return updates_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const Mlp& critic_target() const { return critic_target_; }

  nlohmann::json to_json() const;
  static MappoLearner from_json(const nlohmann::json& j);

 private:
  std::vector<double> actor_features(const std::uint8_t* joint_obs) const;
  std::vector<double> state_features(const std::uint8_t* joint_obs) const;

  struct RolloutStep {
    std::vector<std::uint8_t> obs;
    std::vector<int> actions;
    std::vector<double> logp;
    std::vector<std::uint8_t> masks;
    double reward = 0.0;  // standardized team reward
    bool done = false;
  };

  int n_agents_, obs_dim_, n_actions_;
  MappoHyper hyper_;
  Mlp actor_, critic_, critic_target_;
  AdamState opt_actor_, opt_critic_;
  RunningMeanStd reward_norm_;
  std::vector<RolloutStep> rollout_;
  long updates_ = 0;
  std::mt19937_64 rng_;

  MappoLearner() = default;
};

}  // namespace hospmarl
