#include "hospmarl/learn/mappo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hospmarl/errors.hpp"

namespace hospmarl {

nlohmann::json MappoHyper::to_json() const {
  return nlohmann::json{{"lr", lr},
                        {"gamma", gamma},
                        {"gae_lambda", gae_lambda},
                        {"clip", clip},
                        {"entropy_coef", entropy_coef},
                        {"value_coef", value_coef},
                        {"epochs", epochs},
                        {"minibatch", minibatch},
                        {"rollout_steps", rollout_steps},
                        {"target_tau", target_tau},
                        {"standardize_rewards", standardize_rewards},
                        {"hidden", hidden}};
}

MappoHyper MappoHyper::from_json(const nlohmann::json& j) {
  MappoHyper h;
  h.lr = j.at("lr");
  h.gamma = j.at("gamma");
  h.gae_lambda = j.at("gae_lambda");
  h.clip = j.at("clip");
  h.entropy_coef = j.at("entropy_coef");
  h.value_coef = j.at("value_coef");
  h.epochs = j.at("epochs");
  h.minibatch = j.at("minibatch");
  h.rollout_steps = j.at("rollout_steps");
  h.target_tau = j.at("target_tau");
  h.standardize_rewards = j.at("standardize_rewards");
  h.hidden = j.at("hidden");
  return h;
}

PolicyLossResult clipped_policy_loss(const Mlp& actor, const PolicyBatch& batch, double clip,
                                     double entropy_coef) {
  const int B = batch.batch;
  const int A = actor.output_size();
  Mlp::Cache cache;
  const auto logits = actor.forward(batch.inputs, B, &cache);

  PolicyLossResult res;
  res.grad = actor.zero_grad();
  std::vector<double> grad_out(static_cast<std::size_t>(B) * A, 0.0);
  std::vector<double> logp(A), prob(A);
  const double scale = 1.0 / static_cast<double>(B);

  for (int b = 0; b < B; ++b) {
    const double* z = logits.data() + static_cast<std::size_t>(b) * A;
    const std::uint8_t* m = batch.masks.data() + static_cast<std::size_t>(b) * A;
    masked_log_softmax(z, m, A, logp.data(), prob.data());

    const int a = batch.actions[b];
    const double adv = batch.advantages[b];
    const double ratio = std::exp(logp[a] - batch.old_logp[b]);
    const double surr1 = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    const double surr2 = clipped * adv;
    const bool unclipped_active = surr1 <= surr2;

    double entropy = 0.0;
    for (int i = 0; i < A; ++i)
      if (m[i] && prob[i] > 0.0) entropy -= prob[i] * logp[i];

    res.loss += (-(unclipped_active ? surr1 : surr2) - entropy_coef * entropy) * scale;
    res.entropy += entropy * scale;

    double* g = grad_out.data() + static_cast<std::size_t>(b) * A;
    for (int i = 0; i < A; ++i) {
      if (!m[i]) continue;
      double gi = 0.0;
      if (unclipped_active) gi -= adv * ratio * ((i == a ? 1.0 : 0.0) - prob[i]);
      if (entropy_coef != 0.0 && prob[i] > 0.0)
        gi += entropy_coef * prob[i] * (logp[i] + entropy);
      g[i] = gi * scale;
    }
  }
  actor.backward(cache, grad_out, res.grad);
  return res;
}

MappoLearner::MappoLearner(int n_agents, int obs_dim, int n_actions, MappoHyper hyper,
                           std::uint64_t seed)
    : n_agents_(n_agents),
      obs_dim_(obs_dim),
      n_actions_(n_actions),
      hyper_(hyper),
      rng_(seed) {
  actor_ = Mlp({obs_dim_ + n_agents_, hyper_.hidden, n_actions_}, rng_);
  critic_ = Mlp({n_agents_ * obs_dim_, hyper_.hidden, 1}, rng_);
  critic_target_ = critic_;
  opt_actor_ = AdamState::like(actor_);
  opt_critic_ = AdamState::like(critic_);
}

std::vector<double> MappoLearner::actor_features(const std::uint8_t* joint_obs) const {
  const int in = obs_dim_ + n_agents_;
  std::vector<double> x(static_cast<std::size_t>(n_agents_) * in, 0.0);
  for (int a = 0; a < n_agents_; ++a) {
    double* row = x.data() + static_cast<std::size_t>(a) * in;
    const std::uint8_t* o = joint_obs + static_cast<std::size_t>(a) * obs_dim_;
    for (int i = 0; i < obs_dim_; ++i) row[i] = o[i];
    row[obs_dim_ + a] = 1.0;
  }
  return x;
}

std::vector<double> MappoLearner::state_features(const std::uint8_t* joint_obs) const {
  const int d = n_agents_ * obs_dim_;
  std::vector<double> s(d);
  for (int i = 0; i < d; ++i) s[i] = joint_obs[i];
  return s;
}

std::vector<int> MappoLearner::select_actions(const std::vector<std::uint8_t>& joint_obs,
                                              const std::vector<std::uint8_t>& masks, bool eval,
                                              std::vector<double>* logp_out,
                                              std::mt19937_64* eval_rng) {
  (void)eval_rng;  // eval selection is greedy and needs no draws
  const auto x = actor_features(joint_obs.data());
  const auto logits = actor_.forward(x, n_agents_);
  std::vector<int> actions(n_agents_);
  if (logp_out) logp_out->assign(n_agents_, 0.0);
  std::vector<double> logp(n_actions_), prob(n_actions_);

  for (int a = 0; a < n_agents_; ++a) {
    const double* z = logits.data() + static_cast<std::size_t>(a) * n_actions_;
    const std::uint8_t* m = masks.data() + static_cast<std::size_t>(a) * n_actions_;
    if (eval) {
      actions[a] = masked_argmax(z, m, n_actions_);
    } else {
      masked_log_softmax(z, m, n_actions_, logp.data(), prob.data());
      actions[a] = masked_sample(prob.data(), m, n_actions_, rng_);
      if (logp_out) (*logp_out)[a] = logp[actions[a]];
    }
  }
  return actions;
}

void MappoLearner::add_step(const std::vector<std::uint8_t>& joint_obs,
                            const std::vector<int>& actions, const std::vector<double>& logp,
                            const std::vector<std::uint8_t>& masks, double team_reward,
                            bool done) {
  double r = team_reward;
  if (hyper_.standardize_rewards) {
    reward_norm_.push(team_reward);
    r = reward_norm_.normalize(team_reward);
  }
  rollout_.push_back(RolloutStep{joint_obs, actions, logp, masks, r, done});
}

bool MappoLearner::wants_update() const {
  return static_cast<int>(rollout_.size()) >= hyper_.rollout_steps && !rollout_.empty() &&
         rollout_.back().done;
}

double MappoLearner::update() {
  const int T = static_cast<int>(rollout_.size());
  if (T == 0) return 0.0;
  const int d = n_agents_ * obs_dim_;

  // Values from the slow critic drive the advantage estimates.
  std::vector<double> states(static_cast<std::size_t>(T) * d);
  for (int t = 0; t < T; ++t) {
    const auto s = state_features(rollout_[t].obs.data());
    std::copy(s.begin(), s.end(), states.begin() + static_cast<std::size_t>(t) * d);
  }
  const auto values = critic_target_.forward(states, T);

  std::vector<double> adv(T), ret(T);
  double running = 0.0;
  for (int t = T - 1; t >= 0; --t) {
    const double not_done = rollout_[t].done ? 0.0 : 1.0;
    const double next_v = (t + 1 < T) ? values[t + 1] : 0.0;
    const double delta = rollout_[t].reward + hyper_.gamma * not_done * next_v - values[t];
    running = delta + hyper_.gamma * hyper_.gae_lambda * not_done * running;
    adv[t] = running;
    ret[t] = adv[t] + values[t];
  }

  double mean = 0.0, sq = 0.0;
  for (double v : adv) mean += v;
  mean /= T;
  for (double v : adv) sq += (v - mean) * (v - mean);
  const double stddev = std::sqrt(sq / T) + 1e-8;
  for (double& v : adv) v = (v - mean) / stddev;

  std::vector<int> order(T);
  std::iota(order.begin(), order.end(), 0);
  double last_policy_loss = 0.0;
  const int mb = std::max(1, hyper_.minibatch);

  for (int epoch = 0; epoch < hyper_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng_);
    for (int start = 0; start < T; start += mb) {
      const int count = std::min(mb, T - start);

      PolicyBatch batch;
      batch.batch = count * n_agents_;
      const int in = obs_dim_ + n_agents_;
      batch.inputs.resize(static_cast<std::size_t>(batch.batch) * in);
      batch.masks.resize(static_cast<std::size_t>(batch.batch) * n_actions_);
      batch.actions.resize(batch.batch);
      batch.old_logp.resize(batch.batch);
      batch.advantages.resize(batch.batch);
      for (int i = 0; i < count; ++i) {
        const RolloutStep& stp = rollout_[order[start + i]];
        const auto x = actor_features(stp.obs.data());
        std::copy(x.begin(), x.end(),
                  batch.inputs.begin() + static_cast<std::size_t>(i) * n_agents_ * in);
        std::copy(stp.masks.begin(), stp.masks.end(),
                  batch.masks.begin() + static_cast<std::size_t>(i) * n_agents_ * n_actions_);
        for (int a = 0; a < n_agents_; ++a) {
          const int row = i * n_agents_ + a;
          batch.actions[row] = stp.actions[a];
          batch.old_logp[row] = stp.logp[a];
          batch.advantages[row] = adv[order[start + i]];
        }
      }
      auto pol = clipped_policy_loss(actor_, batch, hyper_.clip, hyper_.entropy_coef);
      if (!std::isfinite(pol.loss)) throw NanDetectedError("policy update: non-finite loss");
      opt_actor_.step(actor_, pol.grad, hyper_.lr);
      last_policy_loss = pol.loss;

      std::vector<double> cs(static_cast<std::size_t>(count) * d);
      std::vector<double> target(count);
      for (int i = 0; i < count; ++i) {
        std::copy(states.begin() + static_cast<std::size_t>(order[start + i]) * d,
                  states.begin() + static_cast<std::size_t>(order[start + i] + 1) * d,
                  cs.begin() + static_cast<std::size_t>(i) * d);
        target[i] = ret[order[start + i]];
      }
      Mlp::Cache vc;
      const auto v = critic_.forward(cs, count, &vc);
      std::vector<double> vgrad(count);
      double vloss = 0.0;
      for (int i = 0; i < count; ++i) {
        const double e = v[i] - target[i];
        vloss += hyper_.value_coef * e * e / count;
        vgrad[i] = hyper_.value_coef * 2.0 * e / count;
      }
      if (!std::isfinite(vloss)) throw NanDetectedError("critic update: non-finite loss");
      auto gc = critic_.zero_grad();
      critic_.backward(vc, vgrad, gc);
      opt_critic_.step(critic_, gc, hyper_.lr);
    }
  }

  // Polyak step of the slow critic towards the online one.
  for (int l = 0; l < critic_.layer_count(); ++l) {
    auto& wt = critic_target_.weights()[l];
    auto& bt = critic_target_.biases()[l];
    const auto& w = critic_.weights()[l];
    const auto& b = critic_.biases()[l];
    for (std::size_t i = 0; i < wt.size(); ++i)
      wt[i] = hyper_.target_tau * w[i] + (1.0 - hyper_.target_tau) * wt[i];
    for (std::size_t i = 0; i < bt.size(); ++i)
      bt[i] = hyper_.target_tau * b[i] + (1.0 - hyper_.target_tau) * bt[i];
  }

  if (!actor_.finite() || !critic_.finite())
    throw NanDetectedError("mappo update: non-finite parameters");
  rollout_.clear();
  updates_ += 1;
  return last_policy_loss;
}

nlohmann::json MappoLearner::to_json() const {
  return nlohmann::json{{"algo", "mappo"},
                        {"n_agents", n_agents_},
                        {"obs_dim", obs_dim_},
                        {"n_actions", n_actions_},
                        {"hyper", hyper_.to_json()},
                        {"actor", actor_.to_json()},
                        {"critic", critic_.to_json()},
                        {"critic_target", critic_target_.to_json()},
                        {"opt_actor", opt_actor_.to_json()},
                        {"opt_critic", opt_critic_.to_json()},
                        {"reward_norm",
                         {{"count", reward_norm_.count},
                          {"mean", reward_norm_.mean},
                          {"m2", reward_norm_.m2}}},
                        {"updates", updates_},
                        {"rng", rng_to_string(rng_)}};
}

MappoLearner MappoLearner::from_json(const nlohmann::json& j) {
  MappoLearner m;
  m.n_agents_ = j.at("n_agents");
  m.obs_dim_ = j.at("obs_dim");
  m.n_actions_ = j.at("n_actions");
  m.hyper_ = MappoHyper::from_json(j.at("hyper"));
  m.actor_ = Mlp::from_json(j.at("actor"));
  m.critic_ = Mlp::from_json(j.at("critic"));
  m.critic_target_ = Mlp::from_json(j.at("critic_target"));
  m.opt_actor_ = AdamState::from_json(j.at("opt_actor"));
  m.opt_critic_ = AdamState::from_json(j.at("opt_critic"));
  m.reward_norm_.count = j.at("reward_norm").at("count");
  m.reward_norm_.mean = j.at("reward_norm").at("mean");
  m.reward_norm_.m2 = j.at("reward_norm").at("m2");
  m.updates_ = j.at("updates");
  rng_from_string(m.rng_, j.at("rng"));
  return m;
}

}  // namespace hospmarl
