#include "hospmarl/learn/value_learner.hpp"

#include <cmath>

#include "hospmarl/errors.hpp"

namespace hospmarl {

nlohmann::json ValueHyper::to_json() const {
  return nlohmann::json{{"lr", lr},
                        {"gamma", gamma},
                        {"batch_size", batch_size},
                        {"target_update", target_update},
                        {"hidden", hidden},
                        {"mixing_embed", mixing_embed},
                        {"eps_start", eps_start},
                        {"eps_final", eps_final},
                        {"eps_decay_steps", eps_decay_steps},
                        {"eval_epsilon", eval_epsilon},
                        {"replay_capacity", replay_capacity},
                        {"learn_start", learn_start},
                        {"train_freq", train_freq}};
}

ValueHyper ValueHyper::from_json(const nlohmann::json& j) {
  ValueHyper h;
  h.lr = j.at("lr");
  h.gamma = j.at("gamma");
  h.batch_size = j.at("batch_size");
  h.target_update = j.at("target_update");
  h.hidden = j.at("hidden");
  h.mixing_embed = j.at("mixing_embed");
  h.eps_start = j.at("eps_start");
  h.eps_final = j.at("eps_final");
  h.eps_decay_steps = j.at("eps_decay_steps");
  h.eval_epsilon = j.at("eval_epsilon");
  h.replay_capacity = j.at("replay_capacity");
  h.learn_start = j.at("learn_start");
  h.train_freq = j.at("train_freq");
  return h;
}

ValueHyper default_value_hyper(Algo algo) {
  ValueHyper h;
  switch (algo) {
    case Algo::Iql:
      h.lr = 0.0005;
      h.target_update = 20;
      h.eval_epsilon = 0.0;
      break;
    case Algo::Vdn:
      h.lr = 0.001;
      h.target_update = 25;
      h.eval_epsilon = 0.0;
      break;
    case Algo::Qmix:
      h.lr = 0.001;
      h.target_update = 25;
      h.eval_epsilon = 0.1;
      break;
    case Algo::Mappo: break;
  }
  return h;
}

namespace {
inline double elu(double x) { return x > 0.0 ? x : std::expm1(x); }
inline double elu_prime(double x) { return x > 0.0 ? 1.0 : std::exp(x); }
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace

ValueLearner::ValueLearner(Algo algo, int n_agents, int obs_dim, int n_actions, ValueHyper hyper,
                           std::uint64_t seed)
    : algo_(algo),
      n_agents_(n_agents),
      obs_dim_(obs_dim),
      n_actions_(n_actions),
      hyper_(hyper),
      rng_(seed) {
  const int in = obs_dim_ + n_agents_;
  q_ = Mlp({in, hyper_.hidden, n_actions_}, rng_);
  q_target_ = q_;
  opt_ = AdamState::like(q_);
  if (algo_ == Algo::Qmix) {
    const int d = n_agents_ * obs_dim_;
    const int m = hyper_.mixing_embed;
    hyper_w1_ = Mlp({d, n_agents_ * m}, rng_);
    hyper_b1_ = Mlp({d, m}, rng_);
    hyper_w2_ = Mlp({d, m}, rng_);
    hyper_b2_ = Mlp({d, 1}, rng_);
    hyper_w1_t_ = hyper_w1_;
    hyper_b1_t_ = hyper_b1_;
    hyper_w2_t_ = hyper_w2_;
    hyper_b2_t_ = hyper_b2_;
    opt_w1_ = AdamState::like(hyper_w1_);
    opt_b1_ = AdamState::like(hyper_b1_);
    opt_w2_ = AdamState::like(hyper_w2_);
    opt_b2_ = AdamState::like(hyper_b2_);
  }
}

double ValueLearner::epsilon() const {
  const double frac =
      std::min(1.0, static_cast<double>(env_steps_) /
                        static_cast<double>(std::max<long>(1, hyper_.eps_decay_steps)));
  return hyper_.eps_start + (hyper_.eps_final - hyper_.eps_start) * frac;
}

std::vector<double> ValueLearner::features(const std::uint8_t* joint_obs) const {
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

std::vector<double> ValueLearner::state_features(const std::uint8_t* joint_obs) const {
  const int d = n_agents_ * obs_dim_;
  std::vector<double> s(d);
  for (int i = 0; i < d; ++i) s[i] = joint_obs[i];
  return s;
}

std::vector<int> ValueLearner::select_actions(const std::vector<std::uint8_t>& joint_obs,
                                              const std::vector<std::uint8_t>& masks, bool eval,
                                              std::mt19937_64* eval_rng) {
  const auto x = features(joint_obs.data());
  const auto q = q_.forward(x, n_agents_);
  const double eps = eval ? hyper_.eval_epsilon : epsilon();
  std::mt19937_64& rng = eval ? *eval_rng : rng_;
  std::uniform_real_distribution<double> u(0.0, 1.0);

  std::vector<int> actions(n_agents_);
  for (int a = 0; a < n_agents_; ++a) {
    const double* qa = q.data() + static_cast<std::size_t>(a) * n_actions_;
    const std::uint8_t* ma = masks.data() + static_cast<std::size_t>(a) * n_actions_;
    if (eps > 0.0 && u(rng) < eps) actions[a] = masked_uniform(ma, n_actions_, rng);
    else actions[a] = masked_argmax(qa, ma, n_actions_);
  }
  return actions;
}

bool ValueLearner::ready_to_update(int buffer_size) const {
  return buffer_size >= std::max(hyper_.batch_size, hyper_.learn_start) &&
         env_steps_ % std::max(1, hyper_.train_freq) == 0;
}

void ValueLearner::hard_sync() {
  q_target_ = q_;
  if (algo_ == Algo::Qmix) {
    hyper_w1_t_ = hyper_w1_;
    hyper_b1_t_ = hyper_b1_;
    hyper_w2_t_ = hyper_w2_;
    hyper_b2_t_ = hyper_b2_;
  }
}

double ValueLearner::mixer_total(const std::vector<double>& agent_q,
                                 const std::vector<double>& state) const {
  const int n = n_agents_, m = hyper_.mixing_embed;
  const auto p1 = hyper_w1_.forward(state, 1);
  const auto b1 = hyper_b1_.forward(state, 1);
  const auto p2 = hyper_w2_.forward(state, 1);
  const auto b2 = hyper_b2_.forward(state, 1);
  double qtot = b2[0];
  for (int k = 0; k < m; ++k) {
    double u = b1[k];
    for (int i = 0; i < n; ++i) u += std::abs(p1[k * n + i]) * agent_q[i];
    qtot += std::abs(p2[k]) * elu(u);
  }
  return qtot;
}

double ValueLearner::update(const ReplayBuffer& buffer) {
  const int B = hyper_.batch_size;
  const int n = n_agents_, A = n_actions_;
  const auto idx = buffer.sample_indices(B, rng_);

  const int in = obs_dim_ + n;
  std::vector<double> x(static_cast<std::size_t>(B) * n * in);
  std::vector<double> xn(static_cast<std::size_t>(B) * n * in);
  for (int b = 0; b < B; ++b) {
    const auto cur = features(buffer.obs(idx[b]));
    const auto nxt = features(buffer.next_obs(idx[b]));
    std::copy(cur.begin(), cur.end(), x.begin() + static_cast<std::size_t>(b) * n * in);
    std::copy(nxt.begin(), nxt.end(), xn.begin() + static_cast<std::size_t>(b) * n * in);
  }

  Mlp::Cache cache;
  const auto q_all = q_.forward(x, B * n, &cache);
  const auto q_next = q_target_.forward(xn, B * n);

  // Per-row chosen Q and per-row best legal next Q under the target net.
  std::vector<double> q_sel(static_cast<std::size_t>(B) * n);
  std::vector<double> q_next_max(static_cast<std::size_t>(B) * n);
  for (int b = 0; b < B; ++b) {
    const std::uint8_t* act = buffer.action(idx[b]);
    const std::uint8_t* nm = buffer.next_mask(idx[b]);
    for (int a = 0; a < n; ++a) {
      const std::size_t row = static_cast<std::size_t>(b) * n + a;
      q_sel[row] = q_all[row * A + act[a]];
      const int best = masked_argmax(q_next.data() + row * A, nm + static_cast<std::size_t>(a) * A, A);
      q_next_max[row] = q_next[row * A + best];
    }
  }

  std::vector<double> grad_out(static_cast<std::size_t>(B) * n * A, 0.0);
  double loss = 0.0;

  if (algo_ == Algo::Iql) {
    const double scale = 1.0 / static_cast<double>(B * n);
    for (int b = 0; b < B; ++b) {
      const double* r = buffer.agent_reward(idx[b]);
      const double cont = buffer.done(idx[b]) ? 0.0 : hyper_.gamma;
      for (int a = 0; a < n; ++a) {
        const std::size_t row = static_cast<std::size_t>(b) * n + a;
        const double y = r[a] + cont * q_next_max[row];
        const double e = q_sel[row] - y;
        loss += e * e * scale;
        grad_out[row * A + buffer.action(idx[b])[a]] = 2.0 * e * scale;
      }
    }
  } else if (algo_ == Algo::Vdn) {
    const double scale = 1.0 / static_cast<double>(B);
    for (int b = 0; b < B; ++b) {
      const double cont = buffer.done(idx[b]) ? 0.0 : hyper_.gamma;
      double tot = 0.0, tot_next = 0.0;
      for (int a = 0; a < n; ++a) {
        const std::size_t row = static_cast<std::size_t>(b) * n + a;
        tot += q_sel[row];
        tot_next += q_next_max[row];
      }
      const double y = buffer.team_reward(idx[b]) + cont * tot_next;
      const double e = tot - y;
      loss += e * e * scale;
      for (int a = 0; a < n; ++a) {
        const std::size_t row = static_cast<std::size_t>(b) * n + a;
        grad_out[row * A + buffer.action(idx[b])[a]] = 2.0 * e * scale;
      }
    }
  } else {  // Qmix
    const int m = hyper_.mixing_embed;
    const int d = n * obs_dim_;
    std::vector<double> st(static_cast<std::size_t>(B) * d), stn(static_cast<std::size_t>(B) * d);
    for (int b = 0; b < B; ++b) {
      const auto s0 = state_features(buffer.obs(idx[b]));
      const auto s1 = state_features(buffer.next_obs(idx[b]));
      std::copy(s0.begin(), s0.end(), st.begin() + static_cast<std::size_t>(b) * d);
      std::copy(s1.begin(), s1.end(), stn.begin() + static_cast<std::size_t>(b) * d);
    }

    Mlp::Cache c_w1, c_b1, c_w2, c_b2;
    const auto p1 = hyper_w1_.forward(st, B, &c_w1);
    const auto pb1 = hyper_b1_.forward(st, B, &c_b1);
    const auto p2 = hyper_w2_.forward(st, B, &c_w2);
    const auto pb2 = hyper_b2_.forward(st, B, &c_b2);
    const auto tp1 = hyper_w1_t_.forward(stn, B);
    const auto tpb1 = hyper_b1_t_.forward(stn, B);
    const auto tp2 = hyper_w2_t_.forward(stn, B);
    const auto tpb2 = hyper_b2_t_.forward(stn, B);

    std::vector<double> u(static_cast<std::size_t>(B) * m);
    std::vector<double> qtot(B), qtot_next(B);
    for (int b = 0; b < B; ++b) {
      double acc = pb2[b];
      double acc_next = tpb2[b];
      for (int k = 0; k < m; ++k) {
        double uk = pb1[static_cast<std::size_t>(b) * m + k];
        double uk_next = tpb1[static_cast<std::size_t>(b) * m + k];
        for (int a = 0; a < n; ++a) {
          const std::size_t row = static_cast<std::size_t>(b) * n + a;
          uk += std::abs(p1[static_cast<std::size_t>(b) * n * m + k * n + a]) * q_sel[row];
          uk_next +=
              std::abs(tp1[static_cast<std::size_t>(b) * n * m + k * n + a]) * q_next_max[row];
        }
        u[static_cast<std::size_t>(b) * m + k] = uk;
        acc += std::abs(p2[static_cast<std::size_t>(b) * m + k]) * elu(uk);
        acc_next += std::abs(tp2[static_cast<std::size_t>(b) * m + k]) * elu(uk_next);
      }
      qtot[b] = acc;
      qtot_next[b] = acc_next;
    }

    const double scale = 1.0 / static_cast<double>(B);
    std::vector<double> g_p1(p1.size(), 0.0), g_pb1(pb1.size(), 0.0), g_p2(p2.size(), 0.0),
        g_pb2(pb2.size(), 0.0);
    for (int b = 0; b < B; ++b) {
      const double cont = buffer.done(idx[b]) ? 0.0 : hyper_.gamma;
      const double y = buffer.team_reward(idx[b]) + cont * qtot_next[b];
      const double e = qtot[b] - y;
      loss += e * e * scale;
      const double g = 2.0 * e * scale;
      g_pb2[b] = g;
      for (int k = 0; k < m; ++k) {
        const std::size_t bk = static_cast<std::size_t>(b) * m + k;
        const double w2k = std::abs(p2[bk]);
        g_p2[bk] = g * elu(u[bk]) * sign(p2[bk]);
        const double du = g * w2k * elu_prime(u[bk]);
        g_pb1[bk] = du;
        for (int a = 0; a < n; ++a) {
          const std::size_t row = static_cast<std::size_t>(b) * n + a;
          const std::size_t pk = static_cast<std::size_t>(b) * n * m + k * n + a;
          g_p1[pk] = du * q_sel[row] * sign(p1[pk]);
          grad_out[row * A + buffer.action(idx[b])[a]] += du * std::abs(p1[pk]);
        }
      }
    }

    auto g_w1 = hyper_w1_.zero_grad();
    auto g_b1 = hyper_b1_.zero_grad();
    auto g_w2 = hyper_w2_.zero_grad();
    auto g_b2 = hyper_b2_.zero_grad();
    hyper_w1_.backward(c_w1, g_p1, g_w1);
    hyper_b1_.backward(c_b1, g_pb1, g_b1);
    hyper_w2_.backward(c_w2, g_p2, g_w2);
    hyper_b2_.backward(c_b2, g_pb2, g_b2);
    opt_w1_.step(hyper_w1_, g_w1, hyper_.lr);
    opt_b1_.step(hyper_b1_, g_b1, hyper_.lr);
    opt_w2_.step(hyper_w2_, g_w2, hyper_.lr);
    opt_b2_.step(hyper_b2_, g_b2, hyper_.lr);

    // Random finite-difference probe: raising any agent's utility must not
    // lower the mixed total.
    {
      std::uniform_int_distribution<int> pick_b(0, B - 1), pick_a(0, n - 1);
      const int b = pick_b(rng_), a = pick_a(rng_);
      std::vector<double> qv(n), sv(d);
      for (int i = 0; i < n; ++i) qv[i] = q_sel[static_cast<std::size_t>(b) * n + i];
      for (int i = 0; i < d; ++i) sv[i] = st[static_cast<std::size_t>(b) * d + i];
      const double before = mixer_total(qv, sv);
      qv[a] += 0.5;
      const double after = mixer_total(qv, sv);
      if ((after - before) / 0.5 < -1e-6)
        throw MonotonicityViolationError("mixer probe: dQtot/dQ_" + std::to_string(a) + " = " +
                                         std::to_string((after - before) / 0.5));
    }
  }

  auto g = q_.zero_grad();
  q_.backward(cache, grad_out, g);
  opt_.step(q_, g, hyper_.lr);

  if (!std::isfinite(loss)) throw NanDetectedError("value update: non-finite TD loss");
  updates_ += 1;
  if (hyper_.target_update > 0 && updates_ % hyper_.target_update == 0) {
    if (!q_.finite()) throw NanDetectedError("value update: non-finite parameters");
    hard_sync();
  }
  return loss;
}

nlohmann::json ValueLearner::to_json() const {
  nlohmann::json j{{"algo", algo_name(algo_)},
                   {"n_agents", n_agents_},
                   {"obs_dim", obs_dim_},
                   {"n_actions", n_actions_},
                   {"hyper", hyper_.to_json()},
                   {"q", q_.to_json()},
                   {"q_target", q_target_.to_json()},
                   {"opt", opt_.to_json()},
                   {"env_steps", env_steps_},
                   {"updates", updates_},
                   {"rng", rng_to_string(rng_)}};
  if (algo_ == Algo::Qmix) {
    j["hyper_w1"] = hyper_w1_.to_json();
    j["hyper_b1"] = hyper_b1_.to_json();
    j["hyper_w2"] = hyper_w2_.to_json();
    j["hyper_b2"] = hyper_b2_.to_json();
    j["hyper_w1_t"] = hyper_w1_t_.to_json();
    j["hyper_b1_t"] = hyper_b1_t_.to_json();
    j["hyper_w2_t"] = hyper_w2_t_.to_json();
    j["hyper_b2_t"] = hyper_b2_t_.to_json();
    j["opt_w1"] = opt_w1_.to_json();
    j["opt_b1"] = opt_b1_.to_json();
    j["opt_w2"] = opt_w2_.to_json();
    j["opt_b2"] = opt_b2_.to_json();
  }
  return j;
}

ValueLearner ValueLearner::from_json(const nlohmann::json& j) {
  ValueLearner v;
  Algo algo;
  if (!algo_from_name(j.at("algo"), algo)) throw ConfigError("unknown algo in checkpoint");
  v.algo_ = algo;
  v.n_agents_ = j.at("n_agents");
  v.obs_dim_ = j.at("obs_dim");
  v.n_actions_ = j.at("n_actions");
  v.hyper_ = ValueHyper::from_json(j.at("hyper"));
  v.q_ = Mlp::from_json(j.at("q"));
  v.q_target_ = Mlp::from_json(j.at("q_target"));
  v.opt_ = AdamState::from_json(j.at("opt"));
  v.env_steps_ = j.at("env_steps");
  v.updates_ = j.at("updates");
  rng_from_string(v.rng_, j.at("rng"));
  if (algo == Algo::Qmix) {
    v.hyper_w1_ = Mlp::from_json(j.at("hyper_w1"));
    v.hyper_b1_ = Mlp::from_json(j.at("hyper_b1"));
    v.hyper_w2_ = Mlp::from_json(j.at("hyper_w2"));
    v.hyper_b2_ = Mlp::from_json(j.at("hyper_b2"));
    v.hyper_w1_t_ = Mlp::from_json(j.at("hyper_w1_t"));
    v.hyper_b1_t_ = Mlp::from_json(j.at("hyper_b1_t"));
    v.hyper_w2_t_ = Mlp::from_json(j.at("hyper_w2_t"));
    v.hyper_b2_t_ = Mlp::from_json(j.at("hyper_b2_t"));
    v.opt_w1_ = AdamState::from_json(j.at("opt_w1"));
    v.opt_b1_ = AdamState::from_json(j.at("opt_b1"));
    v.opt_w2_ = AdamState::from_json(j.at("opt_w2"));
    v.opt_b2_ = AdamState::from_json(j.at("opt_b2"));
  }
  return v;
}

}  // namespace hospmarl
