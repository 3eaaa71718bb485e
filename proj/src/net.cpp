#include "hospmarl/learn/net.hpp"

#include <cmath>
#include <stdexcept>

namespace hospmarl {

Mlp::Mlp(std::vector<int> sizes, std::mt19937_64& rng) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least input and output sizes");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    std::vector<double> w(static_cast<std::size_t>(out) * in);
    for (double& v : w) v = u(rng);
    std::vector<double> b(out);
    for (double& v : b) v = u(rng);
    w_.push_back(std::move(w));
    b_.push_back(std::move(b));
  }
}

std::vector<double> Mlp::forward(const std::vector<double>& x, int batch, Cache* cache) const {
  if (static_cast<int>(x.size()) != batch * input_size())
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  if (cache) {
    cache->batch = batch;
    cache->acts.assign(1, x);
  }
  std::vector<double> cur = x;
  for (int l = 0; l < layer_count(); ++l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    const bool last = l + 1 == layer_count();
    std::vector<double> next(static_cast<std::size_t>(batch) * out);
    for (int bi = 0; bi < batch; ++bi) {
      const double* xi = cur.data() + static_cast<std::size_t>(bi) * in;
      double* yi = next.data() + static_cast<std::size_t>(bi) * out;
      for (int o = 0; o < out; ++o) {
        const double* wrow = w_[l].data() + static_cast<std::size_t>(o) * in;
        double acc = b_[l][o];
        for (int k = 0; k < in; ++k) acc += wrow[k] * xi[k];
        yi[o] = last ? acc : (acc > 0.0 ? acc : 0.0);
      }
    }
    cur = std::move(next);
    if (cache) cache->acts.push_back(cur);
  }
  return cur;
}

Mlp::Grad Mlp::zero_grad() const {
  Grad g;
  for (int l = 0; l < layer_count(); ++l) {
    g.w.emplace_back(w_[l].size(), 0.0);
    g.b.emplace_back(b_[l].size(), 0.0);
  }
  return g;
}

void Mlp::backward(const Cache& cache, const std::vector<double>& grad_out, Grad& g,
                   std::vector<double>* grad_in) const {
  const int batch = cache.batch;
  std::vector<double> delta = grad_out;  // dL/d(pre-activation output of layer l)
  for (int l = layer_count() - 1; l >= 0; --l) {
    const int in = sizes_[l], out = sizes_[l + 1];
    const auto& x = cache.acts[l];
    // ReLU derivative for hidden layers: the cached activation is already the
    // post-ReLU output, zero exactly where the unit was inactive.
    if (l + 1 != layer_count()) {
      const auto& act = cache.acts[l + 1];
      for (std::size_t i = 0; i < delta.size(); ++i)
        if (act[i] <= 0.0) delta[i] = 0.0;
    }
    for (int bi = 0; bi < batch; ++bi) {
      const double* xi = x.data() + static_cast<std::size_t>(bi) * in;
      const double* di = delta.data() + static_cast<std::size_t>(bi) * out;
      for (int o = 0; o < out; ++o) {
        const double d = di[o];
        if (d == 0.0) continue;
        double* gw = g.w[l].data() + static_cast<std::size_t>(o) * in;
        for (int k = 0; k < in; ++k) gw[k] += d * xi[k];
        g.b[l][o] += d;
      }
    }
    if (l > 0 || grad_in) {
      std::vector<double> prev(static_cast<std::size_t>(batch) * in, 0.0);
      for (int bi = 0; bi < batch; ++bi) {
        const double* di = delta.data() + static_cast<std::size_t>(bi) * out;
        double* pi = prev.data() + static_cast<std::size_t>(bi) * in;
        for (int o = 0; o < out; ++o) {
          const double d = di[o];
          if (d == 0.0) continue;
          const double* wrow = w_[l].data() + static_cast<std::size_t>(o) * in;
          for (int k = 0; k < in; ++k) pi[k] += d * wrow[k];
        }
      }
      if (l == 0 && grad_in) *grad_in = std::move(prev);
      else delta = std::move(prev);
    }
  }
}

double Mlp::squared_param_norm() const {
  double acc = 0.0;
  for (const auto& layer : w_)
    for (double v : layer) acc += v * v;
  for (const auto& layer : b_)
    for (double v : layer) acc += v * v;
  return acc;
}

bool Mlp::finite() const {
  for (const auto& layer : w_)
    for (double v : layer)
      if (!std::isfinite(v)) return false;
  for (const auto& layer : b_)
    for (double v : layer)
      if (!std::isfinite(v)) return false;
  return true;
}

nlohmann::json Mlp::to_json() const {
  return nlohmann::json{{"sizes", sizes_}, {"w", w_}, {"b", b_}};
}

Mlp Mlp::from_json(const nlohmann::json& j) {
  Mlp net;
  net.sizes_ = j.at("sizes").get<std::vector<int>>();
  net.w_ = j.at("w").get<std::vector<std::vector<double>>>();
  net.b_ = j.at("b").get<std::vector<std::vector<double>>>();
  return net;
}

AdamState AdamState::like(const Mlp& net) {
  AdamState s;
  for (const auto& layer : net.weights()) {
    s.mw.emplace_back(layer.size(), 0.0);
    s.vw.emplace_back(layer.size(), 0.0);
  }
  for (const auto& layer : net.biases()) {
    s.mb.emplace_back(layer.size(), 0.0);
    s.vb.emplace_back(layer.size(), 0.0);
  }
  return s;
}

namespace {
void adam_update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                 std::vector<double>& v, double lr, double b1, double b2, double eps, double bc1,
                 double bc2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
  }
}
}  // namespace

void AdamState::step(Mlp& net, const Mlp::Grad& g, double lr) {
  t += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (int l = 0; l < net.layer_count(); ++l) {
    adam_update(net.weights()[l], g.w[l], mw[l], vw[l], lr, beta1, beta2, eps, bc1, bc2);
    adam_update(net.biases()[l], g.b[l], mb[l], vb[l], lr, beta1, beta2, eps, bc1, bc2);
  }
}

nlohmann::json AdamState::to_json() const {
  return nlohmann::json{{"mw", mw}, {"vw", vw}, {"mb", mb}, {"vb", vb}, {"t", t}};
}

AdamState AdamState::from_json(const nlohmann::json& j) {
  AdamState s;
  s.mw = j.at("mw").get<std::vector<std::vector<double>>>();
  s.vw = j.at("vw").get<std::vector<std::vector<double>>>();
  s.mb = j.at("mb").get<std::vector<std::vector<double>>>();
  s.vb = j.at("vb").get<std::vector<std::vector<double>>>();
  s.t = j.at("t").get<long>();
  return s;
}

}  // namespace hospmarl
