#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

namespace hospmarl {

// Small fully-connected network, ReLU between layers, linear output. Batches
// are flat row-major [batch, dim] vectors. Backprop is hand-rolled; runs are
// deterministic for a fixed seed and build.
class Mlp {
 public:
  struct Cache {
    int batch = 0;
    // acts[0] is the input, acts[l] the post-activation output of layer l
    std::vector<std::vector<double>> acts;
  };

  struct Grad {
    std::vector<std::vector<double>> w, b;
  };

  Mlp() = default;
  Mlp(std::vector<int> sizes, std::mt19937_64& rng);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(w_.size()); }

  std::vector<double> forward(const std::vector<double>& x, int batch,
                              Cache* cache = nullptr) const;

  Grad zero_grad() const;
  // grad_out is dL/dy over the cached batch; parameter grads accumulate into
  // g; when grad_in is non-null it receives dL/dx.
  void backward(const Cache& cache, const std::vector<double>& grad_out, Grad& g,
                std::vector<double>* grad_in = nullptr) const;

  double squared_param_norm() const;
  bool finite() const;

  const std::vector<int>& sizes() const { return sizes_; }
  std::vector<std::vector<double>>& weights() { return w_; }
  std::vector<std::vector<double>>& biases() { return b_; }
  const std::vector<std::vector<double>>& weights() const { return w_; }
  const std::vector<std::vector<double>>& biases() const { return b_; }

  nlohmann::json to_json() const;
  static Mlp from_json(const nlohmann::json& j);

 private:
  std::vector<int> sizes_;
  std::vector<std::vector<double>> w_;  // per layer, row-major [out][in]
  std::vector<std::vector<double>> b_;
};

// Adam over one Mlp's parameters.
struct AdamState {
  std::vector<std::vector<double>> mw, vw, mb, vb;
  long t = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  static AdamState like(const Mlp& net);
  void step(Mlp& net, const Mlp::Grad& g, double lr);

  nlohmann::json to_json() const;
  static AdamState from_json(const nlohmann::json& j);
};

}  // namespace hospmarl
