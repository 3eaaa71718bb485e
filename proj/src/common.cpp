#include "hospmarl/learn/common.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hospmarl {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::Iql: return "iql";
    case Algo::Vdn: return "vdn";
    case Algo::Qmix: return "qmix";
    case Algo::Mappo: return "mappo";
  }
  return "?";
}

bool algo_from_name(const std::string& name, Algo& out) {
  if (name == "iql") out = Algo::Iql;
  else if (name == "vdn") out = Algo::Vdn;
  else if (name == "qmix") out = Algo::Qmix;
  else if (name == "mappo") out = Algo::Mappo;
  else return false;
  return true;
}

int masked_argmax(const double* q, const std::uint8_t* mask, int n) {
  int best = -1;
  for (int i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    if (best < 0 || q[i] > q[best]) best = i;
  }
  if (best < 0) throw std::logic_error("masked_argmax: no legal action");
  return best;
}

int masked_uniform(const std::uint8_t* mask, int n, std::mt19937_64& rng) {
  int count = 0;
  for (int i = 0; i < n; ++i) count += mask[i] ? 1 : 0;
  if (count == 0) throw std::logic_error("masked_uniform: no legal action");
  std::uniform_int_distribution<int> pick(0, count - 1);
  int k = pick(rng);
  for (int i = 0; i < n; ++i)
    if (mask[i] && k-- == 0) return i;
  return -1;  // unreachable
}

void masked_log_softmax(const double* logits, const std::uint8_t* mask, int n, double* logp,
                        double* prob) {
  constexpr double kNegInf = -1e30;
  double mx = kNegInf;
  for (int i = 0; i < n; ++i)
    if (mask[i] && logits[i] > mx) mx = logits[i];
  if (mx == kNegInf) throw std::logic_error("masked_log_softmax: no legal action");
  double z = 0.0;
  for (int i = 0; i < n; ++i)
    if (mask[i]) z += std::exp(logits[i] - mx);
  const double logz = std::log(z) + mx;
  for (int i = 0; i < n; ++i) {
    if (mask[i]) {
      logp[i] = logits[i] - logz;
      prob[i] = std::exp(logp[i]);
    } else {
      logp[i] = kNegInf;
      prob[i] = 0.0;
    }
  }
}

int masked_sample(const double* prob, const std::uint8_t* mask, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  int last_legal = -1;
  for (int i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    last_legal = i;
    r -= prob[i];
    if (r <= 0.0) return i;
  }
  if (last_legal < 0) throw std::logic_error("masked_sample: no legal action");
  return last_legal;  // numerical slack lands on the last legal entry
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 over the combined value
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string rng_to_string(const std::mt19937_64& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

void rng_from_string(std::mt19937_64& rng, const std::string& text) {
  std::istringstream is(text);
  is >> rng;
}

void RunningMeanStd::push(double x) {
  count += 1;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

double RunningMeanStd::stddev() const {
  if (count < 2) return 0.0;
  return std::sqrt(m2 / static_cast<double>(count));
}

double RunningMeanStd::normalize(double x) const { return (x - mean) / (stddev() + 1e-8); }

}  // namespace hospmarl
