#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hospmarl {

enum class Algo { Iql, Vdn, Qmix, Mappo };

const char* algo_name(Algo a);
bool algo_from_name(const std::string& name, Algo& out);

// Greedy index over the legal entries of q; ties break to the lowest index.
// Throws when the mask is empty (cannot happen: noop is always legal).
int masked_argmax(const double* q, const std::uint8_t* mask, int n);

// Uniform draw over legal entries.
int masked_uniform(const std::uint8_t* mask, int n, std::mt19937_64& rng);

// Stable log-softmax over the legal entries; illegal entries get -inf
// probability (logp set to a large negative constant, prob 0).
void masked_log_softmax(const double* logits, const std::uint8_t* mask, int n, double* logp,
                        double* prob);

// Categorical draw from a masked distribution.
int masked_sample(const double* prob, const std::uint8_t* mask, int n, std::mt19937_64& rng);

// Stream seeds: one master seed fans out into independent substreams.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream);

std::string rng_to_string(const std::mt19937_64& rng);
void rng_from_string(std::mt19937_64& rng, const std::string& text);

// Welford running mean/std used for reward standardization.
struct RunningMeanStd {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x);
  double stddev() const;
  double normalize(double x) const;  // (x - mean) / (std + 1e-8)
};

}  // namespace hospmarl
