#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hospmarl {

// Fixed-capacity FIFO transition store. Observations are the raw boolean
// encodings; feature conversion happens at batch-assembly time.
class ReplayBuffer {
 public:
  ReplayBuffer(int capacity, int n_agents, int obs_dim, int n_actions);

  void add(const std::vector<std::uint8_t>& joint_obs, const std::vector<int>& actions,
           const std::vector<double>& agent_rewards, double team_reward,
           const std::vector<std::uint8_t>& next_joint_obs,
           const std::vector<std::uint8_t>& next_masks, bool done);

  int size() const { return size_; }
  int capacity() const { return capacity_; }

  std::vector<int> sample_indices(int batch, std::mt19937_64& rng) const;

  const std::uint8_t* obs(int i) const { return obs_.data() + idx(i) * stride_obs_; }
  const std::uint8_t* next_obs(int i) const { return next_obs_.data() + idx(i) * stride_obs_; }
  const std::uint8_t* next_mask(int i) const { return next_mask_.data() + idx(i) * stride_mask_; }
  const std::uint8_t* action(int i) const { return action_.data() + idx(i) * n_agents_; }
  const double* agent_reward(int i) const { return agent_reward_.data() + idx(i) * n_agents_; }
  double team_reward(int i) const { return team_reward_[idx(i)]; }
  bool done(int i) const { return done_[idx(i)] != 0; }

 private:
  std::size_t idx(int i) const { return static_cast<std::size_t>(i); }

  int capacity_, n_agents_, obs_dim_, n_actions_;
  std::size_t stride_obs_, stride_mask_;
  int size_ = 0, head_ = 0;
  std::vector<std::uint8_t> obs_, next_obs_, next_mask_, action_, done_;
  std::vector<double> agent_reward_, team_reward_;
};

}  // namespace hospmarl
