#include "hospmarl/learn/replay.hpp"

#include <stdexcept>

namespace hospmarl {

ReplayBuffer::ReplayBuffer(int capacity, int n_agents, int obs_dim, int n_actions)
    : capacity_(capacity),
      n_agents_(n_agents),
      obs_dim_(obs_dim),
      n_actions_(n_actions),
      stride_obs_(static_cast<std::size_t>(n_agents) * obs_dim),
      stride_mask_(static_cast<std::size_t>(n_agents) * n_actions) {
  if (capacity <= 0) throw std::invalid_argument("replay capacity must be positive");
  obs_.resize(stride_obs_ * capacity);
  next_obs_.resize(stride_obs_ * capacity);
  next_mask_.resize(stride_mask_ * capacity);
  action_.resize(static_cast<std::size_t>(n_agents) * capacity);
  agent_reward_.resize(static_cast<std::size_t>(n_agents) * capacity);
  team_reward_.resize(capacity);
  done_.resize(capacity);
}

void ReplayBuffer::add(const std::vector<std::uint8_t>& joint_obs, const std::vector<int>& actions,
                       const std::vector<double>& agent_rewards, double team_reward,
                       const std::vector<std::uint8_t>& next_joint_obs,
                       const std::vector<std::uint8_t>& next_masks, bool done) {
  if (joint_obs.size() != stride_obs_ || next_joint_obs.size() != stride_obs_ ||
      next_masks.size() != stride_mask_ || static_cast<int>(actions.size()) != n_agents_ ||
      static_cast<int>(agent_rewards.size()) != n_agents_)
    throw std::invalid_argument("replay add: shape mismatch");

  const std::size_t at = static_cast<std::size_t>(head_);
  std::copy(joint_obs.begin(), joint_obs.end(), obs_.begin() + at * stride_obs_);
  std::copy(next_joint_obs.begin(), next_joint_obs.end(), next_obs_.begin() + at * stride_obs_);
  std::copy(next_masks.begin(), next_masks.end(), next_mask_.begin() + at * stride_mask_);
  for (int a = 0; a < n_agents_; ++a) {
    action_[at * n_agents_ + a] = static_cast<std::uint8_t>(actions[a]);
    agent_reward_[at * n_agents_ + a] = agent_rewards[a];
  }
  team_reward_[at] = team_reward;
  done_[at] = done ? 1 : 0;

  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) size_ += 1;
}

std::vector<int> ReplayBuffer::sample_indices(int batch, std::mt19937_64& rng) const {
  if (size_ == 0) throw std::logic_error("replay sample: buffer empty");
  std::uniform_int_distribution<int> pick(0, size_ - 1);
  std::vector<int> idx(batch);
  for (int& i : idx) i = pick(rng);
  return idx;
}

}  // namespace hospmarl
