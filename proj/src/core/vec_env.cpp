#include "sf/vec_env.hpp"

#include <algorithm>

#include "sf/errors.hpp"

namespace sf {

VecEnv::VecEnv(const EnvConfig& config, int num_envs, std::uint64_t base_seed)
    : base_seed_(base_seed) {
  if (num_envs < 1) throw ConfigError("VecEnv needs at least one environment");
  envs_.reserve(num_envs);
  for (int i = 0; i < num_envs; ++i) envs_.emplace_back(config);
  obs_size_ = envs_.front().observation_size();
  episode_index_.assign(num_envs, 0);
  obs_.assign(obs_size_ * num_envs, 0.0f);
  rewards_.assign(num_envs, 0.0);
  returns_.assign(num_envs, 0.0);
  dones_.assign(num_envs, 0);
  ended_.assign(num_envs, 0);
  pending_.resize(num_envs);
  reset_all();
}

std::uint64_t VecEnv::next_seed(int w) {
  return mix_seed(mix_seed(base_seed_, static_cast<std::uint64_t>(w)),
                  episode_index_[w]++);
}

void VecEnv::reset_all() {
  std::fill(episode_index_.begin(), episode_index_.end(), 0);
  for (int w = 0; w < size(); ++w) {
    envs_[w].reset_into(next_seed(w),
                        std::span<float>(obs_).subspan(w * obs_size_, obs_size_));
    returns_[w] = 0.0;
    dones_[w] = 0;
  }
  finished_.clear();
}

void VecEnv::step_worker(int w, int action) {
  Env& env = envs_[w];
  auto slot = std::span<float>(obs_).subspan(w * obs_size_, obs_size_);
  const StepOutcome o = env.step_into(action, slot);
  rewards_[w] = o.reward;
  returns_[w] += o.reward;
  dones_[w] = o.done ? 1 : 0;
  ended_[w] = dones_[w];
  if (o.done) {
    pending_[w] = EpisodeSummary{w,
                                 o.info.seed,
                                 o.info.display_score,
                                 o.info.fortress_deaths,
                                 o.info.ship_deaths,
                                 o.info.missiles_fired,
                                 returns_[w]};
    returns_[w] = 0.0;
    env.reset_into(next_seed(w), slot);
  }
}

void VecEnv::step(std::span<const int> actions) {
  if (static_cast<int>(actions.size()) != size()) {
    throw DomainError("VecEnv::step expects one action per worker");
  }
  const int n = size();
  // Validate up front so no worker throws inside the parallel region.
  for (int w = 0; w < n; ++w) {
    if (!is_valid_action(config().sim.game_version, actions[w])) {
      throw DomainError("invalid action id " + std::to_string(actions[w]) +
                        " for worker " + std::to_string(w));
    }
  }
#pragma omp parallel for schedule(static)
  for (int w = 0; w < n; ++w) step_worker(w, actions[w]);
  finished_.clear();
  for (int w = 0; w < n; ++w) {
    if (ended_[w]) finished_.push_back(pending_[w]);
  }
}

void VecEnv::step_serial(std::span<const int> actions) {
  if (static_cast<int>(actions.size()) != size()) {
    throw DomainError("VecEnv::step expects one action per worker");
  }
  finished_.clear();
  for (int w = 0; w < size(); ++w) {
    step_worker(w, actions[w]);
    if (ended_[w]) finished_.push_back(pending_[w]);
  }
}

}  // namespace sf
