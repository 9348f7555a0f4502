#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sf/env.hpp"

namespace sf {

// Final statistics of an episode that ended inside VecEnv::step.
struct EpisodeSummary {
  int worker = 0;
  std::uint64_t seed = 0;
  std::int64_t display_score = 0;
  int fortress_deaths = 0;
  int ship_deaths = 0;
  int missiles_fired = 0;
  double total_reward = 0.0;
};

// N independent environments stepped in lockstep. Finished episodes are
// reset automatically; the observation returned for such a worker is the
// first observation of its next episode, and its done flag is set.
//
// Worker w's k-th episode uses seed mix_seed(mix_seed(base_seed, w), k), so
// results do not depend on how steps are scheduled across threads.
class VecEnv {
 public:
  VecEnv(const EnvConfig& config, int num_envs, std::uint64_t base_seed);

  // Restarts every worker's seed sequence and resets all environments.
  void reset_all();

  // OpenMP across workers.
  void step(std::span<const int> actions);
  // Serial reference with identical results.
  void step_serial(std::span<const int> actions);

  int size() const { return static_cast<int>(envs_.size()); }
  std::size_t observation_size() const { return obs_size_; }
  int num_actions() const { return envs_.front().num_actions(); }

  std::span<const float> observations() const { return obs_; }
  std::span<const float> observation(int worker) const {
    return std::span<const float>(obs_).subspan(worker * obs_size_, obs_size_);
  }
  std::span<const double> rewards() const { return rewards_; }
  std::span<const std::uint8_t> dones() const { return dones_; }

  // Episodes that ended during the most recent step, in worker order.
  const std::vector<EpisodeSummary>& finished() const { return finished_; }

  const Env& env(int worker) const { return envs_[worker]; }
  const EnvConfig& config() const { return envs_.front().config(); }

 private:
  void step_worker(int w, int action);
  std::uint64_t next_seed(int w);

  std::vector<Env> envs_;
  std::uint64_t base_seed_;
  std::vector<std::uint64_t> episode_index_;
  std::size_t obs_size_;
  std::vector<float> obs_;
  std::vector<double> rewards_;
  std::vector<double> returns_;
  std::vector<std::uint8_t> dones_;
  std::vector<std::uint8_t> ended_;
  std::vector<EpisodeSummary> pending_;
  std::vector<EpisodeSummary> finished_;
};

}  // namespace sf
