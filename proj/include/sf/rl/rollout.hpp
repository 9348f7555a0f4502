#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sf/nn/policy.hpp"
#include "sf/rng.hpp"
#include "sf/vec_env.hpp"

namespace sf::rl {

// Time-major [steps, n] buffer of transitions. Pixel observations are kept
// as quantized bytes (the renderer only produces k/255 values, so this is
// lossless); feature observations as floats.
struct RolloutBatch {
  int steps = 0;
  int n = 0;
  std::size_t obs_size = 0;
  bool pixel = false;

  std::vector<float> obs_f;
  std::vector<std::uint8_t> obs_u8;
  std::vector<int> actions;
  std::vector<double> logp;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> dones;  // episode ended with this step
  std::vector<double> bootstrap;    // [n] value after the last step
  std::vector<double> initial_state;  // [n, hidden], recurrent nets only
  int state_size = 0;

  void resize(int steps, int n, std::size_t obs_size, bool pixel, int state_size);
  std::size_t size() const { return static_cast<std::size_t>(steps) * n; }

  void set_obs(std::size_t row, std::span<const float> obs);
  void get_obs(std::size_t row, std::span<float> out) const;
};

// Recurrent state carried between consecutive rollouts.
struct RolloutCarry {
  std::vector<double> state;  // [n, hidden]
};

// Samples an action from softmax(logits) using one uniform draw.
int sample_action(std::span<const double> logits, SplitMix64& rng, double* logp = nullptr);

// Steps env for `steps` frames with actions sampled from net. env must have
// been reset. Episodes that end inside the rollout are appended to
// finished (if given).
void rollout_collect(VecEnv& env, nn::PolicyNet& net, int steps, SplitMix64& rng,
                     RolloutCarry& carry, RolloutBatch& batch,
                     std::vector<EpisodeSummary>* finished = nullptr);

}  // namespace sf::rl
