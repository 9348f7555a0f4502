#include "sf/rl/rollout.hpp"

#include <algorithm>
#include <cmath>

#include "sf/errors.hpp"

namespace sf::rl {

void RolloutBatch::resize(int steps_, int n_, std::size_t obs_size_, bool pixel_,
                          int state_size_) {
  steps = steps_;
  n = n_;
  obs_size = obs_size_;
  pixel = pixel_;
  state_size = state_size_;
  const std::size_t rows = size();
  if (pixel) {
    obs_u8.assign(rows * obs_size, 0);
    obs_f.clear();
  } else {
    obs_f.assign(rows * obs_size, 0.0f);
    obs_u8.clear();
  }
  actions.assign(rows, 0);
  logp.assign(rows, 0.0);
  rewards.assign(rows, 0.0);
  values.assign(rows, 0.0);
  dones.assign(rows, 0);
  bootstrap.assign(n, 0.0);
  initial_state.assign(static_cast<std::size_t>(n) * state_size, 0.0);
}

void RolloutBatch::set_obs(std::size_t row, std::span<const float> obs) {
  if (pixel) {
    std::uint8_t* dst = obs_u8.data() + row * obs_size;
    for (std::size_t k = 0; k < obs_size; ++k) {
      dst[k] = static_cast<std::uint8_t>(std::lround(obs[k] * 255.0f));
    }
  } else {
    std::copy_n(obs.begin(), obs_size, obs_f.begin() + static_cast<std::ptrdiff_t>(row * obs_size));
  }
}

void RolloutBatch::get_obs(std::size_t row, std::span<float> out) const {
  if (pixel) {
    const std::uint8_t* src = obs_u8.data() + row * obs_size;
    for (std::size_t k = 0; k < obs_size; ++k) out[k] = src[k] / 255.0f;
  } else {
    std::copy_n(obs_f.begin() + static_cast<std::ptrdiff_t>(row * obs_size), obs_size,
                out.begin());
  }
}

int sample_action(std::span<const double> logits, SplitMix64& rng, double* logp) {
  std::vector<double> lp(logits.size());
  nn::log_softmax(logits, lp);
  const double u = rng.uniform();
  double acc = 0.0;
  int chosen = static_cast<int>(logits.size()) - 1;
  for (std::size_t a = 0; a < lp.size(); ++a) {
    acc += std::exp(lp[a]);
    if (u < acc) {
      chosen = static_cast<int>(a);
      break;
    }
  }
  if (logp) *logp = lp[chosen];
  return chosen;
}

void rollout_collect(VecEnv& env, nn::PolicyNet& net, int steps, SplitMix64& rng,
                     RolloutCarry& carry, RolloutBatch& batch,
                     std::vector<EpisodeSummary>* finished) {
  const nn::PolicySpec& spec = net.spec();
  const int n = env.size();
  if (env.observation_size() != static_cast<std::size_t>(spec.obs_size)) {
    throw IncompatibleError("rollout_collect: policy and environment observation sizes differ");
  }
  if (env.num_actions() != spec.num_actions) {
    throw IncompatibleError("rollout_collect: policy and environment action counts differ");
  }
  const int H = net.state_size();
  if (carry.state.size() != static_cast<std::size_t>(n) * H) {
    carry.state.assign(static_cast<std::size_t>(n) * H, 0.0);
  }
  batch.resize(steps, n, env.observation_size(), spec.pixel(), H);
  batch.initial_state = carry.state;

  nn::PolicyOutputs out;
  std::vector<int> actions(n);
  const std::vector<std::uint8_t> no_reset(n, 0);
  for (int t = 0; t < steps; ++t) {
    auto obs = env.observations();
    for (int i = 0; i < n; ++i) {
      batch.set_obs(static_cast<std::size_t>(t) * n + i, env.observation(i));
    }
    net.forward(obs, 1, n, carry.state, no_reset, out);
    for (int i = 0; i < n; ++i) {
      const std::size_t row = static_cast<std::size_t>(t) * n + i;
      double lp = 0.0;
      actions[i] = sample_action(
          std::span<const double>(out.logits).subspan(static_cast<std::size_t>(i) * spec.num_actions,
                                                       spec.num_actions),
          rng, &lp);
      batch.actions[row] = actions[i];
      batch.logp[row] = lp;
      batch.values[row] = out.values[i];
    }
    if (H > 0) carry.state = out.final_state;
    env.step(actions);
    auto rewards = env.rewards();
    auto dones = env.dones();
    for (int i = 0; i < n; ++i) {
      const std::size_t row = static_cast<std::size_t>(t) * n + i;
      batch.rewards[row] = rewards[i];
      batch.dones[row] = dones[i];
      if (dones[i] && H > 0) {
        std::fill_n(carry.state.begin() + static_cast<std::ptrdiff_t>(i) * H, H, 0.0);
      }
    }
    if (finished) {
      const auto& f = env.finished();
      finished->insert(finished->end(), f.begin(), f.end());
    }
  }
  net.forward(env.observations(), 1, n, carry.state, no_reset, out);
  batch.bootstrap = out.values;
}

}  // namespace sf::rl
