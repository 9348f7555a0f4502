#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sf/nn/policy.hpp"
#include "sf/rl/optim.hpp"
#include "sf/rl/rollout.hpp"
#include "sf/rng.hpp"

namespace sf::rl {

enum class Algo : std::uint8_t { Ppo, A2c };

struct LossConfig {
  Algo algo = Algo::Ppo;
  double clip_eps = 0.2;
  double value_coef = 0.5;
  double entropy_coef = 0.05;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;  // before clipping, last minibatch
  double approx_kl = 0.0;
  long samples = 0;

  std::string describe() const;
};

// Thrown when a loss or gradient turns non-finite; carries the statistics
// of the offending minibatch.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, UpdateStats stats)
      : std::runtime_error(what + " [" + stats.describe() + "]"), stats_(stats) {}
  const UpdateStats& stats() const { return stats_; }

 private:
  UpdateStats stats_;
};

// Loss over a subset of the batch, averaged over its samples:
//   L = L_pi + c1 * mean((V - R)^2) - c2 * mean(H)
// with L_pi the clipped surrogate (PPO) or -logp * A (A2C). Feed-forward
// nets take `ids` as row indices; recurrent nets as worker indices, whose
// whole sequences are replayed from the stored initial state. Gradients are
// accumulated into the net. Returns L.
double loss_and_grad(nn::PolicyNet& net, const RolloutBatch& batch,
                     std::span<const double> advantages, std::span<const double> returns,
                     std::span<const int> ids, const LossConfig& config, UpdateStats* stats);

struct UpdateConfig {
  LossConfig loss;
  int epochs = 4;
  int minibatches = 4;
  double grad_clip = 0.5;
  bool normalize_advantages = true;
  double gamma = 0.99;
  double lambda = 0.95;
};

// GAE, advantage normalization, then epochs x minibatches optimizer steps.
// Stats are averaged over the last epoch.
UpdateStats ppo_update(const RolloutBatch& batch, nn::PolicyNet& net, Adam& opt,
                       const UpdateConfig& config, SplitMix64& rng);

// One full-batch step with the plain policy-gradient loss.
UpdateStats a2c_update(const RolloutBatch& batch, nn::PolicyNet& net, Adam& opt,
                       const UpdateConfig& config);

// Normalizes to zero mean and unit variance in place.
void normalize(std::span<double> xs);

}  // namespace sf::rl
