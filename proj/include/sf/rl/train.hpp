#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "sf/agents.hpp"
#include "sf/env.hpp"
#include "sf/nn/policy.hpp"
#include "sf/rl/checkpoint.hpp"
#include "sf/rl/update.hpp"

namespace sf::rl {

std::string_view to_string(Algo algo);
Algo parse_algo(std::string_view text);

struct TrainConfig {
  Algo algo = Algo::Ppo;
  nn::ArchKind arch = nn::ArchKind::FeatureMlp;
  int n_workers = 16;
  int rollout_len = 1024;
  double gamma = 0.99;
  double lambda = 0.95;
  double value_coef = 0.5;
  double entropy_coef = 0.05;
  double lr = 1e-3;
  double grad_clip = 0.5;
  int ppo_epochs = 4;
  int minibatches = 4;
  double ppo_clip_eps = 0.2;
  bool normalize_advantages = true;
  std::int64_t total_steps = 2'000'000;
  // Evaluation: eval_episodes full episodes on fixed seeds, sampling from
  // the policy, every eval_interval environment steps (and at 0 and the end).
  int eval_episodes = 8;
  std::int64_t eval_interval = 250'000;
  std::uint64_t seed = 0;

  // Per-algorithm defaults (entropy 0.05 / lr 1e-3 for PPO, 0.01 / 5e-4 and
  // one epoch for A2C).
  static TrainConfig defaults(Algo algo);
  void validate() const;
  UpdateConfig update_config() const;
  std::int64_t steps_per_update() const {
    return static_cast<std::int64_t>(n_workers) * rollout_len;
  }
};

struct EvalResult {
  double mean_score = 0.0;
  double best_score = 0.0;
  double fortress_deaths = 0.0;
  double ship_deaths = 0.0;
  double missiles = 0.0;
  double mean_return = 0.0;
  std::vector<EpisodeSummary> episodes;
};

struct CurveRow {
  std::int64_t steps = 0;
  double mean_score = 0.0;
  double fortress_deaths = 0.0;
  double ship_deaths = 0.0;
  double missiles = 0.0;
};

void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows);

// Seeds used for evaluation episode i under a given base seed.
std::uint64_t eval_seed(std::uint64_t base, int episode);

// Runs `episodes` complete episodes on seeds eval_seed(seed, i), sampling
// actions from the policy with an RNG derived from seed.
EvalResult evaluate(nn::PolicyNet& net, const EnvConfig& env, int episodes, std::uint64_t seed);
// Same seeds, scripted agent.
EvalResult evaluate_agent(AgentKind kind, const EnvConfig& env, int episodes, std::uint64_t seed);

struct TrainHooks {
  std::function<void(const CurveRow&)> on_eval;
  std::function<void(const Checkpoint&)> on_checkpoint;  // after every eval
  std::function<void(std::int64_t, const UpdateStats&)> on_update;
};

struct TrainResult {
  std::vector<CurveRow> curve;
  Checkpoint final_checkpoint;
  std::vector<UpdateStats> updates;
};

nn::PolicySpec policy_spec_for(nn::ArchKind arch, const EnvConfig& env);

// Collect/update loop. When init is given its weights seed the network
// (its spec must match). Steps count environment frames over all workers.
TrainResult train(const TrainConfig& config, const EnvConfig& env,
                  const TrainHooks& hooks = {}, const Checkpoint* init = nullptr);

struct TransferRow {
  std::int64_t steps = 0;
  double scratch_score = 0.0;
  double transfer_score = 0.0;
};

struct TransferResult {
  std::vector<TransferRow> rows;
  TrainResult scratch;
  TrainResult transfer;
};

void write_transfer_csv(std::ostream& os, const std::vector<TransferRow>& rows);

// Trains twice on the checkpoint's environment with the critical interval
// set to new_interval_ms: once from scratch and once initialized from the
// checkpoint, with identical seeds. Throws IncompatibleError when the
// checkpoint's network does not match config.arch on that environment.
TransferResult transfer_init(const Checkpoint& checkpoint, double new_interval_ms,
                             const TrainConfig& config, const TrainHooks& hooks = {});

}  // namespace sf::rl
