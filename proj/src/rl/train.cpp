#include "sf/rl/train.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "sf/errors.hpp"
#include "sf/report.hpp"
#include "sf/rl/rollout.hpp"

namespace sf::rl {

std::string_view to_string(Algo algo) { return algo == Algo::Ppo ? "ppo" : "a2c"; }

Algo parse_algo(std::string_view text) {
  if (text == "ppo") return Algo::Ppo;
  if (text == "a2c") return Algo::A2c;
  throw ConfigError("unknown algorithm '" + std::string(text) + "' (expected ppo or a2c)");
}

TrainConfig TrainConfig::defaults(Algo algo) {
  TrainConfig c;
  c.algo = algo;
  if (algo == Algo::A2c) {
    c.entropy_coef = 0.01;
    c.lr = 5e-4;
    c.ppo_epochs = 1;
  }
  return c;
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid TrainConfig: ") + what);
  };
  require(n_workers >= 1, "n_workers >= 1");
  require(rollout_len >= 1, "rollout_len >= 1");
  require(gamma > 0.0 && gamma <= 1.0, "0 < gamma <= 1");
  require(lambda >= 0.0 && lambda <= 1.0, "0 <= lambda <= 1");
  require(value_coef > 0.0, "value_coef > 0");
  require(entropy_coef >= 0.0, "entropy_coef >= 0");
  require(lr > 0.0, "lr > 0");
  require(grad_clip > 0.0, "grad_clip > 0");
  require(ppo_epochs >= 1, "ppo_epochs >= 1");
  require(algo != Algo::A2c || ppo_epochs == 1, "ppo_epochs == 1 for a2c");
  require(minibatches >= 1, "minibatches >= 1");
  require(ppo_clip_eps > 0.0 && ppo_clip_eps < 1.0, "0 < ppo_clip_eps < 1");
  require(total_steps >= 0, "total_steps >= 0");
  require(eval_episodes >= 1, "eval_episodes >= 1");
  require(eval_interval >= 1, "eval_interval >= 1");
}

UpdateConfig TrainConfig::update_config() const {
  UpdateConfig u;
  u.loss = LossConfig{algo, ppo_clip_eps, value_coef, entropy_coef};
  u.epochs = ppo_epochs;
  u.minibatches = minibatches;
  u.grad_clip = grad_clip;
  u.normalize_advantages = normalize_advantages;
  u.gamma = gamma;
  u.lambda = lambda;
  return u;
}

void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << "steps,mean_score,fortress_deaths,ship_deaths,missiles\n";
  for (const CurveRow& r : rows) {
    os << r.steps << ',' << r.mean_score << ',' << r.fortress_deaths << ',' << r.ship_deaths
       << ',' << r.missiles << '\n';
  }
}

void write_transfer_csv(std::ostream& os, const std::vector<TransferRow>& rows) {
  os << "steps,scratch_score,transfer_score\n";
  for (const TransferRow& r : rows) {
    os << r.steps << ',' << r.scratch_score << ',' << r.transfer_score << '\n';
  }
}

std::uint64_t eval_seed(std::uint64_t base, int episode) { return episode_seed(base, episode); }

namespace {

void summarize(EvalResult& r) {
  const double n = static_cast<double>(r.episodes.size());
  r.best_score = r.episodes.empty() ? 0.0 : static_cast<double>(r.episodes[0].display_score);
  for (const EpisodeSummary& e : r.episodes) {
    r.mean_score += static_cast<double>(e.display_score) / n;
    r.best_score = std::max(r.best_score, static_cast<double>(e.display_score));
    r.fortress_deaths += e.fortress_deaths / n;
    r.ship_deaths += e.ship_deaths / n;
    r.missiles += e.missiles_fired / n;
    r.mean_return += e.total_reward / n;
  }
}

EpisodeSummary summary_of(const Env& env, int worker, double total_reward) {
  const StepInfo& info = env.info();
  return EpisodeSummary{worker,
                        info.seed,
                        info.display_score,
                        info.fortress_deaths,
                        info.ship_deaths,
                        info.missiles_fired,
                        total_reward};
}

}  // namespace

EvalResult evaluate(nn::PolicyNet& net, const EnvConfig& env_config, int episodes,
                    std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("evaluate needs at least one episode");
  std::vector<Env> envs(episodes, Env(env_config));
  const std::size_t obs_size = envs.front().observation_size();
  if (obs_size != static_cast<std::size_t>(net.spec().obs_size)) {
    throw IncompatibleError("evaluate: policy and environment observation sizes differ");
  }
  std::vector<float> obs(obs_size * episodes);
  for (int i = 0; i < episodes; ++i) {
    envs[i].reset_into(eval_seed(seed, i),
                       std::span<float>(obs).subspan(i * obs_size, obs_size));
  }
  SplitMix64 rng(mix_seed(seed, 0xe7a1));
  const int A = net.spec().num_actions;
  const int H = net.state_size();
  std::vector<double> state(static_cast<std::size_t>(episodes) * H, 0.0);
  const std::vector<std::uint8_t> no_reset(episodes, 0);
  std::vector<double> returns(episodes, 0.0);
  nn::PolicyOutputs out;
  EvalResult result;
  result.episodes.resize(episodes);
  int running = episodes;
  while (running > 0) {
    net.forward(obs, 1, episodes, state, no_reset, out);
    if (H > 0) state = out.final_state;
    for (int i = 0; i < episodes; ++i) {
      if (!envs[i].running()) continue;
      const int a = sample_action(
          std::span<const double>(out.logits).subspan(static_cast<std::size_t>(i) * A, A), rng);
      const StepOutcome o =
          envs[i].step_into(a, std::span<float>(obs).subspan(i * obs_size, obs_size));
      returns[i] += o.reward;
      if (o.done) {
        result.episodes[i] = summary_of(envs[i], i, returns[i]);
        --running;
      }
    }
  }
  summarize(result);
  return result;
}

EvalResult evaluate_agent(AgentKind kind, const EnvConfig& env_config, int episodes,
                          std::uint64_t seed) {
  SimulateOptions opts;
  opts.env = env_config;
  opts.agent = kind;
  opts.episodes = episodes;
  opts.seed = seed;
  const RunReport report = simulate(opts);
  EvalResult result;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const EpisodeRow& r = report.rows[i];
    result.episodes.push_back(EpisodeSummary{static_cast<int>(i), r.seed, r.display_score,
                                             r.fortress_deaths, r.ship_deaths, r.missiles_fired,
                                             r.total_reward});
  }
  summarize(result);
  return result;
}

nn::PolicySpec policy_spec_for(nn::ArchKind arch, const EnvConfig& env) {
  const nn::PolicySpec probe = nn::PolicySpec::make(arch, 2);
  if (probe.pixel() != (env.obs == ObsMode::Pixel)) {
    throw IncompatibleError(std::string("architecture ") + std::string(nn::to_string(arch)) +
                            " needs " + (probe.pixel() ? "pixel" : "feature") +
                            " observations");
  }
  Env e(env);
  return nn::PolicySpec::make(arch, e.num_actions(), static_cast<int>(e.observation_size()));
}

TrainResult train(const TrainConfig& config, const EnvConfig& env_config,
                  const TrainHooks& hooks, const Checkpoint* init) {
  config.validate();
  env_config.sim.validate();
  const nn::PolicySpec spec = policy_spec_for(config.arch, env_config);
  nn::PolicyNet net(spec, mix_seed(config.seed, 1));
  if (init) init->apply(net);

  VecEnv venv(env_config, config.n_workers, mix_seed(config.seed, 2));
  venv.reset_all();
  SplitMix64 act_rng(mix_seed(config.seed, 3));
  SplitMix64 shuffle_rng(mix_seed(config.seed, 4));
  const std::uint64_t eval_base = mix_seed(config.seed, 5);
  Adam opt(net.params(), config.lr);
  const UpdateConfig ucfg = config.update_config();

  TrainResult result;
  std::int64_t steps = 0;
  std::int64_t next_eval = 0;
  auto run_eval = [&]() {
    const EvalResult e = evaluate(net, env_config, config.eval_episodes, eval_base);
    CurveRow row{steps, e.mean_score, e.fortress_deaths, e.ship_deaths, e.missiles};
    result.curve.push_back(row);
    if (hooks.on_eval) hooks.on_eval(row);
    if (hooks.on_checkpoint) hooks.on_checkpoint(Checkpoint::capture(net, steps, env_config));
  };

  RolloutCarry carry;
  RolloutBatch batch;
  while (true) {
    if (steps >= next_eval) {
      run_eval();
      next_eval = (steps / config.eval_interval + 1) * config.eval_interval;
    }
    if (steps >= config.total_steps) break;
    const std::int64_t remaining = config.total_steps - steps;
    const int len = static_cast<int>(std::min<std::int64_t>(
        config.rollout_len, (remaining + config.n_workers - 1) / config.n_workers));
    rollout_collect(venv, net, len, act_rng, carry, batch);
    steps += static_cast<std::int64_t>(len) * config.n_workers;
    const UpdateStats s = config.algo == Algo::Ppo
                              ? ppo_update(batch, net, opt, ucfg, shuffle_rng)
                              : a2c_update(batch, net, opt, ucfg);
    result.updates.push_back(s);
    if (hooks.on_update) hooks.on_update(steps, s);
    if (steps >= config.total_steps && result.curve.back().steps != steps) next_eval = steps;
  }
  result.final_checkpoint = Checkpoint::capture(net, steps, env_config);
  return result;
}

TransferResult transfer_init(const Checkpoint& checkpoint, double new_interval_ms,
                             const TrainConfig& config, const TrainHooks& hooks) {
  EnvConfig env = checkpoint.env;
  env.sim.critical_interval_ms = new_interval_ms;
  env.sim.validate();
  const nn::PolicySpec spec = policy_spec_for(config.arch, env);
  if (!(spec == checkpoint.spec)) {
    throw IncompatibleError("checkpoint network (" + std::string(nn::to_string(checkpoint.spec.kind)) +
                            ") does not match the requested architecture (" +
                            std::string(nn::to_string(config.arch)) + ")");
  }
  TransferResult r;
  r.scratch = train(config, env, {});
  r.transfer = train(config, env, hooks, &checkpoint);
  for (std::size_t i = 0; i < r.scratch.curve.size() && i < r.transfer.curve.size(); ++i) {
    r.rows.push_back(TransferRow{r.scratch.curve[i].steps, r.scratch.curve[i].mean_score,
                                 r.transfer.curve[i].mean_score});
  }
  return r;
}

}  // namespace sf::rl
