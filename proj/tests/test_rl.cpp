#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "sf/errors.hpp"
#include "sf/rl/checkpoint.hpp"
#include "sf/rl/gae.hpp"
#include "sf/rl/optim.hpp"
#include "sf/rl/rollout.hpp"
#include "sf/rl/train.hpp"
#include "sf/rl/update.hpp"

using namespace sf;
using namespace sf::rl;

namespace {

// Direct sum: A_t = sum_k (gamma*lambda)^k delta_{t+k}, truncated at the
// first done.
std::vector<double> brute_gae(const std::vector<double>& r, const std::vector<double>& v,
                              const std::vector<std::uint8_t>& d, double g, double l) {
  const std::size_t T = r.size();
  std::vector<double> adv(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double acc = 0.0, w = 1.0;
    for (std::size_t k = t; k < T; ++k) {
      const double next = d[k] ? 0.0 : v[k + 1];
      acc += w * (r[k] + g * next - v[k]);
      if (d[k]) break;
      w *= g * l;
    }
    adv[t] = acc;
  }
  return adv;
}

EnvConfig feature_env(GameVersion version = GameVersion::Autoturn) {
  EnvConfig e;
  e.sim.game_version = version;
  e.obs = ObsMode::Feature;
  e.reward = RewardKind::Aeci;
  return e;
}

// Hand-built feature batch with random observations and old log-probs near
// the current policy.
RolloutBatch toy_batch(nn::PolicyNet& net, int steps, int n, std::uint64_t seed,
                       double logp_jitter) {
  SplitMix64 rng(seed);
  const nn::PolicySpec& spec = net.spec();
  RolloutBatch b;
  b.resize(steps, n, spec.obs_size, false, net.state_size());
  for (float& o : b.obs_f) o = static_cast<float>(rng.uniform(-1.0, 1.0));
  for (double& s : b.initial_state) s = rng.uniform(-0.5, 0.5);
  for (std::size_t r = 0; r < b.size(); ++r) {
    b.actions[r] = static_cast<int>(rng.below(spec.num_actions));
    b.rewards[r] = rng.uniform(-1.0, 1.0);
    b.dones[r] = rng.uniform() < 0.1;
  }
  for (double& x : b.bootstrap) x = rng.uniform(-1.0, 1.0);
  nn::PolicyOutputs out;
  if (spec.recurrent()) {
    std::vector<std::uint8_t> resets(b.size(), 0);
    for (std::size_t r = static_cast<std::size_t>(n); r < b.size(); ++r) resets[r] = b.dones[r - n];
    net.forward(b.obs_f, steps, n, b.initial_state, resets, out);
  } else {
    net.forward(b.obs_f, 1, static_cast<int>(b.size()), {}, {}, out);
  }
  const int A = spec.num_actions;
  for (std::size_t r = 0; r < b.size(); ++r) {
    std::vector<double> lp(A);
    nn::log_softmax(std::span<const double>(out.logits).subspan(r * A, A), lp);
    b.logp[r] = lp[b.actions[r]] + rng.uniform(-logp_jitter, logp_jitter);
    b.values[r] = out.values[r];
  }
  return b;
}

void surrogate_fd(nn::ArchKind kind, Algo algo) {
  nn::PolicyNet net(nn::PolicySpec::make(kind, 3, 13), 21);
  const bool rec = net.spec().recurrent();
  RolloutBatch b = toy_batch(net, rec ? 6 : 1, rec ? 3 : 24, 5, 0.1);
  SplitMix64 rng(6);
  std::vector<double> adv(b.size()), ret(b.size());
  for (double& a : adv) a = rng.uniform(-2.0, 2.0);
  for (double& r : ret) r = rng.uniform(-2.0, 2.0);
  std::vector<int> ids(rec ? b.n : static_cast<int>(b.size()));
  std::iota(ids.begin(), ids.end(), 0);
  LossConfig cfg;
  cfg.algo = algo;
  cfg.entropy_coef = 0.05;
  net.zero_grad();
  loss_and_grad(net, b, adv, ret, ids, cfg, nullptr);
  // Evaluating the loss below accumulates more gradient, so snapshot first.
  std::vector<std::vector<double>> grads;
  for (nn::Param* p : net.params()) grads.push_back(p->grad);
  const double h = 1e-6;
  std::size_t pi = 0;
  for (nn::Param* p : net.params()) {
    const std::vector<double>& grad = grads[pi++];
    for (int k = 0; k < 6; ++k) {
      const std::size_t i = rng.below(p->size());
      const double keep = p->value[i];
      p->value[i] = keep + h;
      const double fp = loss_and_grad(net, b, adv, ret, ids, cfg, nullptr);
      p->value[i] = keep - h;
      const double fm = loss_and_grad(net, b, adv, ret, ids, cfg, nullptr);
      p->value[i] = keep;
      const double num = (fp - fm) / (2 * h);
      CAPTURE(p->name);
      CAPTURE(i);
      CHECK(std::abs(grad[i] - num) <= 1e-4 * std::max(1.0, std::abs(num)));
    }
  }
}

double kl_to_uniform(nn::PolicyNet& net, std::span<const float> obs, int rows) {
  nn::PolicyOutputs out;
  net.forward(obs, 1, rows, {}, {}, out);
  const int A = net.spec().num_actions;
  double kl = 0.0;
  for (int r = 0; r < rows; ++r) {
    std::vector<double> lp(A);
    nn::log_softmax(std::span<const double>(out.logits).subspan(r * A, A), lp);
    for (double l : lp) kl += std::exp(l) * (l + std::log(static_cast<double>(A)));
  }
  return kl / rows;
}

}  // namespace

TEST_SUITE("rl-harness") {

TEST_CASE("GAE worked examples") {
  const std::vector<double> r1{1.0}, v1{0.0, 0.0};
  const std::vector<std::uint8_t> d1{1};
  auto g = compute_gae(r1, v1, d1, 0.99, 0.95);
  CHECK(g.advantages[0] == doctest::Approx(1.0));
  CHECK(g.returns[0] == doctest::Approx(1.0));

  const std::vector<double> r2{0.0, 1.0}, v2{0.0, 0.0, 0.0};
  const std::vector<std::uint8_t> d2{0, 1};
  g = compute_gae(r2, v2, d2, 0.99, 0.95);
  CHECK(g.advantages[0] == doctest::Approx(0.9405).epsilon(1e-12));
  CHECK(g.advantages[1] == doctest::Approx(1.0));

  // A done cuts the bootstrap: the large value after step 0 is ignored.
  const std::vector<double> r3{0.0, 0.0}, v3{0.0, 100.0, 100.0};
  const std::vector<std::uint8_t> d3{1, 0};
  g = compute_gae(r3, v3, d3, 0.99, 0.95);
  CHECK(g.advantages[0] == doctest::Approx(0.0));
  CHECK(g.advantages[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g.returns[1] == doctest::Approx(99.0));
}

TEST_CASE("GAE matches the direct sum on random instances") {
  SplitMix64 rng(77);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t T = 1 + rng.below(40);
    std::vector<double> r(T), v(T + 1);
    std::vector<std::uint8_t> d(T);
    for (auto& x : r) x = rng.uniform(-3, 3);
    for (auto& x : v) x = rng.uniform(-3, 3);
    for (auto& x : d) x = rng.uniform() < 0.15;
    const double gamma = rng.uniform(0.5, 1.0), lambda = rng.uniform(0.0, 1.0);
    const auto g = compute_gae(r, v, d, gamma, lambda);
    const auto want = brute_gae(r, v, d, gamma, lambda);
    for (std::size_t t = 0; t < T; ++t) {
      CHECK(std::abs(g.advantages[t] - want[t]) <= 1e-10);
      CHECK(std::abs(g.returns[t] - (want[t] + v[t])) <= 1e-10);
    }
  }
}

TEST_CASE("batched GAE equals per-column GAE") {
  SplitMix64 rng(78);
  const int T = 17, N = 5;
  std::vector<double> r(T * N), v(T * N), boot(N);
  std::vector<std::uint8_t> d(T * N);
  for (auto& x : r) x = rng.uniform(-1, 1);
  for (auto& x : v) x = rng.uniform(-1, 1);
  for (auto& x : boot) x = rng.uniform(-1, 1);
  for (auto& x : d) x = rng.uniform() < 0.2;
  std::vector<double> adv(T * N), ret(T * N);
  compute_gae_batch(r, v, boot, d, T, N, 0.99, 0.95, adv, ret);
  for (int w = 0; w < N; ++w) {
    std::vector<double> rc(T), vc(T + 1);
    std::vector<std::uint8_t> dc(T);
    for (int t = 0; t < T; ++t) {
      rc[t] = r[t * N + w];
      vc[t] = v[t * N + w];
      dc[t] = d[t * N + w];
    }
    vc[T] = boot[w];
    const auto g = compute_gae(rc, vc, dc, 0.99, 0.95);
    for (int t = 0; t < T; ++t) {
      CHECK(adv[t * N + w] == doctest::Approx(g.advantages[t]).epsilon(1e-12));
      CHECK(ret[t * N + w] == doctest::Approx(g.returns[t]).epsilon(1e-12));
    }
  }
}

TEST_CASE("GAE rejects mismatched lengths") {
  const std::vector<double> r{1.0, 2.0}, v{0.0, 0.0};
  const std::vector<std::uint8_t> d{0, 0};
  CHECK_THROWS_AS(compute_gae(r, v, d, 0.99, 0.95), DomainError);
}

TEST_CASE("surrogate gradients match finite differences") {
  surrogate_fd(nn::ArchKind::FeatureMlp, Algo::Ppo);
  surrogate_fd(nn::ArchKind::FeatureMlp, Algo::A2c);
  surrogate_fd(nn::ArchKind::FeatureGru, Algo::Ppo);
}

TEST_CASE("PPO at ratio one has the A2C gradient") {
  nn::PolicyNet a(nn::PolicySpec::make(nn::ArchKind::FeatureMlp, 3, 13), 4);
  nn::PolicyNet b(nn::PolicySpec::make(nn::ArchKind::FeatureMlp, 3, 13), 4);
  RolloutBatch batch = toy_batch(a, 1, 32, 9, 0.0);
  std::vector<double> adv(batch.size()), ret(batch.size(), 0.0);
  SplitMix64 rng(10);
  for (double& x : adv) x = rng.uniform(-1, 1);
  std::vector<int> ids(batch.size());
  std::iota(ids.begin(), ids.end(), 0);
  LossConfig ppo, a2c;
  a2c.algo = Algo::A2c;
  a.zero_grad();
  b.zero_grad();
  loss_and_grad(a, batch, adv, ret, ids, ppo, nullptr);
  loss_and_grad(b, batch, adv, ret, ids, a2c, nullptr);
  auto pa = a.params(), pb = b.params();
  for (std::size_t k = 0; k < pa.size(); ++k) {
    for (std::size_t i = 0; i < pa[k]->size(); ++i) {
      CHECK(pa[k]->grad[i] == doctest::Approx(pb[k]->grad[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("loss statistics") {
  nn::PolicyNet net(nn::PolicySpec::make(nn::ArchKind::FeatureMlp, 5, 13), 4);
  RolloutBatch batch = toy_batch(net, 1, 16, 11, 0.0);
  std::vector<double> zero(batch.size(), 0.0);
  std::vector<int> ids(batch.size());
  std::iota(ids.begin(), ids.end(), 0);
  UpdateStats s;
  loss_and_grad(net, batch, zero, zero, ids, LossConfig{}, &s);
  CHECK(s.policy_loss == doctest::Approx(0.0));
  CHECK(s.approx_kl == doctest::Approx(0.0));
  CHECK(s.clip_fraction == 0.0);
  CHECK(s.samples == 16);

  // A net whose policy head is zeroed is exactly uniform.
  for (nn::Param* p : net.params()) {
    if (p->name.rfind("policy.", 0) == 0) std::fill(p->value.begin(), p->value.end(), 0.0);
  }
  loss_and_grad(net, batch, zero, zero, ids, LossConfig{}, &s);
  CHECK(s.entropy == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("gradient clipping bounds the global norm") {
  nn::Param a("a", {3}), b("b", {1});
  a.grad = {6.0, 0.0, 0.0};
  b.grad = {8.0};
  std::vector<nn::Param*> ps{&a, &b};
  CHECK(global_grad_norm(ps) == doctest::Approx(10.0));
  CHECK(clip_grad_norm(ps, 0.5) == doctest::Approx(10.0));
  CHECK(global_grad_norm(ps) <= 0.5 + 1e-12);
  CHECK(a.grad[0] / b.grad[0] == doctest::Approx(0.75));
  // Already small: unchanged.
  a.grad = {0.1, 0.0, 0.0};
  b.grad = {0.0};
  clip_grad_norm(ps, 0.5);
  CHECK(a.grad[0] == doctest::Approx(0.1));
}

TEST_CASE("Adam first step moves each parameter by about lr") {
  nn::Param p("p", {2});
  p.value = {1.0, -1.0};
  p.grad = {3.0, -0.2};
  Adam opt({&p}, 0.1);
  opt.step();
  CHECK(p.value[0] == doctest::Approx(0.9).epsilon(1e-4));
  CHECK(p.value[1] == doctest::Approx(-0.9).epsilon(1e-4));
  CHECK(opt.steps() == 1);
}

TEST_CASE("updates keep the policy a valid distribution") {
  nn::PolicyNet net(nn::PolicySpec::make(nn::ArchKind::FeatureMlp, 3, 13), 4);
  RolloutBatch batch = toy_batch(net, 1, 64, 12, 0.0);
  Adam opt(net.params(), 1e-3);
  SplitMix64 rng(1);
  UpdateConfig cfg;
  const UpdateStats s = ppo_update(batch, net, opt, cfg, rng);
  CHECK(std::isfinite(s.policy_loss));
  CHECK(opt.steps() == 16);
  nn::PolicyOutputs out;
  net.forward(batch.obs_f, 1, 64, {}, {}, out);
  for (int r = 0; r < 64; ++r) {
    std::vector<double> lp(3);
    nn::log_softmax(std::span<const double>(out.logits).subspan(r * 3, 3), lp);
    double sum = 0.0;
    for (double l : lp) sum += std::exp(l);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(out.values[r]));
  }
  a2c_update(batch, net, opt, cfg);
  CHECK(opt.steps() == 17);
}

TEST_CASE("non-finite parameters abort the update") {
  nn::PolicyNet net(nn::PolicySpec::make(nn::ArchKind::FeatureMlp, 3, 13), 4);
  RolloutBatch batch = toy_batch(net, 1, 16, 12, 0.0);
  net.params().front()->value[0] = std::nan("");
  Adam opt(net.params(), 1e-3);
  SplitMix64 rng(1);
  CHECK_THROWS_AS(ppo_update(batch, net, opt, UpdateConfig{}, rng), NonFiniteError);
  CHECK(opt.steps() == 0);
}

TEST_CASE("strong entropy bonus drives a skewed policy toward uniform") {
  nn::PolicyNet net(nn::PolicySpec::make(nn::ArchKind::FeatureMlp, 3, 13), 4);
  for (nn::Param* p : net.params()) {
    if (p->name == "policy.bias") p->value = {3.0, 0.0, -3.0};
  }
  RolloutBatch batch = toy_batch(net, 1, 64, 13, 0.0);
  std::fill(batch.rewards.begin(), batch.rewards.end(), 0.0);
  std::fill(batch.values.begin(), batch.values.end(), 0.0);
  std::fill(batch.bootstrap.begin(), batch.bootstrap.end(), 0.0);
  Adam opt(net.params(), 1e-3);
  UpdateConfig cfg;
  cfg.loss.entropy_coef = 1.0;
  double kl = kl_to_uniform(net, batch.obs_f, 64);
  CHECK(kl > 0.5);
  for (int i = 0; i < 30; ++i) {
    a2c_update(batch, net, opt, cfg);
    const double next = kl_to_uniform(net, batch.obs_f, 64);
    CHECK(next < kl);
    kl = next;
  }
}

TEST_CASE("checkpoint round trip is byte-identical") {
  for (nn::ArchKind kind : {nn::ArchKind::FeatureMlp, nn::ArchKind::FeatureGru}) {
    const EnvConfig env = feature_env();
    nn::PolicyNet net(policy_spec_for(kind, env), 8);
    const Checkpoint a = Checkpoint::capture(net, 12345, env);
    std::stringstream s1;
    a.write(s1);
    const std::string bytes = s1.str();
    std::stringstream in(bytes);
    const Checkpoint b = Checkpoint::read(in);
    CHECK(a == b);
    std::stringstream s2;
    b.write(s2);
    CHECK(s2.str() == bytes);

    nn::PolicyNet other(policy_spec_for(kind, env), 99);
    b.apply(other);
    auto pa = net.params(), pb = other.params();
    for (std::size_t k = 0; k < pa.size(); ++k) CHECK(pa[k]->value == pb[k]->value);
  }
}

TEST_CASE("checkpoint errors") {
  const EnvConfig env = feature_env();
  nn::PolicyNet mlp(policy_spec_for(nn::ArchKind::FeatureMlp, env), 1);
  nn::PolicyNet gru(policy_spec_for(nn::ArchKind::FeatureGru, env), 1);
  const Checkpoint c = Checkpoint::capture(mlp, 0, env);
  CHECK_THROWS_AS(c.apply(gru), IncompatibleError);

  std::stringstream bad("NOTACKPT");
  CHECK_THROWS_AS(Checkpoint::read(bad), FormatError);
  std::stringstream full;
  c.write(full);
  std::string truncated = full.str();
  truncated.resize(truncated.size() - 3);
  std::stringstream tin(truncated);
  CHECK_THROWS_AS(Checkpoint::read(tin), FormatError);

  CHECK_THROWS_AS(policy_spec_for(nn::ArchKind::SfFf, env), IncompatibleError);
}

TEST_CASE("rollouts are deterministic and sized workers x length") {
  EnvConfig env = feature_env();
  env.sim.episode_seconds = 10;
  auto run = [&](std::vector<EpisodeSummary>* fin) {
    nn::PolicyNet net(policy_spec_for(nn::ArchKind::FeatureMlp, env), 3);
    VecEnv venv(env, 16, 4);
    venv.reset_all();
    SplitMix64 rng(5);
    RolloutCarry carry;
    RolloutBatch batch;
    rollout_collect(venv, net, 1024, rng, carry, batch, fin);
    return batch;
  };
  std::vector<EpisodeSummary> fin;
  const RolloutBatch a = run(&fin);
  const RolloutBatch b = run(nullptr);
  CHECK(a.size() == 16384);
  CHECK(a.actions == b.actions);
  CHECK(a.rewards == b.rewards);
  CHECK(a.logp == b.logp);
  // 1024 steps over 300-frame episodes: 3 finished episodes per worker.
  CHECK(fin.size() == 48);
  long dones = 0;
  for (auto d : a.dones) dones += d;
  CHECK(dones == 48);
}

TEST_CASE("recurrent carry resets when an episode ends") {
  EnvConfig env = feature_env();
  env.sim.episode_seconds = 1;  // 30 frames
  nn::PolicyNet net(policy_spec_for(nn::ArchKind::FeatureGru, env), 3);
  VecEnv venv(env, 2, 4);
  venv.reset_all();
  SplitMix64 rng(5);
  RolloutCarry carry;
  RolloutBatch batch;
  rollout_collect(venv, net, 30, rng, carry, batch);
  // Every worker finished exactly at the last step.
  for (int w = 0; w < 2; ++w) CHECK(batch.dones[29 * 2 + w] == 1);
  for (double s : carry.state) CHECK(s == 0.0);
  rollout_collect(venv, net, 10, rng, carry, batch);
  for (double s : batch.initial_state) CHECK(s == 0.0);
  bool nonzero = false;
  for (double s : carry.state) nonzero = nonzero || s != 0.0;
  CHECK(nonzero);
}

TEST_CASE("rollout rejects a mismatched network") {
  EnvConfig env = feature_env(GameVersion::Youturn);
  nn::PolicyNet net(policy_spec_for(nn::ArchKind::FeatureMlp, feature_env()), 3);
  VecEnv venv(env, 2, 4);
  venv.reset_all();
  SplitMix64 rng(5);
  RolloutCarry carry;
  RolloutBatch batch;
  CHECK_THROWS_AS(rollout_collect(venv, net, 4, rng, carry, batch), IncompatibleError);
}

TEST_CASE("training with no steps evaluates once") {
  TrainConfig cfg;
  cfg.total_steps = 0;
  cfg.eval_episodes = 1;
  EnvConfig env = feature_env();
  env.sim.episode_seconds = 2;
  const TrainResult r = train(cfg, env);
  REQUIRE(r.curve.size() == 1);
  CHECK(r.curve[0].steps == 0);
  CHECK(r.updates.empty());
  CHECK(r.final_checkpoint.step == 0);
}

TEST_CASE("short training run is reproducible and logs each evaluation") {
  TrainConfig cfg;
  cfg.n_workers = 4;
  cfg.rollout_len = 64;
  cfg.total_steps = 1024;
  cfg.eval_interval = 512;
  cfg.eval_episodes = 1;
  cfg.seed = 3;
  EnvConfig env = feature_env();
  env.sim.episode_seconds = 2;
  int checkpoints = 0;
  TrainHooks hooks;
  hooks.on_checkpoint = [&](const Checkpoint&) { ++checkpoints; };
  const TrainResult a = train(cfg, env, hooks);
  const TrainResult b = train(cfg, env);
  REQUIRE(a.curve.size() == 3);
  CHECK(a.curve[1].steps == 512);
  CHECK(a.curve.back().steps == 1024);
  CHECK(checkpoints == 3);
  CHECK(a.updates.size() == 4);
  CHECK(a.final_checkpoint == b.final_checkpoint);

  std::ostringstream os;
  write_curve_csv(os, a.curve);
  CHECK(os.str().rfind("steps,mean_score,fortress_deaths,ship_deaths,missiles\n", 0) == 0);
}

TEST_CASE("transfer initialization") {
  TrainConfig cfg;
  cfg.n_workers = 2;
  cfg.rollout_len = 32;
  cfg.total_steps = 64;
  cfg.eval_interval = 64;
  cfg.eval_episodes = 1;
  EnvConfig env = feature_env();
  env.sim.episode_seconds = 2;
  const TrainResult base = train(cfg, env);

  // Same interval: the transfer run starts from the checkpoint's weights.
  const TransferResult same = transfer_init(base.final_checkpoint, 250.0, cfg);
  REQUIRE(!same.rows.empty());
  nn::PolicyNet net(base.final_checkpoint.spec, 0);
  base.final_checkpoint.apply(net);
  const EvalResult e = evaluate(net, env, 1, mix_seed(cfg.seed, 5));
  CHECK(same.rows[0].transfer_score == e.mean_score);

  const TransferResult moved = transfer_init(base.final_checkpoint, 400.0, cfg);
  CHECK(moved.transfer.final_checkpoint.critical_interval_ms() == 400.0);

  TrainConfig other = cfg;
  other.arch = nn::ArchKind::FeatureGru;
  CHECK_THROWS_AS(transfer_init(base.final_checkpoint, 400.0, other), IncompatibleError);
}

TEST_CASE("config parsing") {
  CHECK(parse_algo("ppo") == Algo::Ppo);
  CHECK(parse_algo("a2c") == Algo::A2c);
  CHECK_THROWS_AS(parse_algo("dqn"), ConfigError);
  const TrainConfig a2c = TrainConfig::defaults(Algo::A2c);
  CHECK(a2c.entropy_coef == 0.01);
  CHECK(a2c.lr == 5e-4);
  TrainConfig bad;
  bad.n_workers = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(TrainConfig{}.steps_per_update() == 16384);
}

}  // TEST_SUITE
