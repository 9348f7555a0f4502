#include "sf/rl/update.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sf/errors.hpp"
#include "sf/rl/gae.hpp"

namespace sf::rl {

namespace {

constexpr int kFeedForwardChunk = 256;

struct Sums {
  double policy = 0.0, value = 0.0, entropy = 0.0, clipped = 0.0, kl = 0.0;
};

// Loss terms and gradients for one sample; dlogits/dvalue receive the
// gradient of the per-sample loss scaled by `scale`.
void sample_terms(std::span<const double> logits, double value, int action, double old_logp,
                  double adv, double ret, const LossConfig& cfg, double scale,
                  std::span<double> dlogits, double& dvalue, Sums& sums) {
  const std::size_t A = logits.size();
  double lp[8];
  nn::log_softmax(logits, std::span<double>(lp, A));
  double p[8];
  double H = 0.0;
  for (std::size_t j = 0; j < A; ++j) {
    p[j] = std::exp(lp[j]);
    H -= p[j] * lp[j];
  }
  const double logp = lp[action];
  double coef = 0.0;  // d L_pi / d logp[action]
  if (cfg.algo == Algo::Ppo) {
    const double ratio = std::exp(logp - old_logp);
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
    const double s1 = ratio * adv;
    const double s2 = clipped * adv;
    sums.policy += -std::min(s1, s2);
    const bool active = (adv > 0.0 && ratio > 1.0 + cfg.clip_eps) ||
                        (adv < 0.0 && ratio < 1.0 - cfg.clip_eps);
    coef = active ? 0.0 : -adv * ratio;
    if (std::abs(ratio - 1.0) > cfg.clip_eps) sums.clipped += 1.0;
  } else {
    sums.policy += -logp * adv;
    coef = -adv;
  }
  sums.kl += old_logp - logp;
  const double err = value - ret;
  sums.value += err * err;
  sums.entropy += H;

  for (std::size_t j = 0; j < A; ++j) {
    const double onehot = static_cast<int>(j) == action ? 1.0 : 0.0;
    // d logp_a / d z_j = 1[j=a] - p_j ; d H / d z_j = -p_j (logp_j + H)
    const double g_pi = coef * (onehot - p[j]);
    const double g_ent = -cfg.entropy_coef * (-p[j] * (lp[j] + H));
    dlogits[j] = scale * (g_pi + g_ent);
  }
  dvalue = scale * cfg.value_coef * 2.0 * err;
}

}  // namespace

std::string UpdateStats::describe() const {
  std::ostringstream os;
  os << "policy_loss=" << policy_loss << " value_loss=" << value_loss
     << " entropy=" << entropy << " clip_fraction=" << clip_fraction
     << " grad_norm=" << grad_norm << " approx_kl=" << approx_kl;
  return os.str();
}

double loss_and_grad(nn::PolicyNet& net, const RolloutBatch& batch,
                     std::span<const double> advantages, std::span<const double> returns,
                     std::span<const int> ids, const LossConfig& cfg, UpdateStats* stats) {
  const nn::PolicySpec& spec = net.spec();
  const int A = spec.num_actions;
  if (A > 8) throw DomainError("loss_and_grad supports at most 8 actions");
  if (advantages.size() != batch.size() || returns.size() != batch.size()) {
    throw DomainError("loss_and_grad: advantage/return length differs from batch");
  }
  const std::size_t obs_size = batch.obs_size;
  const bool recurrent = spec.recurrent();
  const std::size_t total = recurrent ? ids.size() * batch.steps : ids.size();
  if (total == 0) return 0.0;
  const double scale = 1.0 / static_cast<double>(total);

  Sums sums;
  nn::PolicyOutputs out;
  std::vector<float> obs;
  std::vector<std::size_t> rows;
  std::vector<double> dlogits, dvalues;

  auto process = [&](int steps, int n, std::span<const double> h0,
                     std::span<const std::uint8_t> resets) {
    net.forward(obs, steps, n, h0, resets, out);
    dlogits.assign(rows.size() * A, 0.0);
    dvalues.assign(rows.size(), 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::size_t r = rows[k];
      sample_terms(std::span<const double>(out.logits).subspan(k * A, A), out.values[k],
                   batch.actions[r], batch.logp[r], advantages[r], returns[r], cfg, scale,
                   std::span<double>(dlogits).subspan(k * A, A), dvalues[k], sums);
    }
    net.backward(dlogits, dvalues);
  };

  if (!recurrent) {
    for (std::size_t start = 0; start < ids.size(); start += kFeedForwardChunk) {
      const std::size_t end = std::min(ids.size(), start + kFeedForwardChunk);
      rows.clear();
      obs.resize((end - start) * obs_size);
      for (std::size_t k = start; k < end; ++k) {
        const auto r = static_cast<std::size_t>(ids[k]);
        if (r >= batch.size()) throw DomainError("loss_and_grad: row index out of range");
        rows.push_back(r);
        batch.get_obs(r, std::span<float>(obs).subspan((k - start) * obs_size, obs_size));
      }
      process(1, static_cast<int>(end - start), {}, {});
    }
  } else {
    const int T = batch.steps;
    const int H = batch.state_size;
    std::vector<std::uint8_t> resets(T);
    for (int w : ids) {
      if (w < 0 || w >= batch.n) throw DomainError("loss_and_grad: worker index out of range");
      rows.clear();
      obs.resize(static_cast<std::size_t>(T) * obs_size);
      for (int t = 0; t < T; ++t) {
        const std::size_t r = static_cast<std::size_t>(t) * batch.n + w;
        rows.push_back(r);
        batch.get_obs(r, std::span<float>(obs).subspan(static_cast<std::size_t>(t) * obs_size,
                                                       obs_size));
        resets[t] = t > 0 ? batch.dones[r - batch.n] : 0;
      }
      process(T, 1,
              std::span<const double>(batch.initial_state)
                  .subspan(static_cast<std::size_t>(w) * H, H),
              resets);
    }
  }

  const double policy = sums.policy * scale;
  const double value = sums.value * scale;
  const double entropy = sums.entropy * scale;
  const double loss = policy + cfg.value_coef * value - cfg.entropy_coef * entropy;
  if (stats) {
    stats->policy_loss = policy;
    stats->value_loss = value;
    stats->entropy = entropy;
    stats->clip_fraction = sums.clipped * scale;
    stats->approx_kl = sums.kl * scale;
    stats->samples = static_cast<long>(total);
  }
  return loss;
}

void normalize(std::span<double> xs) {
  if (xs.empty()) return;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  const double inv = 1.0 / (std::sqrt(var) + 1e-8);
  for (double& x : xs) x = (x - mean) * inv;
}

namespace {

GaeResult batch_gae(const RolloutBatch& batch, const UpdateConfig& config) {
  GaeResult g;
  g.advantages.resize(batch.size());
  g.returns.resize(batch.size());
  compute_gae_batch(batch.rewards, batch.values, batch.bootstrap, batch.dones, batch.steps,
                    batch.n, config.gamma, config.lambda, g.advantages, g.returns);
  if (config.normalize_advantages) normalize(g.advantages);
  return g;
}

void optimizer_step(nn::PolicyNet& net, Adam& opt, double loss, double clip, UpdateStats& s) {
  auto params = net.params();
  s.grad_norm = clip_grad_norm(params, clip);
  if (!std::isfinite(loss) || !std::isfinite(s.grad_norm)) {
    throw NonFiniteError("non-finite loss or gradient during update", s);
  }
  opt.step();
}

void accumulate(UpdateStats& acc, const UpdateStats& s, double w) {
  acc.policy_loss += w * s.policy_loss;
  acc.value_loss += w * s.value_loss;
  acc.entropy += w * s.entropy;
  acc.clip_fraction += w * s.clip_fraction;
  acc.approx_kl += w * s.approx_kl;
  acc.grad_norm = s.grad_norm;
  acc.samples += s.samples;
}

}  // namespace

UpdateStats ppo_update(const RolloutBatch& batch, nn::PolicyNet& net, Adam& opt,
                       const UpdateConfig& config, SplitMix64& rng) {
  if (config.epochs < 1 || config.minibatches < 1) {
    throw ConfigError("ppo_update: epochs and minibatches must be >= 1");
  }
  const GaeResult g = batch_gae(batch, config);
  const bool recurrent = net.spec().recurrent();
  const int units = recurrent ? batch.n : static_cast<int>(batch.size());
  const int mbs = std::min(config.minibatches, units);
  std::vector<int> order(units);
  std::iota(order.begin(), order.end(), 0);

  UpdateStats result;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    UpdateStats epoch_stats;
    for (int m = 0; m < mbs; ++m) {
      const std::size_t lo = static_cast<std::size_t>(units) * m / mbs;
      const std::size_t hi = static_cast<std::size_t>(units) * (m + 1) / mbs;
      std::span<const int> ids(order.data() + lo, hi - lo);
      net.zero_grad();
      UpdateStats s;
      const double loss = loss_and_grad(net, batch, g.advantages, g.returns, ids, config.loss, &s);
      optimizer_step(net, opt, loss, config.grad_clip, s);
      accumulate(epoch_stats, s, 1.0 / mbs);
    }
    result = epoch_stats;
  }
  return result;
}

UpdateStats a2c_update(const RolloutBatch& batch, nn::PolicyNet& net, Adam& opt,
                       const UpdateConfig& config) {
  const GaeResult g = batch_gae(batch, config);
  const bool recurrent = net.spec().recurrent();
  const int units = recurrent ? batch.n : static_cast<int>(batch.size());
  std::vector<int> ids(units);
  std::iota(ids.begin(), ids.end(), 0);
  LossConfig loss_cfg = config.loss;
  loss_cfg.algo = Algo::A2c;
  net.zero_grad();
  UpdateStats s;
  const double loss = loss_and_grad(net, batch, g.advantages, g.returns, ids, loss_cfg, &s);
  optimizer_step(net, opt, loss, config.grad_clip, s);
  return s;
}

}  // namespace sf::rl
