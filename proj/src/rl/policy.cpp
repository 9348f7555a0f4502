#include "sf/nn/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sf/errors.hpp"
#include "sf/observation.hpp"

namespace sf::nn {

std::string_view to_string(ArchKind kind) {
  switch (kind) {
    case ArchKind::SfFf:
      return "sf-ff";
    case ArchKind::SfGru:
      return "sf-gru";
    case ArchKind::FeatureMlp:
      return "feature-mlp";
    case ArchKind::FeatureGru:
      return "feature-gru";
  }
  return "?";
}

ArchKind parse_arch_kind(std::string_view text) {
  if (text == "sf-ff") return ArchKind::SfFf;
  if (text == "sf-gru") return ArchKind::SfGru;
  if (text == "feature-mlp") return ArchKind::FeatureMlp;
  if (text == "feature-gru") return ArchKind::FeatureGru;
  throw ConfigError("unknown architecture '" + std::string(text) +
                    "' (expected sf-ff, sf-gru, feature-mlp or feature-gru)");
}

PolicySpec PolicySpec::make(ArchKind kind, int num_actions, int feature_size) {
  PolicySpec s;
  s.kind = kind;
  s.num_actions = num_actions;
  if (s.pixel()) {
    s.obs_size = static_cast<int>(kStackDepth * kFramePixels);
    s.hidden = 256;
  } else {
    s.obs_size = feature_size;
    s.hidden = 64;
  }
  return s;
}

void PolicySpec::validate() const {
  if (num_actions < 2) throw ConfigError("PolicySpec needs at least 2 actions");
  if (hidden < 1) throw ConfigError("PolicySpec hidden width must be >= 1");
  if (pixel() && obs_size != static_cast<int>(kStackDepth * kFramePixels)) {
    throw ConfigError("SF architectures take a 4x84x84 observation");
  }
  if (!pixel() && obs_size < 1) throw ConfigError("feature size must be >= 1");
}

PolicyNet::PolicyNet(const PolicySpec& spec, std::uint64_t init_seed) : spec_(spec) {
  spec_.validate();
  SplitMix64 rng(init_seed);
  const double relu_gain = std::sqrt(2.0);
  const int H = spec_.hidden;
  auto add_linear = [&](const std::string& name, int in, int out, double gain) {
    auto l = std::make_unique<Linear>(name, in, out);
    l->init(rng, gain);
    trunk_.push_back(std::move(l));
  };
  auto add_act = [&](Activation a, std::size_t n) {
    trunk_.push_back(std::make_unique<Elementwise>(a, n));
  };

  switch (spec_.kind) {
    case ArchKind::SfFf:
    case ArchKind::SfGru: {
      const ConvShape c1{kStackDepth, kFrameSize, kFrameSize, 16, 8, 4};
      const ConvShape c2{16, c1.out_h(), c1.out_w(), 32, 4, 2};
      auto conv1 = std::make_unique<Conv2d>("conv1", c1);
      conv1->init(rng, relu_gain);
      trunk_.push_back(std::move(conv1));
      add_act(Activation::Relu, c1.out_size());
      auto conv2 = std::make_unique<Conv2d>("conv2", c2);
      conv2->init(rng, relu_gain);
      trunk_.push_back(std::move(conv2));
      add_act(Activation::Relu, c2.out_size());
      add_linear("fc", static_cast<int>(c2.out_size()), H, relu_gain);
      add_act(Activation::Relu, H);
      if (spec_.kind == ArchKind::SfFf) {
        add_linear("core", H, H, relu_gain);
        add_act(Activation::Relu, H);
      }
      break;
    }
    case ArchKind::FeatureMlp:
      add_linear("fc1", spec_.obs_size, H, 1.0);
      add_act(Activation::Tanh, H);
      add_linear("fc2", H, H, 1.0);
      add_act(Activation::Tanh, H);
      break;
    case ArchKind::FeatureGru:
      add_linear("fc1", spec_.obs_size, H, relu_gain);
      add_act(Activation::Relu, H);
      break;
  }
  if (spec_.recurrent()) {
    gru_ = std::make_unique<Gru>("gru", H, H);
    gru_->init(rng);
  }
  policy_head_ = std::make_unique<Linear>("policy", H, spec_.num_actions);
  policy_head_->init(rng, 0.01);
  value_head_ = std::make_unique<Linear>("value", H, 1);
  value_head_->init(rng, 1.0);
}

std::vector<Param*> PolicyNet::params() {
  std::vector<Param*> out;
  for (auto& l : trunk_) {
    for (Param* p : l->params()) out.push_back(p);
  }
  if (gru_) {
    for (Param* p : gru_->params()) out.push_back(p);
  }
  for (Param* p : policy_head_->params()) out.push_back(p);
  for (Param* p : value_head_->params()) out.push_back(p);
  return out;
}

void PolicyNet::zero_grad() {
  for (Param* p : params()) std::fill(p->grad.begin(), p->grad.end(), 0.0);
}

std::size_t PolicyNet::num_params() {
  std::size_t n = 0;
  for (Param* p : params()) n += p->size();
  return n;
}

void PolicyNet::copy_from(PolicyNet& other) {
  if (!(other.spec_ == spec_)) throw IncompatibleError("copy_from: PolicySpec mismatch");
  auto mine = params();
  auto theirs = other.params();
  for (std::size_t i = 0; i < mine.size(); ++i) mine[i]->value = theirs[i]->value;
}

void PolicyNet::forward(std::span<const float> obs, int steps, int n,
                        std::span<const double> h0, std::span<const std::uint8_t> reset_before,
                        PolicyOutputs& out) {
  rows_ = steps * n;
  const std::size_t in = static_cast<std::size_t>(spec_.obs_size);
  if (obs.size() < rows_ * in) throw DomainError("PolicyNet::forward: observation block too short");

  acts_.resize(trunk_.size() + 1);
  acts_[0].assign(obs.begin(), obs.begin() + static_cast<std::ptrdiff_t>(rows_ * in));
  for (std::size_t i = 0; i < trunk_.size(); ++i) {
    acts_[i + 1].resize(rows_ * trunk_[i]->out_size());
    trunk_[i]->forward(acts_[i], rows_, acts_[i + 1]);
  }
  const int H = spec_.hidden;
  if (gru_) {
    std::vector<double> zeros;
    if (h0.empty()) {
      zeros.assign(static_cast<std::size_t>(n) * H, 0.0);
      h0 = zeros;
    }
    core_out_.resize(static_cast<std::size_t>(rows_) * H);
    out.final_state.resize(static_cast<std::size_t>(n) * H);
    gru_->forward(acts_.back(), steps, n, h0, reset_before, core_out_, out.final_state);
  } else {
    core_out_ = acts_.back();
    out.final_state.clear();
  }
  out.logits.resize(static_cast<std::size_t>(rows_) * spec_.num_actions);
  out.values.resize(rows_);
  policy_head_->forward(core_out_, rows_, out.logits);
  value_head_->forward(core_out_, rows_, out.values);
}

void PolicyNet::backward(std::span<const double> dlogits, std::span<const double> dvalues) {
  const int H = spec_.hidden;
  std::vector<double> dcore(static_cast<std::size_t>(rows_) * H);
  std::vector<double> dtmp(static_cast<std::size_t>(rows_) * H);
  policy_head_->backward(dlogits, rows_, dcore);
  value_head_->backward(dvalues, rows_, dtmp);
  for (std::size_t i = 0; i < dcore.size(); ++i) dcore[i] += dtmp[i];

  std::vector<double> d = std::move(dcore);
  if (gru_) {
    std::vector<double> dx(static_cast<std::size_t>(rows_) * H);
    gru_->backward(d, dx);
    d = std::move(dx);
  }
  for (std::size_t i = trunk_.size(); i-- > 0;) {
    if (i == 0) {
      trunk_[0]->backward(d, rows_, {});
      break;
    }
    std::vector<double> dx(rows_ * trunk_[i]->in_size());
    trunk_[i]->backward(d, rows_, dx);
    d = std::move(dx);
  }
}

void log_softmax(std::span<const double> logits, std::span<double> out) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double s = 0.0;
  for (double l : logits) s += std::exp(l - m);
  const double lse = m + std::log(s);
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
}

}  // namespace sf::nn
