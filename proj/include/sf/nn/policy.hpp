#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "sf/nn/layers.hpp"

namespace sf::nn {

enum class ArchKind : std::uint8_t { SfFf, SfGru, FeatureMlp, FeatureGru };

std::string_view to_string(ArchKind kind);
// "sf-ff", "sf-gru", "feature-mlp", "feature-gru".
ArchKind parse_arch_kind(std::string_view text);

// Network shape. SF-* take a 4x84x84 frame stack through two convolutions
// (16 filters 8x8 stride 4, 32 filters 4x4 stride 2) and a 256-unit dense
// layer, then either another 256-unit dense layer (SF-FF) or a 256-unit GRU
// (SF-GRU). Feature-MLP is two tanh layers over the feature vector;
// Feature-GRU one ReLU layer and a GRU. Both heads share the trunk.
struct PolicySpec {
  ArchKind kind = ArchKind::FeatureMlp;
  int num_actions = 3;
  int obs_size = 13;
  int hidden = 64;

  bool recurrent() const {
    return kind == ArchKind::SfGru || kind == ArchKind::FeatureGru;
  }
  bool pixel() const { return kind == ArchKind::SfFf || kind == ArchKind::SfGru; }

  // Default hidden width per architecture (256 for SF-*, 64 for Feature-*).
  static PolicySpec make(ArchKind kind, int num_actions, int feature_size = 13);
  void validate() const;
  bool operator==(const PolicySpec&) const = default;
};

struct PolicyOutputs {
  std::vector<double> logits;       // [rows, num_actions]
  std::vector<double> values;       // [rows]
  std::vector<double> final_state;  // [n, hidden] for recurrent nets
};

class PolicyNet {
 public:
  PolicyNet(const PolicySpec& spec, std::uint64_t init_seed);
  PolicyNet(const PolicyNet&) = delete;
  PolicyNet& operator=(const PolicyNet&) = delete;

  const PolicySpec& spec() const { return spec_; }
  // Width of the recurrent state, 0 for feed-forward nets.
  int state_size() const { return spec_.recurrent() ? spec_.hidden : 0; }

  // Evaluates a time-major [steps, n] block of observations. Feed-forward
  // nets treat it as a flat batch and ignore h0 / reset_before.
  void forward(std::span<const float> obs, int steps, int n,
               std::span<const double> h0, std::span<const std::uint8_t> reset_before,
               PolicyOutputs& out);
  // Accumulates parameter gradients for the most recent forward().
  void backward(std::span<const double> dlogits, std::span<const double> dvalues);

  std::vector<Param*> params();
  void zero_grad();
  std::size_t num_params();

  // Copies parameter values from another net with the same spec.
  void copy_from(PolicyNet& other);

 private:
  PolicySpec spec_;
  std::vector<std::unique_ptr<Layer>> trunk_;
  std::unique_ptr<Gru> gru_;
  std::unique_ptr<Linear> policy_head_;
  std::unique_ptr<Linear> value_head_;
  int rows_ = 0;
  std::vector<std::vector<double>> acts_;  // trunk activations
  std::vector<double> core_out_;
};

// Numerically stable log-softmax of one row.
void log_softmax(std::span<const double> logits, std::span<double> out);

}  // namespace sf::nn
