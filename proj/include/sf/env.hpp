#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sf/episode_log.hpp"
#include "sf/observation.hpp"
#include "sf/reward.hpp"
#include "sf/sim.hpp"

namespace sf {

enum class ObsMode : std::uint8_t { Pixel, Feature };

std::string_view to_string(ObsMode mode);
ObsMode parse_obs_mode(std::string_view text);

struct EnvConfig {
  SimConfig sim;
  RewardKind reward = RewardKind::Sparse;
  ObsMode obs = ObsMode::Pixel;
  bool include_clock = false;  // feature mode only

  bool operator==(const EnvConfig&) const = default;
};

struct StepInfo {
  std::int64_t display_score = 0;
  int v = 0;
  int fortress_deaths = 0;
  int ship_deaths = 0;
  int missiles_fired = 0;
  std::int64_t frame = 0;
  std::uint64_t seed = 0;
  EventList events;
};

struct StepResult {
  std::vector<float> observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// Everything step() produces except the observation, which step_into()
// writes into a caller-owned buffer.
struct StepOutcome {
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// Step/reset facade over one game. Single-threaded; instances are
// independent and may live on different threads.
class Env {
 public:
  explicit Env(EnvConfig config);

  // Starts a new episode. Without a seed one is drawn from std::random_device
  // and reported in info().seed.
  std::vector<float> reset(std::optional<std::uint64_t> seed = std::nullopt);
  void reset_into(std::optional<std::uint64_t> seed, std::span<float> obs);

  // Throws DomainError on an invalid id and LifecycleError before reset or
  // after the episode ended.
  StepResult step(int action_id);
  StepOutcome step_into(int action_id, std::span<float> obs);

  // Only between episodes (before the first reset or after done).
  void set_critical_interval(double ms);

  int num_actions() const { return sf::num_actions(config_.sim.game_version); }
  std::size_t observation_size() const;
  std::vector<std::size_t> observation_shape() const;

  bool running() const { return running_; }
  const GameState& state() const { return state_; }
  const EnvConfig& config() const { return config_; }
  const ScoreState& score() const { return score_; }
  const StepInfo& info() const { return info_; }

  // When enabled, every episode is captured into log(), which is cleared on
  // reset.
  void set_recording(bool on) { recording_ = on; }
  const EpisodeLog& log() const { return log_; }

 private:
  void write_observation(std::span<float> out) const;
  void refresh_info(EventList events);

  EnvConfig config_;
  RewardScheme scheme_;
  GameState state_;
  ScoreState score_;
  ObsStack stack_;
  StepInfo info_;
  std::uint64_t seed_ = 0;
  bool running_ = false;
  bool recording_ = false;
  EpisodeLog log_;
};

}  // namespace sf
