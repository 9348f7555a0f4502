#include "sf/env.hpp"

#include <chrono>
#include <ctime>
#include <random>
#include <string>

#include "sf/errors.hpp"

namespace sf {

std::string_view to_string(ObsMode mode) {
  return mode == ObsMode::Pixel ? "pixel" : "feature";
}

ObsMode parse_obs_mode(std::string_view text) {
  if (text == "pixel") return ObsMode::Pixel;
  if (text == "feature") return ObsMode::Feature;
  throw ConfigError("unknown observation mode '" + std::string(text) +
                    "' (expected pixel or feature)");
}

namespace {

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Env::Env(EnvConfig config)
    : config_(std::move(config)), scheme_(make_scheme(config_.reward)) {
  config_.sim.validate();
  state_.config = config_.sim;
}

std::size_t Env::observation_size() const {
  if (config_.obs == ObsMode::Pixel) return kStackDepth * kFramePixels;
  return kFeatureSize + (config_.include_clock ? 1 : 0);
}

std::vector<std::size_t> Env::observation_shape() const {
  if (config_.obs == ObsMode::Pixel) {
    return {kStackDepth, kFrameSize, kFrameSize};
  }
  return {observation_size()};
}

void Env::write_observation(std::span<float> out) const {
  if (config_.obs == ObsMode::Pixel) {
    stack_.write(out);
  } else {
    write_features(state_, config_.include_clock, out);
  }
}

void Env::refresh_info(EventList events) {
  info_.display_score = score_.display_score;
  info_.v = state_.vuln.v;
  info_.fortress_deaths = score_.fortress_deaths;
  info_.ship_deaths = score_.ship_deaths;
  info_.missiles_fired = score_.missiles_fired;
  info_.frame = state_.frame;
  info_.seed = seed_;
  info_.events = std::move(events);
}

std::vector<float> Env::reset(std::optional<std::uint64_t> seed) {
  std::vector<float> obs(observation_size());
  reset_into(seed, obs);
  return obs;
}

void Env::reset_into(std::optional<std::uint64_t> seed, std::span<float> obs) {
  if (obs.size() != observation_size()) {
    throw DomainError("observation buffer has the wrong length");
  }
  if (seed) {
    seed_ = *seed;
  } else {
    std::random_device rd;
    seed_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  state_ = new_game(config_.sim, seed_);
  score_ = ScoreState{};
  running_ = true;
  if (config_.obs == ObsMode::Pixel) stack_.reset(render_frame(state_));
  refresh_info({});
  write_observation(obs);

  if (recording_) {
    log_ = EpisodeLog{};
    log_.header.version = config_.sim.game_version;
    log_.header.seed = seed_;
    log_.header.scheme = config_.reward;
    log_.header.config_digest = config_digest(config_.sim);
    log_.header.timestamp = utc_timestamp();
    log_.header.config = config_.sim;
    log_.header.complete = false;
  }
}

StepResult Env::step(int action_id) {
  StepResult out;
  out.observation.resize(observation_size());
  StepOutcome o = step_into(action_id, out.observation);
  out.reward = o.reward;
  out.done = o.done;
  out.info = std::move(o.info);
  return out;
}

StepOutcome Env::step_into(int action_id, std::span<float> obs) {
  if (!running_) {
    throw LifecycleError(state_.done() && state_.frame > 0
                             ? "episode is complete; call reset()"
                             : "step() called before reset()");
  }
  if (!is_valid_action(config_.sim.game_version, action_id)) {
    throw DomainError("invalid action id " + std::to_string(action_id) +
                      " for " + std::string(to_string(config_.sim.game_version)) +
                      " (valid ids 0.." + std::to_string(num_actions() - 1) + ")");
  }
  if (obs.size() != observation_size()) {
    throw DomainError("observation buffer has the wrong length");
  }

  EventList events = step_sim(state_, static_cast<Action>(action_id));
  StepOutcome out;
  out.reward = reward_from_events(events, scheme_);
  score_ = display_score_update(score_, events);
  out.done = state_.done();
  running_ = !out.done;

  if (config_.obs == ObsMode::Pixel) stack_.push(render_frame(state_));
  write_observation(obs);

  if (recording_) {
    log_.frames.push_back(FrameRecord{state_.frame - 1, action_id, out.reward,
                                      events, score_.display_score,
                                      state_hash(state_)});
    if (out.done) log_.header.complete = true;
  }
  refresh_info(std::move(events));
  out.info = info_;
  return out;
}

void Env::set_critical_interval(double ms) {
  if (running_) {
    throw LifecycleError("critical interval can only change between episodes");
  }
  SimConfig next = config_.sim;
  next.critical_interval_ms = ms;
  next.validate();
  config_.sim = next;
  state_.config = next;
}

}  // namespace sf
