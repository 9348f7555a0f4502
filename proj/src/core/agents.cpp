#include "sf/agents.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "sf/errors.hpp"

namespace sf {
namespace {

bool shell_threat(const GameState& state) {
  const ShipState& ship = state.ship;
  const double horizon_s = 1.0;
  for (const Projectile& p : state.projectiles) {
    if (p.kind != ProjectileKind::Shell) continue;
    const Vec2 d = p.position - ship.position;
    const Vec2 w = p.velocity - ship.velocity;
    const double ww = dot(w, w);
    if (ww == 0.0) continue;
    const double t = -dot(d, w) / ww;
    if (t < 0.0 || t > horizon_s) continue;
    if (length(d + w * t) <= state.config.ship_radius * 1.5) return true;
  }
  return false;
}

// Inward thrust keeps the ship near the orbit: thrust while the radius
// projected `lookahead` seconds ahead exceeds the target.
bool wants_thrust(const GameState& state, const OraclePolicy& policy) {
  const Vec2 rel = state.ship.position - state.fortress_position();
  const double r = length(rel);
  const double vr = dot(state.ship.velocity, rel * (1.0 / r));
  return r + policy.orbit_lookahead_s * vr > policy.orbit_radius;
}

std::optional<std::int64_t> fire_decision_hit(const GameState& state) {
  ShipState ship = state.ship;
  // Autoturn re-aims before the action applies.
  if (state.config.game_version == GameVersion::Autoturn) {
    ship.heading_deg = bearing_degrees(ship.position, state.fortress_position());
  }
  const Projectile m = make_missile(ship, state.config);
  const auto n = frames_to_fortress(m, state);
  if (!n) return std::nullopt;
  return state.frame + *n - 1;
}

bool should_fire(const GameState& state, const OraclePolicy& policy) {
  const auto new_hit = fire_decision_hit(state);
  if (!new_hit) return false;

  std::vector<std::int64_t> pending;
  for (const Projectile& p : state.projectiles) {
    if (p.kind != ProjectileKind::Missile) continue;
    if (auto n = frames_to_fortress(p, state)) pending.push_back(state.frame + *n - 1);
  }
  std::optional<std::int64_t> latest = state.vuln.last_hit_frame;
  for (auto h : pending) latest = latest ? std::max(*latest, h) : h;

  const ShotTiming timing = state.timing();
  auto slow_after = [&](std::optional<std::int64_t> prev) {
    if (!prev) return true;
    const std::int64_t gap = *new_hit - *prev;
    return gap >= policy.fire_period_frames && !timing.is_fast(gap);
  };

  const int threshold = state.config.vulnerability_threshold;
  const int v = state.vuln.v;
  if (v < threshold) {
    if (v + static_cast<int>(pending.size()) >= threshold) return false;
    return slow_after(latest);
  }
  if (pending.empty()) return slow_after(latest);
  if (pending.size() == 1) {
    const std::int64_t gap = *new_hit - pending.front();
    return gap >= 0 && timing.is_fast(gap);
  }
  return false;
}

}  // namespace

Action oracle_act(const GameState& state, const OraclePolicy& policy) {
  if (!state.ship.alive) return Action::NoOp;
  const ShipState& ship = state.ship;
  const Vec2 center = state.fortress_position();

  if (state.config.game_version == GameVersion::Youturn) {
    const double error =
        angle_delta(ship.heading_deg, bearing_degrees(ship.position, center));
    if (std::abs(error) > policy.aim_tolerance_deg) {
      return error > 0.0 ? Action::ThrustRight : Action::ThrustLeft;
    }
  }

  if (should_fire(state, policy)) return Action::Fire;
  if (policy.dodge && shell_threat(state)) return Action::ThrustForward;
  if (wants_thrust(state, policy)) return Action::ThrustForward;
  return Action::NoOp;
}

Action random_act(SplitMix64& rng, GameVersion version) {
  return static_cast<Action>(rng.below(static_cast<std::uint64_t>(num_actions(version))));
}

AgentKind parse_agent_kind(std::string_view text) {
  if (text == "oracle") return AgentKind::Oracle;
  if (text == "random") return AgentKind::Random;
  if (text == "noop") return AgentKind::Noop;
  throw ConfigError("unknown agent '" + std::string(text) +
                    "' (expected oracle, random or noop)");
}

namespace {

class OracleAgent final : public Agent {
 public:
  explicit OracleAgent(OraclePolicy policy) : policy_(policy) {}
  Action act(const GameState& state) override { return oracle_act(state, policy_); }

 private:
  OraclePolicy policy_;
};

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  Action act(const GameState& state) override {
    return random_act(rng_, state.config.game_version);
  }

 private:
  SplitMix64 rng_;
};

class NoopAgent final : public Agent {
 public:
  Action act(const GameState&) override { return noop_act(); }
};

}  // namespace

std::unique_ptr<Agent> make_agent(AgentKind kind, std::uint64_t seed,
                                  const OraclePolicy& policy) {
  switch (kind) {
    case AgentKind::Oracle:
      return std::make_unique<OracleAgent>(policy);
    case AgentKind::Random:
      return std::make_unique<RandomAgent>(seed);
    case AgentKind::Noop:
      return std::make_unique<NoopAgent>();
  }
  return nullptr;
}

}  // namespace sf
