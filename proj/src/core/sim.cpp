#include "sf/sim.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "sf/errors.hpp"

namespace sf {

int num_actions(GameVersion version) {
  return version == GameVersion::Autoturn ? 3 : 5;
}

bool is_valid_action(GameVersion version, int action_id) {
  return action_id >= 0 && action_id < num_actions(version);
}

namespace {

Hexagon outer_hex(const SimConfig& c) {
  return {{c.world_size / 2.0, c.world_size / 2.0}, c.outer_hex_radius};
}

Hexagon inner_hex(const SimConfig& c) {
  return {{c.world_size / 2.0, c.world_size / 2.0}, c.inner_hex_radius};
}

void aim_at_fortress(ShipState& ship, Vec2 fortress) {
  ship.heading_deg = bearing_degrees(ship.position, fortress);
}

}  // namespace

bool in_flight_zone(Vec2 p, const SimConfig& config) {
  return outer_hex(config).contains(p) && !inner_hex(config).contains(p);
}

ShipState respawn_ship(SplitMix64& rng, const SimConfig& config) {
  const Vec2 center{config.world_size / 2.0, config.world_size / 2.0};
  // Shrinking the circumradius by margin / cos(30) moves every edge inward
  // by exactly `margin`.
  const double to_circum = 2.0 / std::sqrt(3.0);
  const Hexagon outer{center,
                      config.outer_hex_radius - config.spawn_margin * to_circum};
  const Hexagon inner{center,
                      config.inner_hex_radius + config.spawn_margin * to_circum};
  const double r = outer.circumradius;

  ShipState ship;
  for (;;) {
    const Vec2 p{center.x + rng.uniform(-r, r), center.y + rng.uniform(-r, r)};
    if (outer.contains(p) && !inner.contains(p)) {
      ship.position = p;
      break;
    }
  }
  ship.heading_deg = rng.uniform(0.0, 360.0);
  const Vec2 radial = ship.position - center;
  const double dist = length(radial);
  // Counter-clockwise on screen (y down) is (y, -x).
  const Vec2 tangent{radial.y / dist, -radial.x / dist};
  ship.velocity = tangent * config.spawn_speed;
  ship.alive = true;
  return ship;
}

GameState new_game(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  GameState state;
  state.config = config;
  state.rng = SplitMix64(seed);
  state.ship = respawn_ship(state.rng, config);
  if (config.game_version == GameVersion::Autoturn) {
    aim_at_fortress(state.ship, state.fortress_position());
  }
  return state;
}

std::pair<FortressState, std::optional<Projectile>> fortress_update(
    const FortressState& fortress, const ShipState& ship,
    const SimConfig& config) {
  FortressState next = fortress;
  ++next.frames_since_shell;
  const Vec2 center{config.world_size / 2.0, config.world_size / 2.0};
  const double bearing = bearing_degrees(center, ship.position);
  const double max_turn = config.fortress_turn_rate / config.fps;
  const double error = angle_delta(next.heading_deg, bearing);
  next.heading_deg =
      wrap_degrees(next.heading_deg + std::clamp(error, -max_turn, max_turn));

  const bool locked = std::abs(angle_delta(next.heading_deg, bearing)) <=
                      config.lock_tolerance_deg;
  const bool ready =
      next.ms_since_last_shell(config.fps) >= config.shell_cooldown_ms;
  if (!locked || !ready) return {next, std::nullopt};

  const Vec2 dir = unit_from_degrees(bearing);
  Projectile shell;
  shell.kind = ProjectileKind::Shell;
  shell.position = center + dir * config.fortress_radius;
  shell.velocity = dir * config.shell_speed;
  next.frames_since_shell = 0;
  return {next, shell};
}

Projectile make_missile(const ShipState& ship, const SimConfig& config) {
  const Vec2 dir = unit_from_degrees(ship.heading_deg);
  Projectile m;
  m.kind = ProjectileKind::Missile;
  m.position = ship.position + dir * config.ship_radius;
  m.velocity = dir * config.missile_speed;
  return m;
}

bool touches_fortress(const Projectile& missile, const GameState& state) {
  return distance(missile.position, state.fortress_position()) <=
         state.config.fortress_radius;
}

std::optional<int> frames_to_fortress(Projectile missile,
                                      const GameState& state) {
  const double dt = 1.0 / state.config.fps;
  const Hexagon outer = outer_hex(state.config);
  for (int n = 1;; ++n) {
    advance_projectile(missile, dt);
    if (touches_fortress(missile, state)) return n;
    if (!outer.contains(missile.position)) return std::nullopt;
  }
}

std::vector<Contact> collision_check(const GameState& state) {
  std::vector<Contact> contacts;
  const auto& ps = state.projectiles;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].kind == ProjectileKind::Missile && touches_fortress(ps[i], state)) {
      contacts.push_back({ContactKind::MissileFortress, i});
    }
  }
  if (!state.ship.alive) return contacts;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].kind == ProjectileKind::Shell &&
        distance(ps[i].position, state.ship.position) <=
            state.config.ship_radius) {
      contacts.push_back({ContactKind::ShellShip, i});
      return contacts;
    }
  }
  if (!in_flight_zone(state.ship.position, state.config)) {
    contacts.push_back({ContactKind::ShipWall, 0});
  }
  return contacts;
}

void resolve_fortress_destruction(GameState& state) {
  state.vuln = VulnerabilityTracker{};
  state.fortress.alive = false;
  ++state.tallies.fortress_deaths;
}

EventList step_sim(GameState& state, Action action) {
  if (state.done()) throw EpisodeCompleteError();
  const SimConfig& cfg = state.config;
  if (!is_valid_action(cfg.game_version, static_cast<int>(action))) {
    throw DomainError("action " + std::to_string(static_cast<int>(action)) +
                      " is not valid for " +
                      std::string(to_string(cfg.game_version)) + " (" +
                      std::to_string(num_actions(cfg.game_version)) +
                      " actions)");
  }

  EventList events;
  const double dt = 1.0 / cfg.fps;
  const Vec2 center = state.fortress_position();
  const bool autoturn = cfg.game_version == GameVersion::Autoturn;

  if (!state.ship.alive) {
    state.ship = respawn_ship(state.rng, cfg);
  }
  if (!state.fortress.alive) {
    state.fortress.alive = true;
    state.fortress.frames_since_shell = 0;
  }

  ShipState& ship = state.ship;
  if (autoturn) aim_at_fortress(ship, center);

  switch (action) {
    case Action::NoOp:
      break;
    case Action::Fire:
      state.projectiles.push_back(make_missile(ship, cfg));
      ++state.tallies.missiles_fired;
      events.push_back(SimEvent::missile_fired());
      break;
    case Action::ThrustForward: {
      ship.velocity += unit_from_degrees(ship.heading_deg) * (cfg.thrust_accel * dt);
      const double speed = length(ship.velocity);
      if (speed > cfg.max_speed) {
        ship.velocity = ship.velocity * (cfg.max_speed / speed);
      }
      break;
    }
    case Action::ThrustRight:
      ship.heading_deg = wrap_degrees(ship.heading_deg + cfg.ship_turn_rate * dt);
      break;
    case Action::ThrustLeft:
      ship.heading_deg = wrap_degrees(ship.heading_deg - cfg.ship_turn_rate * dt);
      break;
  }

  ship.position += ship.velocity * dt;
  if (autoturn) aim_at_fortress(ship, center);

  for (auto& p : state.projectiles) advance_projectile(p, dt);

  {
    auto [fortress, shell] = fortress_update(state.fortress, ship, cfg);
    state.fortress = fortress;
    if (shell) {
      state.projectiles.push_back(*shell);
      events.push_back(SimEvent::shell_fired());
    }
  }

  std::vector<bool> consumed(state.projectiles.size(), false);
  for (const Contact& c : collision_check(state)) {
    switch (c.kind) {
      case ContactKind::MissileFortress: {
        consumed[c.projectile] = true;
        if (!state.fortress.alive) break;
        auto upd = update_vulnerability(state.vuln, state.frame, state.timing(),
                                        cfg.vulnerability_threshold);
        state.vuln = upd.tracker;
        events.push_back(upd.event);
        if (upd.event.kind == EventKind::FortressDestroyed) {
          resolve_fortress_destruction(state);
        }
        break;
      }
      case ContactKind::ShellShip:
        consumed[c.projectile] = true;
        [[fallthrough]];
      case ContactKind::ShipWall:
        ship.alive = false;
        ++state.tallies.ship_deaths;
        events.push_back(SimEvent::ship_destroyed());
        break;
    }
  }

  const Hexagon outer = outer_hex(cfg);
  std::size_t k = 0;
  for (std::size_t i = 0; i < state.projectiles.size(); ++i) {
    if (consumed[i] || !outer.contains(state.projectiles[i].position)) continue;
    state.projectiles[k++] = state.projectiles[i];
  }
  state.projectiles.resize(k);

  ++state.frame;
  return events;
}

namespace {

struct Fnv {
  std::uint64_t h = 0xcbf29ce484222325ULL;

  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void vec(Vec2 v) {
    f64(v.x);
    f64(v.y);
  }
};

}  // namespace

std::uint64_t state_hash(const GameState& s) {
  Fnv f;
  const std::string digest = config_digest(s.config);
  f.bytes(digest.data(), digest.size());
  f.i64(s.frame);
  f.u64(s.rng.state());
  f.vec(s.ship.position);
  f.vec(s.ship.velocity);
  f.f64(s.ship.heading_deg);
  f.u64(s.ship.alive);
  f.f64(s.fortress.heading_deg);
  f.i64(s.fortress.frames_since_shell);
  f.u64(s.fortress.alive);
  f.u64(s.projectiles.size());
  for (const auto& p : s.projectiles) {
    f.u64(static_cast<std::uint64_t>(p.kind));
    f.vec(p.position);
    f.vec(p.velocity);
    f.i64(p.age_frames);
  }
  f.i64(s.vuln.v);
  f.i64(s.vuln.last_hit_frame.value_or(-1));
  f.u64(s.vuln.last_hit_frame.has_value());
  f.i64(s.tallies.fortress_deaths);
  f.i64(s.tallies.ship_deaths);
  f.i64(s.tallies.missiles_fired);
  return f.h;
}

}  // namespace sf
