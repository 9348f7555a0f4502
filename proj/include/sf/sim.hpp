#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sf/config.hpp"
#include "sf/events.hpp"
#include "sf/geometry.hpp"
#include "sf/rng.hpp"
#include "sf/vulnerability.hpp"

namespace sf {

// Ship commands. The numeric values are the action ids: Autoturn accepts
// the first three, Youturn all five.
enum class Action : std::uint8_t {
  NoOp = 0,
  Fire = 1,
  ThrustForward = 2,
  ThrustRight = 3,
  ThrustLeft = 4,
};

int num_actions(GameVersion version);
bool is_valid_action(GameVersion version, int action_id);

struct ShipState {
  Vec2 position;
  Vec2 velocity;
  double heading_deg = 0.0;
  bool alive = true;

  bool operator==(const ShipState&) const = default;
};

struct FortressState {
  double heading_deg = 0.0;
  std::int64_t frames_since_shell = 0;
  bool alive = true;

  double ms_since_last_shell(int fps) const {
    return static_cast<double>(frames_since_shell) * 1000.0 / fps;
  }
  bool operator==(const FortressState&) const = default;
};

enum class ProjectileKind : std::uint8_t { Missile, Shell };

struct Projectile {
  ProjectileKind kind = ProjectileKind::Missile;
  Vec2 position;
  Vec2 velocity;
  int age_frames = 0;

  bool operator==(const Projectile&) const = default;
};

struct Tallies {
  int fortress_deaths = 0;
  int ship_deaths = 0;
  int missiles_fired = 0;

  bool operator==(const Tallies&) const = default;
};

struct GameState {
  SimConfig config;
  std::int64_t frame = 0;
  SplitMix64 rng;
  ShipState ship;
  FortressState fortress;
  std::vector<Projectile> projectiles;
  VulnerabilityTracker vuln;
  Tallies tallies;

  bool done() const { return frame >= config.episode_frames(); }
  Vec2 fortress_position() const {
    return {config.world_size / 2.0, config.world_size / 2.0};
  }
  ShotTiming timing() const { return {config.fps, config.critical_interval_ms}; }

  bool operator==(const GameState&) const = default;
};

// Validates the config (ConfigError) and spawns the ship from the seed.
GameState new_game(const SimConfig& config, std::uint64_t seed);

// Advances exactly one frame and returns every event of that frame.
// Throws EpisodeCompleteError when the episode is over and DomainError for
// an action the game version does not accept.
EventList step_sim(GameState& state, Action action);

// Rotates toward the ship by at most fortress_turn_rate / fps degrees and
// fires a shell when locked and off cooldown. Advances the cooldown clock by
// one frame.
std::pair<FortressState, std::optional<Projectile>> fortress_update(
    const FortressState& fortress, const ShipState& ship,
    const SimConfig& config);

// Heading uniform in [0, 360); position uniform over the annulus between
// the hexagons shrunk by spawn_margin on both sides; velocity tangential
// (counter-clockwise on screen) at spawn_speed.
ShipState respawn_ship(SplitMix64& rng, const SimConfig& config);

// True when the point lies strictly between the hexagons.
bool in_flight_zone(Vec2 p, const SimConfig& config);

enum class ContactKind : std::uint8_t { MissileFortress, ShellShip, ShipWall };

struct Contact {
  ContactKind kind;
  std::size_t projectile = 0;  // index into GameState::projectiles
  bool operator==(const Contact&) const = default;
};

// All contacts in resolution order: every missile touching the fortress (in
// projectile order), then at most one ship contact (shell first, then wall).
std::vector<Contact> collision_check(const GameState& state);

// v = 0 and fresh shot clock, fortress_deaths += 1, fortress marked for
// respawn on the next frame. Does not end the episode.
void resolve_fortress_destruction(GameState& state);

// Projectile kinematics shared with the scripted oracle so its hit
// predictions match the simulation bit for bit.
inline void advance_projectile(Projectile& p, double dt_s) {
  p.position += p.velocity * dt_s;
  ++p.age_frames;
}
bool touches_fortress(const Projectile& missile, const GameState& state);

// Number of frames until a missile in flight touches the fortress, assuming
// nothing else changes (0 = it touches during the next step). Empty if it
// leaves the arena first.
std::optional<int> frames_to_fortress(Projectile missile,
                                      const GameState& state);

// The missile a Fire command would launch from the current ship pose.
Projectile make_missile(const ShipState& ship, const SimConfig& config);

// FNV-1a over every field of the state, floats bitwise.
std::uint64_t state_hash(const GameState& state);

}  // namespace sf
