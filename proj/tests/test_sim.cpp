#include <doctest.h>

#include <cmath>
#include <string>

#include "helpers.hpp"
#include "sf/agents.hpp"
#include "sf/errors.hpp"
#include "sf/sim.hpp"

using namespace sf;

namespace {

bool has(const EventList& events, EventKind kind) {
  for (const SimEvent& e : events) {
    if (e.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("core-sim") {

TEST_CASE("config defaults and episode length") {
  SimConfig c;
  CHECK(c.fps == 30);
  CHECK(c.episode_frames() == 5400);
  CHECK(c.critical_interval_ms == 250.0);
  CHECK(c.vulnerability_threshold == 10);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("invalid configs name the violated bound") {
  SimConfig c;
  c.inner_hex_radius = c.outer_hex_radius;
  try {
    new_game(c, 1);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("inner_hex_radius") != std::string::npos);
  }
  SimConfig d;
  d.fps = 0;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  SimConfig t;
  t.vulnerability_threshold = 0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  SimConfig s;
  s.missile_speed = -1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("new_game is deterministic and starts clean") {
  const GameState a = new_game(SimConfig{}, 7);
  const GameState b = new_game(SimConfig{}, 7);
  CHECK(a == b);
  CHECK(state_hash(a) == state_hash(b));
  CHECK(a.vuln.v == 0);
  CHECK(a.tallies.fortress_deaths == 0);
  CHECK(a.projectiles.empty());
  CHECK(a.frame == 0);
  CHECK(in_flight_zone(a.ship.position, a.config));
  CHECK(new_game(SimConfig{}, 8).ship.position != a.ship.position);
}

TEST_CASE("Youturn turn action rotates in place") {
  GameState s = new_game(SimConfig{}, 3);
  test::park_ship(s);
  s.ship.heading_deg = 90.0;
  const Vec2 before = s.ship.position;
  step_sim(s, Action::ThrustLeft);
  CHECK(s.ship.heading_deg == doctest::Approx(84.0));  // 180 deg/s over 1/30 s
  CHECK(s.ship.position == before);
  step_sim(s, Action::ThrustRight);
  CHECK(s.ship.heading_deg == doctest::Approx(90.0));
}

TEST_CASE("NoOp keeps velocity and advances position by velocity * dt") {
  GameState s = new_game(SimConfig{}, 4);
  test::park_ship(s);
  s.ship.velocity = {0.0, 30.0};
  const Vec2 p0 = s.ship.position;
  step_sim(s, Action::NoOp);
  CHECK(s.ship.velocity == Vec2{0.0, 30.0});
  CHECK(s.ship.position.x == doctest::Approx(p0.x));
  CHECK(s.ship.position.y == doctest::Approx(p0.y + 1.0));
}

TEST_CASE("thrust accelerates along the heading and respects max speed") {
  GameState s = new_game(SimConfig{}, 4);
  test::park_ship(s);
  s.ship.heading_deg = 0.0;
  step_sim(s, Action::ThrustForward);
  CHECK(s.ship.velocity.x == doctest::Approx(80.0 / 30.0));
  s.ship.velocity = {119.9, 0.0};
  s.ship.position = s.fortress_position() + Vec2{-150.0, 0.0};
  step_sim(s, Action::ThrustForward);
  CHECK(length(s.ship.velocity) == doctest::Approx(120.0));
}

TEST_CASE("Autoturn overwrites the heading toward the fortress every frame") {
  GameState s = new_game(test::autoturn_config(), 5);
  for (int i = 0; i < 20; ++i) {
    step_sim(s, Action::ThrustForward);
    if (!s.ship.alive) break;
    CHECK(s.ship.heading_deg ==
          doctest::Approx(bearing_degrees(s.ship.position, s.fortress_position())));
  }
}

TEST_CASE("crossing the outer wall kills the ship, which respawns with v preserved") {
  GameState s = new_game(SimConfig{}, 6);
  s.ship.position = s.fortress_position() + Vec2{170.0, 0.0};
  s.ship.velocity = {120.0, 0.0};
  s.vuln.v = 5;
  s.vuln.last_hit_frame = 0;
  bool died = false;
  for (int i = 0; i < 60 && !died; ++i) died = has(step_sim(s, Action::NoOp), EventKind::ShipDestroyed);
  REQUIRE(died);
  CHECK(!s.ship.alive);
  CHECK(s.tallies.ship_deaths == 1);
  step_sim(s, Action::NoOp);
  CHECK(s.ship.alive);
  CHECK(in_flight_zone(s.ship.position, s.config));
  CHECK(s.vuln.v == 5);
}

TEST_CASE("hitting the inner hexagon is also a wall death") {
  GameState s = new_game(SimConfig{}, 6);
  s.ship.position = s.fortress_position() + Vec2{45.0, 0.0};
  s.ship.velocity = {-120.0, 0.0};
  bool died = false;
  for (int i = 0; i < 10 && !died; ++i) died = has(step_sim(s, Action::NoOp), EventKind::ShipDestroyed);
  CHECK(died);
}

TEST_CASE("fortress_update: lock, turn limit and cooldown") {
  SimConfig c;
  const Vec2 center{210.0, 210.0};
  ShipState ship;
  ship.position = center + Vec2{100.0, 0.0};  // bearing 0

  FortressState f;
  f.heading_deg = 0.0;
  f.frames_since_shell = 100;
  auto [locked, shell] = fortress_update(f, ship, c);
  REQUIRE(shell.has_value());
  CHECK(shell->kind == ProjectileKind::Shell);
  CHECK(shell->velocity.x == doctest::Approx(150.0));
  CHECK(locked.frames_since_shell == 0);

  f.heading_deg = 270.0;  // 90 degrees off
  auto [turned, none] = fortress_update(f, ship, c);
  CHECK(!none.has_value());
  CHECK(turned.heading_deg == doctest::Approx(273.0));

  f.heading_deg = 0.0;
  f.frames_since_shell = 5;  // 200 ms after the last shell
  auto [cooling, blocked] = fortress_update(f, ship, c);
  CHECK(!blocked.has_value());
  CHECK(cooling.frames_since_shell == 6);
}

TEST_CASE("a fortress shell kills the ship") {
  GameState s = new_game(SimConfig{}, 9);
  test::park_ship(s);
  Projectile shell;
  shell.kind = ProjectileKind::Shell;
  shell.position = s.ship.position - Vec2{4.0, 0.0};
  shell.velocity = {150.0, 0.0};
  s.projectiles.push_back(shell);
  const auto contacts = collision_check(s);
  REQUIRE(contacts.size() == 1);
  CHECK(contacts[0].kind == ContactKind::ShellShip);
  const EventList ev = step_sim(s, Action::NoOp);
  CHECK(has(ev, EventKind::ShipDestroyed));
}

TEST_CASE("collision_check: no contacts for a parked ship and empty arena") {
  GameState s = new_game(SimConfig{}, 10);
  test::park_ship(s);
  CHECK(collision_check(s).empty());
}

TEST_CASE("missile hits go through update_vulnerability at the hit frame") {
  GameState s = new_game(test::autoturn_config(), 11);
  test::park_ship(s);
  s.fortress.frames_since_shell = -100000;  // keep the fortress quiet
  step_sim(s, Action::Fire);
  const auto n = frames_to_fortress(s.projectiles.front(), s);
  REQUIRE(n.has_value());
  EventList all;
  for (int i = 0; i < *n + 1; ++i) {
    const EventList ev = step_sim(s, Action::NoOp);
    all.insert(all.end(), ev.begin(), ev.end());
  }
  CHECK(has(all, EventKind::FortressHit));
  CHECK(s.vuln.v == 1);
  CHECK(s.projectiles.empty());
}

TEST_CASE("destruction resets v and the episode continues") {
  GameState s = new_game(test::autoturn_config(), 12);
  s.frame = 1000;
  s.vuln.v = 10;
  s.vuln.last_hit_frame = 999;
  Projectile m;
  m.position = s.fortress_position() + Vec2{20.0, 0.0};
  m.velocity = {-300.0, 0.0};
  s.projectiles.push_back(m);
  test::park_ship(s);
  const EventList ev = step_sim(s, Action::NoOp);
  CHECK(has(ev, EventKind::FortressDestroyed));
  CHECK(s.vuln.v == 0);
  CHECK(s.tallies.fortress_deaths == 1);
  CHECK(!s.done());
  step_sim(s, Action::NoOp);
  CHECK(s.fortress.alive);

  resolve_fortress_destruction(s);
  CHECK(s.tallies.fortress_deaths == 2);
}

TEST_CASE("destruction on the final frame is counted before the episode ends") {
  GameState s = new_game(test::autoturn_config(), 13);
  s.frame = s.config.episode_frames() - 1;
  s.vuln.v = 10;
  s.vuln.last_hit_frame = s.frame - 2;
  Projectile m;
  m.position = s.fortress_position() + Vec2{20.0, 0.0};
  m.velocity = {-300.0, 0.0};
  s.projectiles.push_back(m);
  test::park_ship(s);
  const EventList ev = step_sim(s, Action::NoOp);
  CHECK(has(ev, EventKind::FortressDestroyed));
  CHECK(s.tallies.fortress_deaths == 1);
  CHECK(s.done());
  CHECK_THROWS_AS(step_sim(s, Action::NoOp), EpisodeCompleteError);
}

TEST_CASE("invalid actions are rejected") {
  GameState s = new_game(test::autoturn_config(), 1);
  CHECK_THROWS_AS(step_sim(s, Action::ThrustLeft), DomainError);
  CHECK_THROWS_AS(step_sim(s, static_cast<Action>(9)), DomainError);
  CHECK(s.frame == 0);
}

TEST_CASE("respawn_ship: valid, deterministic, uniform heading") {
  SimConfig c;
  SplitMix64 a(99), b(99);
  CHECK(respawn_ship(a, c) == respawn_ship(b, c));
  double sum = 0.0;
  SplitMix64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const ShipState s = respawn_ship(rng, c);
    CHECK(in_flight_zone(s.position, c));
    CHECK(s.heading_deg >= 0.0);
    CHECK(s.heading_deg < 360.0);
    sum += s.heading_deg;
  }
  CHECK(std::abs(sum / 1000.0 - 180.0) < 10.0);
}

TEST_CASE("same seed and actions give the same state hash at every frame") {
  for (GameVersion version : {GameVersion::Autoturn, GameVersion::Youturn}) {
    SimConfig c;
    c.game_version = version;
    const auto actions = test::random_actions(77, version, 2000);
    GameState a = new_game(c, 77), b = new_game(c, 77);
    for (int act : actions) {
      CHECK(step_sim(a, static_cast<Action>(act)) == step_sim(b, static_cast<Action>(act)));
      REQUIRE(state_hash(a) == state_hash(b));
    }
    CHECK(a == b);
  }
}

TEST_CASE("state_hash covers every field") {
  const GameState base = new_game(SimConfig{}, 1);
  auto differs = [&](auto mutate) {
    GameState s = base;
    mutate(s);
    return state_hash(s) != state_hash(base);
  };
  CHECK(differs([](GameState& s) { s.frame++; }));
  CHECK(differs([](GameState& s) { s.rng(); }));
  CHECK(differs([](GameState& s) { s.ship.heading_deg += 1e-12; }));
  CHECK(differs([](GameState& s) { s.fortress.frames_since_shell++; }));
  CHECK(differs([](GameState& s) { s.vuln.last_hit_frame = 0; }));
  CHECK(differs([](GameState& s) { s.tallies.missiles_fired++; }));
  CHECK(differs([](GameState& s) { s.projectiles.push_back({}); }));
  CHECK(differs([](GameState& s) { s.config.thrust_accel += 1; }));
}

TEST_CASE("invariants hold along random play") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (GameVersion version : {GameVersion::Autoturn, GameVersion::Youturn}) {
      SimConfig c;
      c.game_version = version;
      GameState s = new_game(c, seed);
      SplitMix64 rng(seed * 31);
      int prev_v = 0;
      while (!s.done()) {
        const double heading = s.fortress.heading_deg;
        const EventList ev = step_sim(s, random_act(rng, version));
        CHECK(std::abs(angle_delta(heading, s.fortress.heading_deg)) <= 3.0 + 1e-9);
        if (s.ship.alive) REQUIRE(in_flight_zone(s.ship.position, c));
        REQUIRE(s.vuln.v <= c.vulnerability_threshold);
        REQUIRE(s.vuln.v >= 0);
        const bool dropped = has(ev, EventKind::VulnerabilityReset) ||
                             has(ev, EventKind::FortressDestroyed);
        if (!dropped) REQUIRE(s.vuln.v >= prev_v);
        for (const SimEvent& e : ev) {
          if (e.kind == EventKind::VulnerabilityReset) REQUIRE(e.value >= 1);
        }
        prev_v = s.vuln.v;
      }
      CHECK(s.frame == 5400);
    }
  }
}

TEST_CASE("frictionless: speed is constant under NoOp without collisions") {
  GameState s = new_game(SimConfig{}, 21);
  test::park_ship(s);
  s.ship.position = s.fortress_position() + Vec2{0.0, -100.0};
  s.ship.velocity = {7.0, 0.5};
  s.fortress.frames_since_shell = -100000;
  double speed = length(s.ship.velocity);
  for (int i = 0; i < 200; ++i) {
    step_sim(s, Action::NoOp);
    REQUIRE(s.ship.alive);
    const double now = length(s.ship.velocity);
    CHECK(std::abs(now - speed) <= 1e-9 * speed);
    speed = now;
  }
}

TEST_CASE("one missile per Fire, projectiles leave the arena") {
  GameState s = new_game(SimConfig{}, 22);
  test::park_ship(s);
  s.ship.heading_deg = 0.0;  // pointing away from the fortress
  s.fortress.frames_since_shell = -100000;
  step_sim(s, Action::Fire);
  CHECK(s.projectiles.size() == 1);
  CHECK(s.tallies.missiles_fired == 1);
  for (int i = 0; i < 30; ++i) step_sim(s, Action::NoOp);
  CHECK(s.projectiles.empty());
}

}  // TEST_SUITE
