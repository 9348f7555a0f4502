#pragma once

#include <cstdint>
#include <vector>

#include "sf/env.hpp"
#include "sf/rng.hpp"
#include "sf/sim.hpp"

namespace sf::test {

inline SimConfig autoturn_config() {
  SimConfig c;
  c.game_version = GameVersion::Autoturn;
  return c;
}

// A random action stream of the given length.
inline std::vector<int> random_actions(std::uint64_t seed, GameVersion version, int n) {
  SplitMix64 rng(seed);
  std::vector<int> out(n);
  for (int& a : out) a = static_cast<int>(rng.below(num_actions(version)));
  return out;
}

// Ship parked midway between the hexagons on the +x axis, at rest.
inline void park_ship(GameState& s) {
  s.ship.position = s.fortress_position() + Vec2{120.0, 0.0};
  s.ship.velocity = {0.0, 0.0};
  s.ship.alive = true;
}

}  // namespace sf::test
