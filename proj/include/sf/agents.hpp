#pragma once

#include <memory>
#include <string_view>

#include "sf/rng.hpp"
#include "sf/sim.hpp"

namespace sf {

// Scripted player with privileged access to GameState. It validates the
// game rules and gives a score ceiling; it is not a fair baseline.
struct OraclePolicy {
  // Minimum spacing of successive hits while building vulnerability.
  // 8 frames (266.7 ms at 30 FPS) is the smallest slow spacing at defaults.
  int fire_period_frames = 8;
  // Youturn: largest heading error at which the oracle fires or thrusts.
  double aim_tolerance_deg = 3.0;
  // React to shells predicted to pass within the ship radius.
  bool dodge = true;
  // Orbit the oracle holds around the fortress: radius and the look-ahead
  // (seconds) of its radial controller.
  double orbit_radius = 115.0;
  double orbit_lookahead_s = 0.4;
};

// Building: one missile whenever its predicted hit lands at least
// fire_period_frames (and at least the critical interval) after the latest
// hit or pending hit. Vulnerable: a slow first shot, then a second on the
// very next frame. Youturn turns toward the fortress first.
Action oracle_act(const GameState& state, const OraclePolicy& policy);

Action random_act(SplitMix64& rng, GameVersion version);
inline Action noop_act() { return Action::NoOp; }

class Agent {
 public:
  virtual ~Agent() = default;
  virtual Action act(const GameState& state) = 0;
};

enum class AgentKind { Oracle, Random, Noop };
AgentKind parse_agent_kind(std::string_view text);

std::unique_ptr<Agent> make_agent(AgentKind kind, std::uint64_t seed,
                                  const OraclePolicy& policy = {});

}  // namespace sf
