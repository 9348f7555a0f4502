#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "sf/events.hpp"

namespace sf {

enum class RewardKind : std::uint8_t { Sparse, Dense, Aeci };

std::string_view to_string(RewardKind kind);
// Accepts "sparse", "dense", "aeci". Throws ConfigError otherwise.
RewardKind parse_reward_kind(std::string_view text);

// Training reward constants. A frame's reward is the sum over its events:
//   MissileFired          missile
//   FortressHit(dv)       hit + vuln_delta * dv
//   VulnerabilityReset(k) reset_penalty - vuln_delta * k
//   FortressDestroyed     destruction + destruction_bonus
//   ShipDestroyed         ship_death
struct RewardScheme {
  RewardKind kind = RewardKind::Sparse;
  double destruction = 1.0;
  double ship_death = -1.0;
  double missile = -0.05;
  double hit = 0.0;
  double reset_penalty = 0.0;
  double vuln_delta = 0.0;
  double destruction_bonus = 0.0;
};

RewardScheme make_scheme(RewardKind kind);

double reward_from_events(std::span<const SimEvent> events,
                          const RewardScheme& scheme);

// Human-facing score: +100 per fortress destruction, -100 per ship death,
// -2 per missile.
inline constexpr int kFortressPoints = 100;
inline constexpr int kShipDeathPoints = -100;
inline constexpr int kMissilePoints = -2;

struct ScoreState {
  std::int64_t display_score = 0;
  int fortress_deaths = 0;
  int ship_deaths = 0;
  int missiles_fired = 0;

  std::int64_t recomputed() const {
    return std::int64_t{kFortressPoints} * fortress_deaths +
           std::int64_t{kShipDeathPoints} * ship_deaths +
           std::int64_t{kMissilePoints} * missiles_fired;
  }
  bool operator==(const ScoreState&) const = default;
};

ScoreState display_score_update(ScoreState score,
                                std::span<const SimEvent> events);

}  // namespace sf
