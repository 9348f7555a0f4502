#include "sf/reward.hpp"

#include <string>

#include "sf/errors.hpp"

namespace sf {

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::Sparse:
      return "sparse";
    case RewardKind::Dense:
      return "dense";
    case RewardKind::Aeci:
      return "aeci";
  }
  return "?";
}

RewardKind parse_reward_kind(std::string_view text) {
  if (text == "sparse") return RewardKind::Sparse;
  if (text == "dense") return RewardKind::Dense;
  if (text == "aeci") return RewardKind::Aeci;
  throw ConfigError("unknown reward scheme '" + std::string(text) +
                    "' (expected sparse, dense or aeci)");
}

RewardScheme make_scheme(RewardKind kind) {
  RewardScheme s;
  s.kind = kind;
  switch (kind) {
    case RewardKind::Sparse:
      break;
    case RewardKind::Dense:
      s.hit = 1.0;
      s.reset_penalty = -1.0;
      break;
    case RewardKind::Aeci:
      s.vuln_delta = 1.0;
      s.destruction_bonus = 2.0;
      break;
    default:
      throw ConfigError("unknown reward scheme");
  }
  return s;
}

double reward_from_events(std::span<const SimEvent> events,
                          const RewardScheme& s) {
  double r = 0.0;
  for (const SimEvent& e : events) {
    switch (e.kind) {
      case EventKind::MissileFired:
        r += s.missile;
        break;
      case EventKind::FortressHit:
        r += s.hit + s.vuln_delta * e.value;
        break;
      case EventKind::VulnerabilityReset:
        r += s.reset_penalty - s.vuln_delta * e.value;
        break;
      case EventKind::FortressDestroyed:
        r += s.destruction + s.destruction_bonus;
        break;
      case EventKind::ShipDestroyed:
        r += s.ship_death;
        break;
      case EventKind::ShellFired:
        break;
    }
  }
  return r;
}

ScoreState display_score_update(ScoreState score,
                                std::span<const SimEvent> events) {
  for (const SimEvent& e : events) {
    switch (e.kind) {
      case EventKind::MissileFired:
        ++score.missiles_fired;
        score.display_score += kMissilePoints;
        break;
      case EventKind::FortressDestroyed:
        ++score.fortress_deaths;
        score.display_score += kFortressPoints;
        break;
      case EventKind::ShipDestroyed:
        ++score.ship_deaths;
        score.display_score += kShipDeathPoints;
        break;
      default:
        break;
    }
  }
  return score;
}

}  // namespace sf
