#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sf {

enum class EventKind : std::uint8_t {
  MissileFired,
  FortressHit,         // value = change in v (0 or +1)
  VulnerabilityReset,  // value = v before the reset (>= 1)
  FortressDestroyed,
  ShipDestroyed,
  ShellFired,
};

struct SimEvent {
  EventKind kind;
  int value = 0;

  static SimEvent missile_fired() { return {EventKind::MissileFired, 0}; }
  static SimEvent fortress_hit(int delta_v) {
    return {EventKind::FortressHit, delta_v};
  }
  static SimEvent vulnerability_reset(int from_v) {
    return {EventKind::VulnerabilityReset, from_v};
  }
  static SimEvent fortress_destroyed() {
    return {EventKind::FortressDestroyed, 0};
  }
  static SimEvent ship_destroyed() { return {EventKind::ShipDestroyed, 0}; }
  static SimEvent shell_fired() { return {EventKind::ShellFired, 0}; }

  bool operator==(const SimEvent&) const = default;
};

using EventList = std::vector<SimEvent>;

// Compact textual form used in episode logs: "fire", "hit:+1", "hit:0",
// "reset:7", "destroy", "ship_death", "shell".
std::string encode_event(const SimEvent& event);
// Throws FormatError on unknown text.
SimEvent decode_event(std::string_view text);

}  // namespace sf
