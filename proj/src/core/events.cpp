#include "sf/events.hpp"

#include <charconv>

#include "sf/errors.hpp"

namespace sf {

std::string encode_event(const SimEvent& event) {
  switch (event.kind) {
    case EventKind::MissileFired:
      return "fire";
    case EventKind::FortressHit:
      return event.value > 0 ? "hit:+" + std::to_string(event.value)
                             : "hit:" + std::to_string(event.value);
    case EventKind::VulnerabilityReset:
      return "reset:" + std::to_string(event.value);
    case EventKind::FortressDestroyed:
      return "destroy";
    case EventKind::ShipDestroyed:
      return "ship_death";
    case EventKind::ShellFired:
      return "shell";
  }
  return "?";
}

SimEvent decode_event(std::string_view text) {
  if (text == "fire") return SimEvent::missile_fired();
  if (text == "destroy") return SimEvent::fortress_destroyed();
  if (text == "ship_death") return SimEvent::ship_destroyed();
  if (text == "shell") return SimEvent::shell_fired();
  auto parse_value = [&](std::string_view digits) {
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    int v = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw FormatError("bad event value in '" + std::string(text) + "'");
    }
    return v;
  };
  if (text.starts_with("hit:")) {
    return SimEvent::fortress_hit(parse_value(text.substr(4)));
  }
  if (text.starts_with("reset:")) {
    return SimEvent::vulnerability_reset(parse_value(text.substr(6)));
  }
  throw FormatError("unknown event '" + std::string(text) + "'");
}

}  // namespace sf
