#include "sf/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <vector>

#include "sf/errors.hpp"

namespace sf {

std::string_view to_string(GameVersion version) {
  return version == GameVersion::Autoturn ? "autoturn" : "youturn";
}

GameVersion parse_game_version(std::string_view text) {
  if (text == "autoturn") return GameVersion::Autoturn;
  if (text == "youturn") return GameVersion::Youturn;
  throw ConfigError("unknown game version '" + std::string(text) +
                    "' (expected autoturn or youturn)");
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invalid SimConfig: ") + what);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view key, std::string_view text) {
  double out = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + std::string(key) +
                      "' expects a number, got '" + std::string(text) + "'");
  }
  return out;
}

int parse_int(std::string_view key, std::string_view text) {
  int out = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + std::string(key) +
                      "' expects an integer, got '" + std::string(text) + "'");
  }
  return out;
}

struct Field {
  const char* key;
  double SimConfig::*real = nullptr;
  int SimConfig::*integer = nullptr;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      {"fps", nullptr, &SimConfig::fps},
      {"episode_seconds", nullptr, &SimConfig::episode_seconds},
      {"critical_interval_ms", &SimConfig::critical_interval_ms},
      {"vulnerability_threshold", nullptr, &SimConfig::vulnerability_threshold},
      {"world_size", &SimConfig::world_size},
      {"outer_hex_radius", &SimConfig::outer_hex_radius},
      {"inner_hex_radius", &SimConfig::inner_hex_radius},
      {"thrust_accel", &SimConfig::thrust_accel},
      {"ship_turn_rate", &SimConfig::ship_turn_rate},
      {"max_speed", &SimConfig::max_speed},
      {"missile_speed", &SimConfig::missile_speed},
      {"shell_speed", &SimConfig::shell_speed},
      {"fortress_turn_rate", &SimConfig::fortress_turn_rate},
      {"lock_tolerance_deg", &SimConfig::lock_tolerance_deg},
      {"shell_cooldown_ms", &SimConfig::shell_cooldown_ms},
      {"ship_radius", &SimConfig::ship_radius},
      {"fortress_radius", &SimConfig::fortress_radius},
      {"spawn_margin", &SimConfig::spawn_margin},
      {"spawn_speed", &SimConfig::spawn_speed},
  };
  return kFields;
}

}  // namespace

void SimConfig::validate() const {
  require(fps > 0, "fps must be > 0");
  require(episode_seconds > 0, "episode_seconds must be > 0");
  require(critical_interval_ms > 0, "critical_interval_ms must be > 0");
  require(vulnerability_threshold >= 1, "vulnerability_threshold must be >= 1");
  require(inner_hex_radius > 0, "inner_hex_radius must be > 0");
  require(inner_hex_radius < outer_hex_radius,
          "inner_hex_radius must be < outer_hex_radius");
  require(outer_hex_radius * 2.0 <= world_size,
          "outer hexagon must fit inside world_size");
  require(thrust_accel > 0, "thrust_accel must be > 0");
  require(ship_turn_rate > 0, "ship_turn_rate must be > 0");
  require(max_speed > 0, "max_speed must be > 0");
  require(missile_speed > 0, "missile_speed must be > 0");
  require(shell_speed > 0, "shell_speed must be > 0");
  require(fortress_turn_rate > 0, "fortress_turn_rate must be > 0");
  require(lock_tolerance_deg > 0, "lock_tolerance_deg must be > 0");
  require(shell_cooldown_ms > 0, "shell_cooldown_ms must be > 0");
  require(ship_radius > 0, "ship_radius must be > 0");
  require(fortress_radius > 0 && fortress_radius < inner_hex_radius,
          "fortress_radius must lie in (0, inner_hex_radius)");
  require(spawn_margin >= 0, "spawn_margin must be >= 0");
  require(spawn_speed >= 0, "spawn_speed must be >= 0");
  require(spawn_speed <= max_speed, "spawn_speed must be <= max_speed");
  // Spawn band must be non-empty: inner circumradius + margin inside the
  // outer apothem - margin.
  require(inner_hex_radius + spawn_margin <
              outer_hex_radius * 0.8660254037844386 - spawn_margin,
          "spawn_margin leaves no room between the hexagons");
}

std::map<std::string, std::string> to_key_values(const SimConfig& config) {
  std::map<std::string, std::string> out;
  out["game_version"] = std::string(to_string(config.game_version));
  for (const auto& f : fields()) {
    out[f.key] = f.real ? format_double(config.*(f.real))
                        : std::to_string(config.*(f.integer));
  }
  return out;
}

void set_config_value(SimConfig& config, std::string_view key,
                      std::string_view value) {
  if (key == "game_version") {
    config.game_version = parse_game_version(value);
    return;
  }
  for (const auto& f : fields()) {
    if (key != f.key) continue;
    if (f.real) {
      config.*(f.real) = parse_double(key, value);
    } else {
      config.*(f.integer) = parse_int(key, value);
    }
    return;
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string config_digest(const SimConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : to_key_values(config)) {
    for (char c : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sf
