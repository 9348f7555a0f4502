#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace sf {

enum class GameVersion : std::uint8_t { Autoturn, Youturn };

std::string_view to_string(GameVersion version);
GameVersion parse_game_version(std::string_view text);

// Geometry and dynamics of one game. Distances are world units on a
// world_size x world_size square with y pointing down; angles are degrees,
// heading 0 points along +x and grows clockwise on screen.
struct SimConfig {
  GameVersion game_version = GameVersion::Youturn;
  int fps = 30;
  int episode_seconds = 180;
  double critical_interval_ms = 250.0;
  int vulnerability_threshold = 10;

  double world_size = 420.0;
  double outer_hex_radius = 200.0;
  double inner_hex_radius = 40.0;

  double thrust_accel = 80.0;   // units/s^2
  double ship_turn_rate = 180.0;  // deg/s
  double max_speed = 120.0;     // units/s
  double missile_speed = 300.0;
  double shell_speed = 150.0;

  double fortress_turn_rate = 90.0;  // deg/s
  double lock_tolerance_deg = 10.0;
  double shell_cooldown_ms = 1000.0;

  double ship_radius = 6.0;
  double fortress_radius = 18.0;
  // Spawn clearance from both hexagons, and the tangential drift a fresh
  // ship starts with.
  double spawn_margin = 15.0;
  double spawn_speed = 50.0;

  std::int64_t episode_frames() const {
    return static_cast<std::int64_t>(fps) * episode_seconds;
  }
  double frame_ms() const { return 1000.0 / fps; }

  // Throws ConfigError naming the first violated bound.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

// Flat key/value view of every SimConfig field. Keys are the field names
// ("fps", "outer_hex_radius", "game_version", ...).
std::map<std::string, std::string> to_key_values(const SimConfig& config);

// Sets one field from its textual form. Throws ConfigError on an unknown key
// or unparsable value.
void set_config_value(SimConfig& config, std::string_view key,
                      std::string_view value);

// Stable 16-hex-digit digest of the canonical key/value form.
std::string config_digest(const SimConfig& config);

}  // namespace sf
