#include "sf/protocol.hpp"

#include <json.hpp>

#include "sf/errors.hpp"

namespace sf::protocol {

using nlohmann::json;

std::string hello_message(const Env& env, bool lockstep) {
  const SimConfig& c = env.config().sim;
  json j = {{"t", "hello"},
            {"version", std::string(to_string(c.game_version))},
            {"actions", env.num_actions()},
            {"fps", c.fps},
            {"frames", c.episode_frames()},
            {"seed", env.info().seed},
            {"threshold", c.vulnerability_threshold},
            {"world", c.world_size},
            {"mode", lockstep ? "lockstep" : "realtime"}};
  return j.dump();
}

std::string frame_message(const Env& env) {
  const GameState& s = env.state();
  const Vec2 fp = s.fortress_position();
  json proj = json::array();
  for (const Projectile& p : s.projectiles) {
    proj.push_back({{"k", p.kind == ProjectileKind::Missile ? "m" : "s"},
                    {"x", p.position.x},
                    {"y", p.position.y}});
  }
  const double remaining =
      static_cast<double>(s.config.episode_frames() - s.frame) / s.config.fps;
  json j = {{"t", "frame"},
            {"f", s.frame},
            {"ship",
             {{"x", s.ship.position.x},
              {"y", s.ship.position.y},
              {"h", s.ship.heading_deg},
              {"alive", s.ship.alive}}},
            {"fortress",
             {{"x", fp.x}, {"y", fp.y}, {"h", s.fortress.heading_deg}, {"alive", s.fortress.alive}}},
            {"proj", proj},
            {"v", s.vuln.v},
            {"score", env.info().display_score},
            {"clock", remaining}};
  return j.dump();
}

std::string end_message(const Env& env, bool verified) {
  const StepInfo& i = env.info();
  json j = {{"t", "end"},
            {"score", i.display_score},
            {"fortress_deaths", i.fortress_deaths},
            {"ship_deaths", i.ship_deaths},
            {"missiles", i.missiles_fired},
            {"frames", i.frame},
            {"verified", verified}};
  return j.dump();
}

std::string error_message(std::string_view what) {
  return json{{"t", "error"}, {"msg", std::string(what)}}.dump();
}

InputMessage parse_input(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("input is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("t") || j["t"] != "input") {
    throw FormatError("expected {\"t\":\"input\",...}");
  }
  if (!j.contains("f") || !j["f"].is_number_integer() || !j.contains("a") ||
      !j["a"].is_number_integer()) {
    throw FormatError("input needs integer fields f and a");
  }
  return InputMessage{j["f"].get<std::int64_t>(), j["a"].get<int>()};
}

std::string input_message(const InputMessage& msg) {
  return json{{"t", "input"}, {"f", msg.frame}, {"a", msg.action}}.dump();
}

Action action_from_keys(GameVersion version, bool fire, bool thrust, bool left, bool right) {
  if (fire) return Action::Fire;
  if (thrust) return Action::ThrustForward;
  if (version == GameVersion::Youturn) {
    if (left && !right) return Action::ThrustLeft;
    if (right && !left) return Action::ThrustRight;
  }
  return Action::NoOp;
}

}  // namespace sf::protocol
