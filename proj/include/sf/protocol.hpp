#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sf/env.hpp"

// JSON messages exchanged with the browser client.
//   server -> client  {"t":"hello",...} once, {"t":"frame",...} per frame,
//                     {"t":"end","score":S,...} when the episode ends,
//                     {"t":"error","msg":...} for rejected input
//   client -> server  {"t":"input","f":N,"a":id}
namespace sf::protocol {

struct InputMessage {
  std::int64_t frame = 0;
  int action = 0;
};

std::string hello_message(const Env& env, bool lockstep);
std::string frame_message(const Env& env);
std::string end_message(const Env& env, bool verified);
std::string error_message(std::string_view what);

// Throws FormatError on anything but a well-formed input message.
InputMessage parse_input(std::string_view text);
std::string input_message(const InputMessage& msg);

// One action per frame from held keys: Fire > Thrust > Turn > NoOp.
// Autoturn ignores the turn keys.
Action action_from_keys(GameVersion version, bool fire, bool thrust, bool left, bool right);

}  // namespace sf::protocol
