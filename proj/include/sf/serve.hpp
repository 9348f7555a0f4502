#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "sf/env.hpp"

namespace sf {

struct ServeOptions {
  EnvConfig env;
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  std::optional<std::uint64_t> seed;
  // Realtime paces the game at the configured FPS and applies the most
  // recent input; lockstep advances one frame per input stamped with the
  // current frame, for scripted clients.
  bool lockstep = false;
  std::filesystem::path log_dir = ".";
};

struct SessionResult {
  EpisodeLog log;
  bool complete = false;
  std::int64_t final_score = 0;
  bool verified = false;  // server-side replay of the log was exact
  std::filesystem::path log_path;
};

// Websocket endpoint for one player at a time. The server owns the
// simulation; clients only send inputs.
class SessionServer {
 public:
  explicit SessionServer(ServeOptions options);
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  unsigned short port() const;

  // Accepts one connection and plays one episode, returning when the
  // episode ends or the client disconnects. The session log is written to
  // log_dir/session_<seed>.jsonl (header complete=false when abandoned).
  SessionResult serve_one();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sf
