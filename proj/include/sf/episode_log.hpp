#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sf/config.hpp"
#include "sf/events.hpp"
#include "sf/reward.hpp"

namespace sf {

struct EnvConfig;

struct LogHeader {
  GameVersion version = GameVersion::Youturn;
  std::uint64_t seed = 0;
  RewardKind scheme = RewardKind::Sparse;
  std::string config_digest;
  std::string timestamp;  // ISO-8601 UTC
  SimConfig config;       // full config so a log can be replayed standalone
  bool complete = true;   // false for abandoned sessions
};

struct FrameRecord {
  std::int64_t frame = 0;
  int action = 0;
  double reward = 0.0;
  EventList events;
  std::int64_t score = 0;
  std::uint64_t state_hash = 0;

  bool operator==(const FrameRecord&) const = default;
};

// Line-delimited JSON: one header object, then one object per frame
//   {"f":12,"a":1,"r":-0.05,"ev":["fire"],"score":-2,"h":"..."}
struct EpisodeLog {
  LogHeader header;
  std::vector<FrameRecord> frames;

  void write(std::ostream& os) const;
  std::string to_string() const;
  // Throws FormatError on malformed input.
  static EpisodeLog read(std::istream& is);
  static EpisodeLog parse(const std::string& text);
};

struct ReplayReport {
  bool exact = true;
  std::optional<std::int64_t> first_divergence;  // frame index
  std::string detail;                            // "exact" or what differed
};

// Re-simulates the logged actions from header.seed under `config` and
// compares every frame's events, reward, score and state hash. Throws
// IncompatibleError when the config digest, version or scheme differ from
// the header.
ReplayReport replay(const EpisodeLog& log, const EnvConfig& config);

// Replays under the config stored in the header.
ReplayReport replay(const EpisodeLog& log);

}  // namespace sf
