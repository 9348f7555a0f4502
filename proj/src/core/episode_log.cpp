#include "sf/episode_log.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sf/env.hpp"
#include "sf/errors.hpp"

namespace sf {
namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used, 16);
  if (used != s.size()) throw FormatError("bad hash '" + s + "'");
  return v;
}

json header_json(const LogHeader& h) {
  json cfg = json::object();
  for (const auto& [k, v] : to_key_values(h.config)) cfg[k] = v;
  return json{{"version", std::string(to_string(h.version))},
              {"seed", h.seed},
              {"scheme", std::string(to_string(h.scheme))},
              {"config_digest", h.config_digest},
              {"timestamp", h.timestamp},
              {"complete", h.complete},
              {"config", cfg}};
}

LogHeader header_from_json(const json& j) {
  LogHeader h;
  h.version = parse_game_version(j.at("version").get<std::string>());
  h.seed = j.at("seed").get<std::uint64_t>();
  h.scheme = parse_reward_kind(j.at("scheme").get<std::string>());
  h.config_digest = j.at("config_digest").get<std::string>();
  h.timestamp = j.value("timestamp", "");
  h.complete = j.value("complete", true);
  if (j.contains("config")) {
    for (const auto& [k, v] : j.at("config").items()) {
      set_config_value(h.config, k, v.get<std::string>());
    }
  } else {
    h.config.game_version = h.version;
  }
  return h;
}

json frame_json(const FrameRecord& r) {
  json ev = json::array();
  for (const auto& e : r.events) ev.push_back(encode_event(e));
  return json{{"f", r.frame}, {"a", r.action}, {"r", r.reward},
              {"ev", ev},     {"score", r.score}, {"h", hex64(r.state_hash)}};
}

FrameRecord frame_from_json(const json& j) {
  FrameRecord r;
  r.frame = j.at("f").get<std::int64_t>();
  r.action = j.at("a").get<int>();
  r.reward = j.at("r").get<double>();
  for (const auto& e : j.at("ev")) r.events.push_back(decode_event(e.get<std::string>()));
  r.score = j.at("score").get<std::int64_t>();
  if (j.contains("h")) r.state_hash = parse_hex64(j.at("h").get<std::string>());
  return r;
}

std::string describe(const FrameRecord& want, const FrameRecord& got) {
  std::ostringstream os;
  os << "frame " << want.frame << ": ";
  if (want.events != got.events) os << "events differ; ";
  if (want.reward != got.reward) {
    os << "reward logged " << want.reward << " replayed " << got.reward << "; ";
  }
  if (want.score != got.score) {
    os << "score logged " << want.score << " replayed " << got.score << "; ";
  }
  if (want.state_hash != 0 && want.state_hash != got.state_hash) {
    os << "state hash differs; ";
  }
  return os.str();
}

}  // namespace

void EpisodeLog::write(std::ostream& os) const {
  os << header_json(header).dump() << '\n';
  for (const auto& f : frames) os << frame_json(f).dump() << '\n';
}

std::string EpisodeLog::to_string() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

EpisodeLog EpisodeLog::read(std::istream& is) {
  EpisodeLog log;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  try {
    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (!have_header) {
        log.header = header_from_json(j);
        have_header = true;
      } else {
        log.frames.push_back(frame_from_json(j));
      }
    }
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError("episode log line " + std::to_string(line_no) + ": " +
                      e.what());
  }
  if (!have_header) throw FormatError("episode log has no header line");
  return log;
}

EpisodeLog EpisodeLog::parse(const std::string& text) {
  std::istringstream is(text);
  return read(is);
}

ReplayReport replay(const EpisodeLog& log, const EnvConfig& config) {
  const std::string digest = config_digest(config.sim);
  if (digest != log.header.config_digest) {
    throw IncompatibleError("config digest mismatch: log " +
                            log.header.config_digest + ", replay " + digest);
  }
  if (config.reward != log.header.scheme) {
    throw IncompatibleError("reward scheme mismatch: log " +
                            std::string(to_string(log.header.scheme)) +
                            ", replay " + std::string(to_string(config.reward)));
  }

  GameState state = new_game(config.sim, log.header.seed);
  const RewardScheme scheme = make_scheme(config.reward);
  ScoreState score;
  ReplayReport report;
  for (const FrameRecord& want : log.frames) {
    FrameRecord got;
    got.frame = state.frame;
    got.action = want.action;
    if (state.done()) {
      report.exact = false;
      report.first_divergence = want.frame;
      report.detail = "log continues past the end of the episode";
      return report;
    }
    if (!is_valid_action(config.sim.game_version, want.action)) {
      report.exact = false;
      report.first_divergence = want.frame;
      report.detail = "invalid action id " + std::to_string(want.action);
      return report;
    }
    got.events = step_sim(state, static_cast<Action>(want.action));
    got.reward = reward_from_events(got.events, scheme);
    score = display_score_update(score, got.events);
    got.score = score.display_score;
    got.state_hash = state_hash(state);
    FrameRecord cmp = got;
    if (want.state_hash == 0) cmp.state_hash = 0;
    if (want.frame != got.frame || !(cmp == want)) {
      report.exact = false;
      report.first_divergence = want.frame;
      report.detail = want.frame != got.frame
                          ? "frame index out of sequence at " +
                                std::to_string(want.frame)
                          : describe(want, got);
      return report;
    }
  }
  report.detail = "exact";
  return report;
}

ReplayReport replay(const EpisodeLog& log) {
  EnvConfig config;
  config.sim = log.header.config;
  config.reward = log.header.scheme;
  return replay(log, config);
}

}  // namespace sf
