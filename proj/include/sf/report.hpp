#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sf/agents.hpp"
#include "sf/env.hpp"

namespace sf {

struct EpisodeRow {
  std::uint64_t seed = 0;
  std::int64_t display_score = 0;
  int fortress_deaths = 0;
  int ship_deaths = 0;
  int missiles_fired = 0;
  double total_reward = 0.0;
};

// Per-episode rows plus aggregates; the aggregates are always recomputed
// from the rows.
struct RunReport {
  std::uint64_t seed = 0;
  std::string label;
  std::vector<EpisodeRow> rows;

  double mean_score() const;
  std::int64_t best_score() const;
  double mean_fortress_deaths() const;
  double mean_ship_deaths() const;
  double mean_missiles() const;

  // Aligned table with "Avg. Score", "Best Score" and "Fortress Death".
  void write_table(std::ostream& os) const;
  // One comma-separated row per episode.
  void write_csv(std::ostream& os) const;
};

struct SimulateOptions {
  EnvConfig env;
  AgentKind agent = AgentKind::Oracle;
  OraclePolicy policy;
  int episodes = 1;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> log_dir;    // episode_NNN.jsonl
  std::optional<std::filesystem::path> frame_dir;  // episode_NNN/frame_NNNNN.pgm
};

// Seeds of episode i (environment, then agent) for a run seed.
std::uint64_t episode_seed(std::uint64_t run_seed, int episode);
std::uint64_t agent_seed(std::uint64_t run_seed, int episode);

RunReport simulate(const SimulateOptions& options);

}  // namespace sf
