#include "sf/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "sf/errors.hpp"
#include "sf/observation.hpp"

namespace sf {

namespace {

std::string numbered(const char* prefix, long i, int width, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*ld%s", prefix, width, i, suffix);
  return buf;
}

template <typename F>
double mean_of(const std::vector<EpisodeRow>& rows, F f) {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const EpisodeRow& r : rows) s += f(r);
  return s / static_cast<double>(rows.size());
}

}  // namespace

double RunReport::mean_score() const {
  return mean_of(rows, [](const EpisodeRow& r) { return static_cast<double>(r.display_score); });
}

std::int64_t RunReport::best_score() const {
  if (rows.empty()) return 0;
  return std::max_element(rows.begin(), rows.end(),
                          [](const EpisodeRow& a, const EpisodeRow& b) {
                            return a.display_score < b.display_score;
                          })
      ->display_score;
}

double RunReport::mean_fortress_deaths() const {
  return mean_of(rows, [](const EpisodeRow& r) { return r.fortress_deaths; });
}

double RunReport::mean_ship_deaths() const {
  return mean_of(rows, [](const EpisodeRow& r) { return r.ship_deaths; });
}

double RunReport::mean_missiles() const {
  return mean_of(rows, [](const EpisodeRow& r) { return r.missiles_fired; });
}

void RunReport::write_table(std::ostream& os) const {
  char buf[160];
  if (!label.empty()) os << label << "  (seed " << seed << ")\n";
  std::snprintf(buf, sizeof buf, "%-8s %-20s %10s %15s %12s %9s\n", "Episode", "Seed", "Score",
                "Fortress Death", "Ship Death", "Missiles");
  os << buf;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EpisodeRow& r = rows[i];
    std::snprintf(buf, sizeof buf, "%-8zu %-20llu %10lld %15d %12d %9d\n", i,
                  static_cast<unsigned long long>(r.seed),
                  static_cast<long long>(r.display_score), r.fortress_deaths, r.ship_deaths,
                  r.missiles_fired);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%-12s %-12s %-15s %-11s %-9s\n", "Avg. Score", "Best Score",
                "Fortress Death", "Ship Death", "Missiles");
  os << buf;
  std::snprintf(buf, sizeof buf, "%-12.1f %-12lld %-15.3f %-11.3f %-9.1f\n", mean_score(),
                static_cast<long long>(best_score()), mean_fortress_deaths(), mean_ship_deaths(),
                mean_missiles());
  os << buf;
}

void RunReport::write_csv(std::ostream& os) const {
  os << "episode,seed,display_score,fortress_deaths,ship_deaths,missiles_fired\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EpisodeRow& r = rows[i];
    os << i << ',' << r.seed << ',' << r.display_score << ',' << r.fortress_deaths << ','
       << r.ship_deaths << ',' << r.missiles_fired << '\n';
  }
}

std::uint64_t episode_seed(std::uint64_t run_seed, int episode) {
  return mix_seed(mix_seed(run_seed, static_cast<std::uint64_t>(episode)), 0);
}

std::uint64_t agent_seed(std::uint64_t run_seed, int episode) {
  return mix_seed(run_seed, 0xa9e0 + static_cast<std::uint64_t>(episode));
}

RunReport simulate(const SimulateOptions& options) {
  if (options.episodes < 1) throw ConfigError("simulate needs at least one episode");
  options.env.sim.validate();
  RunReport report;
  report.seed = options.seed;
  Env env(options.env);
  env.set_recording(options.log_dir.has_value());
  std::vector<float> obs(env.observation_size());
  if (options.log_dir) std::filesystem::create_directories(*options.log_dir);

  for (int i = 0; i < options.episodes; ++i) {
    auto agent = make_agent(options.agent, agent_seed(options.seed, i), options.policy);
    const std::uint64_t seed = episode_seed(options.seed, i);
    env.reset_into(seed, obs);
    std::optional<std::filesystem::path> frames;
    if (options.frame_dir) {
      frames = *options.frame_dir / numbered("episode_", i, 3, "");
      std::filesystem::create_directories(*frames);
      write_pgm(*frames / numbered("frame_", 0, 5, ".pgm"), render_frame(env.state()));
    }
    double ret = 0.0;
    bool done = false;
    while (!done) {
      const StepOutcome o = env.step_into(static_cast<int>(agent->act(env.state())), obs);
      ret += o.reward;
      done = o.done;
      if (frames) {
        write_pgm(*frames / numbered("frame_", static_cast<long>(env.state().frame), 5, ".pgm"),
                  render_frame(env.state()));
      }
    }
    const StepInfo& info = env.info();
    report.rows.push_back(EpisodeRow{seed, info.display_score, info.fortress_deaths,
                                     info.ship_deaths, info.missiles_fired, ret});
    if (options.log_dir) {
      const auto path = *options.log_dir / numbered("episode_", i, 3, ".jsonl");
      std::ofstream os(path);
      if (!os) throw std::runtime_error("cannot open " + path.string());
      env.log().write(os);
    }
  }
  return report;
}

}  // namespace sf
