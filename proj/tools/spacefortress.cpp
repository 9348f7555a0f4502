#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sf/env.hpp"
#include "sf/errors.hpp"
#include "sf/report.hpp"
#include "sf/rl/train.hpp"
#include "sf/serve.hpp"

namespace fs = std::filesystem;
using namespace sf;

namespace {

constexpr int kExitFlags = 2;
constexpr int kExitDiverged = 3;

// Values shared by all subcommands. Command-line flags win over the config
// file, which wins over SF_SEED and built-in defaults.
struct Common {
  std::string config_path;
  std::string game = "youturn";
  std::string reward = "sparse";
  std::string obs = "feature";
  std::optional<std::uint64_t> seed;
  std::optional<double> interval_ms;
  std::map<std::string, std::string> file_values;
};

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    for (char& c : key) {
      if (c == '-') c = '_';
    }
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + " must be a non-negative integer, got '" + text + "'");
  }
}

// Keys the config file may set besides SimConfig fields, with the option
// that overrides each.
const std::map<std::string, std::string> kCommonKeys = {
    {"game", "--game"}, {"reward", "--reward"}, {"obs", "--obs"},
    {"seed", "--seed"}, {"interval_ms", "--interval-ms"}};

void add_common(CLI::App* cmd, Common& c, const std::string& default_obs = "feature") {
  c.obs = default_obs;
  cmd->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--game", c.game, "autoturn or youturn")
      ->check(CLI::IsMember({"autoturn", "youturn"}))
      ->capture_default_str();
  cmd->add_option("--reward", c.reward, "sparse, dense or aeci")
      ->check(CLI::IsMember({"sparse", "dense", "aeci"}))
      ->capture_default_str();
  cmd->add_option("--obs", c.obs, "pixel or feature")
      ->check(CLI::IsMember({"pixel", "feature"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "run seed (falls back to SF_SEED)");
  cmd->add_option("--interval-ms", c.interval_ms, "critical interval in ms")
      ->check(CLI::PositiveNumber);
}

// Resolves config file, flags and SF_SEED into an EnvConfig and a seed.
EnvConfig resolve(CLI::App* cmd, Common& c, std::uint64_t& seed) {
  EnvConfig env;
  if (!c.config_path.empty()) c.file_values = read_config_file(c.config_path);
  for (const auto& [key, value] : c.file_values) {
    auto common = kCommonKeys.find(key);
    if (common != kCommonKeys.end()) {
      if (cmd->count(common->second) > 0) continue;
      if (key == "game") c.game = value;
      if (key == "reward") c.reward = value;
      if (key == "obs") c.obs = value;
      if (key == "seed") c.seed = parse_u64(key, value);
      if (key == "interval_ms") c.interval_ms = std::stod(value);
      continue;
    }
    set_config_value(env.sim, key, value);
  }
  env.sim.game_version = parse_game_version(c.game);
  env.reward = parse_reward_kind(c.reward);
  env.obs = parse_obs_mode(c.obs);
  if (c.interval_ms) env.sim.critical_interval_ms = *c.interval_ms;
  env.sim.validate();

  if (c.seed) {
    seed = *c.seed;
  } else if (const char* s = std::getenv("SF_SEED"); s && *s) {
    seed = parse_u64("SF_SEED", s);
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  return env;
}

std::string step_name(std::int64_t step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "ckpt_%010lld.bin", static_cast<long long>(step));
  return buf;
}

int cmd_simulate(CLI::App* cmd, Common& c, const std::string& agent, int episodes,
                 const std::string& log_dir, const std::string& frames_dir,
                 const std::string& csv_path) {
  SimulateOptions o;
  o.env = resolve(cmd, c, o.seed);
  o.agent = parse_agent_kind(agent);
  o.episodes = episodes;
  if (!log_dir.empty()) o.log_dir = log_dir;
  if (!frames_dir.empty()) o.frame_dir = frames_dir;
  RunReport r = simulate(o);
  r.label = "simulate agent=" + agent + " game=" + std::string(to_string(o.env.sim.game_version)) +
            " reward=" + std::string(to_string(o.env.reward)) +
            " interval_ms=" + std::to_string(o.env.sim.critical_interval_ms);
  r.write_table(std::cout);
  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    if (!os) throw std::runtime_error("cannot open " + csv_path);
    r.write_csv(os);
  }
  return 0;
}

struct TrainFlags {
  std::string algo = "ppo";
  std::string arch = "feature-mlp";
  std::int64_t steps = 2'000'000;
  std::string out;
  int workers = 16;
  int rollout = 1024;
  int eval_episodes = 8;
  std::int64_t eval_interval = 250'000;
  std::optional<double> lr;
  std::optional<double> entropy;
};

void add_train_flags(CLI::App* cmd, TrainFlags& t) {
  cmd->add_option("--algo", t.algo, "ppo or a2c")
      ->check(CLI::IsMember({"ppo", "a2c"}))
      ->capture_default_str();
  cmd->add_option("--arch", t.arch, "sf-ff, sf-gru, feature-mlp or feature-gru")
      ->check(CLI::IsMember({"sf-ff", "sf-gru", "feature-mlp", "feature-gru"}))
      ->capture_default_str();
  cmd->add_option("--steps", t.steps, "environment steps over all workers")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--workers", t.workers, "parallel environments")->capture_default_str();
  cmd->add_option("--rollout", t.rollout, "steps per worker per update")->capture_default_str();
  cmd->add_option("--eval-episodes", t.eval_episodes)->capture_default_str();
  cmd->add_option("--eval-interval", t.eval_interval)->capture_default_str();
  cmd->add_option("--lr", t.lr, "learning rate (default per algorithm)");
  cmd->add_option("--entropy", t.entropy, "entropy coefficient (default per algorithm)");
}

rl::TrainConfig make_train_config(const TrainFlags& t, std::uint64_t seed) {
  rl::TrainConfig cfg = rl::TrainConfig::defaults(rl::parse_algo(t.algo));
  cfg.arch = nn::parse_arch_kind(t.arch);
  cfg.total_steps = t.steps;
  cfg.n_workers = t.workers;
  cfg.rollout_len = t.rollout;
  cfg.eval_episodes = t.eval_episodes;
  cfg.eval_interval = t.eval_interval;
  if (t.lr) cfg.lr = *t.lr;
  if (t.entropy) cfg.entropy_coef = *t.entropy;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

void print_row(const rl::CurveRow& r) {
  std::printf("steps=%lld mean_score=%.1f fortress_deaths=%.3f ship_deaths=%.3f missiles=%.1f\n",
              static_cast<long long>(r.steps), r.mean_score, r.fortress_deaths, r.ship_deaths,
              r.missiles);
  std::fflush(stdout);
}

int cmd_train(CLI::App* cmd, Common& c, TrainFlags& t) {
  std::uint64_t seed = 0;
  const EnvConfig env = resolve(cmd, c, seed);
  const rl::TrainConfig cfg = make_train_config(t, seed);
  const fs::path out = t.out;
  fs::create_directories(out);
  std::printf("train algo=%s arch=%s game=%s reward=%s seed=%llu steps=%lld\n", t.algo.c_str(),
              t.arch.c_str(), std::string(to_string(env.sim.game_version)).c_str(),
              std::string(to_string(env.reward)).c_str(), static_cast<unsigned long long>(seed),
              static_cast<long long>(cfg.total_steps));
  rl::TrainHooks hooks;
  hooks.on_eval = print_row;
  hooks.on_checkpoint = [&](const rl::Checkpoint& ck) { ck.save(out / step_name(ck.step)); };
  const rl::TrainResult r = rl::train(cfg, env, hooks);
  r.final_checkpoint.save(out / "final.bin");
  std::ofstream os(out / "curve.csv");
  rl::write_curve_csv(os, r.curve);
  std::printf("wrote %s\n", (out / "curve.csv").string().c_str());
  return 0;
}

int cmd_transfer(CLI::App* cmd, Common& c, TrainFlags& t, const std::string& from) {
  std::uint64_t seed = 0;
  resolve(cmd, c, seed);
  if (!c.interval_ms) throw ConfigError("transfer needs --interval-ms");
  const rl::Checkpoint ck = rl::Checkpoint::load(from);
  const rl::TrainConfig cfg = make_train_config(t, seed);
  std::printf("transfer from=%s %.17g ms -> %.17g ms seed=%llu\n", from.c_str(),
              ck.critical_interval_ms(), *c.interval_ms, static_cast<unsigned long long>(seed));
  const rl::TransferResult r = rl::transfer_init(ck, *c.interval_ms, cfg);
  const fs::path out = t.out.empty() ? fs::path("transfer.csv") : fs::path(t.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open " + out.string());
  rl::write_transfer_csv(os, r.rows);
  rl::write_transfer_csv(std::cout, r.rows);
  return 0;
}

int cmd_replay(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read log " + path);
  const EpisodeLog log = EpisodeLog::read(is);
  const ReplayReport rep = replay(log);
  if (rep.exact) {
    std::printf("exact (%zu frames, seed %llu%s)\n", log.frames.size(),
                static_cast<unsigned long long>(log.header.seed),
                log.header.complete ? "" : ", incomplete session");
    return 0;
  }
  std::printf("diverged at frame %lld: %s\n",
              static_cast<long long>(rep.first_divergence.value_or(-1)), rep.detail.c_str());
  return kExitDiverged;
}

int cmd_serve(CLI::App* cmd, Common& c, int port, bool lockstep, const std::string& log_dir,
              int sessions) {
  ServeOptions o;
  std::uint64_t seed = 0;
  o.env = resolve(cmd, c, seed);
  if (c.seed || std::getenv("SF_SEED")) o.seed = seed;
  o.port = static_cast<unsigned short>(port);
  o.lockstep = lockstep;
  o.log_dir = log_dir;
  SessionServer server(o);
  std::printf("listening on ws://%s:%u (%s)\n", o.address.c_str(), server.port(),
              lockstep ? "lockstep" : "realtime");
  std::fflush(stdout);
  for (int i = 0; sessions == 0 || i < sessions; ++i) {
    const SessionResult r = server.serve_one();
    std::printf("session %s score=%lld %s log=%s\n", r.complete ? "complete" : "abandoned",
                static_cast<long long>(r.final_score),
                r.complete ? (r.verified ? "verified" : "UNVERIFIED") : "",
                r.log_path.string().c_str());
    std::fflush(stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space Fortress simulator, agents and training harness"};
  app.require_subcommand(1);

  Common sim_c, train_c, transfer_c, serve_c;

  auto* sim = app.add_subcommand("simulate", "run scripted agents and report scores");
  add_common(sim, sim_c);
  std::string agent = "oracle";
  int episodes = 1;
  std::string log_dir, frames_dir, csv_path;
  sim->add_option("--agent", agent, "oracle, random or noop")
      ->check(CLI::IsMember({"oracle", "random", "noop"}))
      ->capture_default_str();
  sim->add_option("-n,--episodes", episodes, "episodes")->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim->add_option("--log-dir", log_dir, "write one episode log per episode");
  sim->add_option("--dump-frames", frames_dir, "write every rendered frame as PGM");
  sim->add_option("--csv", csv_path, "write per-episode rows as CSV");

  auto* train = app.add_subcommand("train", "train a policy");
  add_common(train, train_c);
  TrainFlags train_flags;
  add_train_flags(train, train_flags);
  train->add_option("--out", train_flags.out, "output directory")->required();

  auto* transfer = app.add_subcommand("transfer", "critical-interval transfer experiment");
  add_common(transfer, transfer_c);
  TrainFlags transfer_flags;
  add_train_flags(transfer, transfer_flags);
  std::string from;
  transfer->add_option("--from", from, "checkpoint to transfer from")
      ->required()
      ->check(CLI::ExistingFile);
  transfer->add_option("--out", transfer_flags.out, "paired curve CSV (default transfer.csv)");

  auto* rep = app.add_subcommand("replay", "re-simulate an episode log");
  std::string log_path;
  rep->add_option("log", log_path, "episode log (.jsonl)")->required()->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "websocket endpoint for human play");
  add_common(serve, serve_c);
  int port = 8765;
  bool lockstep = false;
  std::string serve_logs = ".";
  int sessions = 0;
  serve->add_option("--port", port)->check(CLI::Range(0, 65535))->capture_default_str();
  serve->add_flag("--lockstep", lockstep, "advance one frame per client input");
  serve->add_option("--log-dir", serve_logs, "where session logs go")->capture_default_str();
  serve->add_option("--sessions", sessions, "stop after this many sessions (0 = never)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFlags;
  }

  try {
    if (*sim) return cmd_simulate(sim, sim_c, agent, episodes, log_dir, frames_dir, csv_path);
    if (*train) return cmd_train(train, train_c, train_flags);
    if (*transfer) return cmd_transfer(transfer, transfer_c, transfer_flags, from);
    if (*rep) return cmd_replay(log_path);
    if (*serve) return cmd_serve(serve, serve_c, port, lockstep, serve_logs, sessions);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << '\n';
    return kExitFlags;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
