#include "sf/rl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "sf/errors.hpp"

namespace sf::rl {

namespace {

constexpr char kMagic[8] = {'S', 'F', 'C', 'K', 'P', 'T', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw FormatError("checkpoint truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

Checkpoint Checkpoint::capture(nn::PolicyNet& net, std::int64_t step, const EnvConfig& env) {
  Checkpoint c;
  c.spec = net.spec();
  c.step = step;
  c.env = env;
  c.config_digest = sf::config_digest(env.sim);
  for (const nn::Param* p : net.params()) {
    c.arrays.push_back(NamedArray{p->name, p->shape, p->value});
  }
  return c;
}

void Checkpoint::apply(nn::PolicyNet& net) const {
  if (!(net.spec() == spec)) {
    throw IncompatibleError("checkpoint was trained for a different network (" +
                            std::string(nn::to_string(spec.kind)) + ", " +
                            std::to_string(spec.num_actions) + " actions, obs " +
                            std::to_string(spec.obs_size) + ")");
  }
  auto params = net.params();
  if (params.size() != arrays.size()) throw IncompatibleError("checkpoint array count differs");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i]->name != arrays[i].name || params[i]->shape != arrays[i].shape ||
        params[i]->size() != arrays[i].values.size()) {
      throw IncompatibleError("checkpoint array mismatch at " + arrays[i].name);
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = arrays[i].values;
}

void Checkpoint::write(std::ostream& os) const {
  nlohmann::json h;
  h["spec"] = {{"kind", std::string(nn::to_string(spec.kind))},
               {"num_actions", spec.num_actions},
               {"obs_size", spec.obs_size},
               {"hidden", spec.hidden}};
  h["step"] = step;
  h["config_digest"] = config_digest;
  h["critical_interval_ms"] = env.sim.critical_interval_ms;
  h["env"] = {{"reward", std::string(to_string(env.reward))},
              {"obs", std::string(to_string(env.obs))},
              {"include_clock", env.include_clock},
              {"sim", to_key_values(env.sim)}};
  nlohmann::json arr = nlohmann::json::array();
  for (const NamedArray& a : arrays) arr.push_back({{"name", a.name}, {"shape", a.shape}});
  h["arrays"] = arr;
  const std::string header = h.dump();

  os.write(kMagic, sizeof kMagic);
  put_u64(os, header.size());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const NamedArray& a : arrays) {
    for (double v : a.values) put_u64(os, std::bit_cast<std::uint64_t>(v));
  }
  if (!os) throw std::runtime_error("checkpoint write failed");
}

Checkpoint Checkpoint::read(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw FormatError("not a checkpoint (bad magic)");
  }
  const std::uint64_t len = get_u64(is);
  if (len > (1u << 26)) throw FormatError("checkpoint header too large");
  std::string header(len, '\0');
  if (!is.read(header.data(), static_cast<std::streamsize>(len))) {
    throw FormatError("checkpoint header truncated");
  }
  Checkpoint c;
  try {
    const auto h = nlohmann::json::parse(header);
    const auto& s = h.at("spec");
    c.spec.kind = nn::parse_arch_kind(s.at("kind").get<std::string>());
    c.spec.num_actions = s.at("num_actions").get<int>();
    c.spec.obs_size = s.at("obs_size").get<int>();
    c.spec.hidden = s.at("hidden").get<int>();
    c.step = h.at("step").get<std::int64_t>();
    c.config_digest = h.at("config_digest").get<std::string>();
    const auto& e = h.at("env");
    c.env.reward = parse_reward_kind(e.at("reward").get<std::string>());
    c.env.obs = parse_obs_mode(e.at("obs").get<std::string>());
    c.env.include_clock = e.at("include_clock").get<bool>();
    for (const auto& [k, v] : e.at("sim").items()) {
      set_config_value(c.env.sim, k, v.get<std::string>());
    }
    for (const auto& a : h.at("arrays")) {
      NamedArray na;
      na.name = a.at("name").get<std::string>();
      na.shape = a.at("shape").get<std::vector<int>>();
      c.arrays.push_back(std::move(na));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("bad checkpoint header: ") + ex.what());
  }
  if (sf::config_digest(c.env.sim) != c.config_digest) {
    throw FormatError("checkpoint config digest does not match its embedded config");
  }
  for (NamedArray& a : c.arrays) {
    std::size_t n = 1;
    for (int d : a.shape) {
      if (d < 0) throw FormatError("negative dimension in checkpoint");
      n *= static_cast<std::size_t>(d);
    }
    a.values.resize(n);
    for (double& v : a.values) v = std::bit_cast<double>(get_u64(is));
  }
  return c;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  write(os);
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read(is);
}

}  // namespace sf::rl
