#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sf/env.hpp"
#include "sf/nn/policy.hpp"

namespace sf::rl {

struct NamedArray {
  std::string name;
  std::vector<int> shape;
  std::vector<double> values;
  bool operator==(const NamedArray&) const = default;
};

// Binary layout: the 8-byte magic "SFCKPT01", a little-endian u64 header
// length, a JSON header (spec, step, environment, array names and shapes),
// then every array's values as little-endian IEEE-754 doubles in header
// order.
struct Checkpoint {
  nn::PolicySpec spec;
  std::int64_t step = 0;
  EnvConfig env;
  std::string config_digest;
  std::vector<NamedArray> arrays;

  double critical_interval_ms() const { return env.sim.critical_interval_ms; }

  static Checkpoint capture(nn::PolicyNet& net, std::int64_t step, const EnvConfig& env);
  // Throws IncompatibleError if the spec or any array name/shape differs.
  void apply(nn::PolicyNet& net) const;

  void write(std::ostream& os) const;
  static Checkpoint read(std::istream& is);
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  bool operator==(const Checkpoint&) const = default;
};

}  // namespace sf::rl
