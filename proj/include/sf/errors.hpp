#pragma once

#include <stdexcept>
#include <string>

namespace sf {

// Invalid SimConfig / EnvConfig / TrainConfig values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value outside the domain of an operation (bad action id, length mismatch).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operation called in the wrong episode phase.
class LifecycleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class EpisodeCompleteError : public LifecycleError {
 public:
  EpisodeCompleteError() : LifecycleError("episode is complete; call reset()") {}
};

// A log or checkpoint that cannot be used with the current configuration.
class IncompatibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sf
