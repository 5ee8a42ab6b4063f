#pragma once

#include <stdexcept>
#include <string>

namespace sealci {

/// Bad or inconsistent configuration / input file. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Pattern file that does not conform to the P-PAT format.
class PatternParseError : public ConfigError {
 public:
  explicit PatternParseError(const std::string& what) : ConfigError(what) {}
};

/// A structural invariant (exclusivity, conservation, bounds) was violated
/// during a run. CLI exit code 3.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::runtime_error(what) {}
};

/// Filesystem / output failure. CLI exit code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sealci
