#pragma once

#include <stdexcept>
#include <string>

namespace superwave {

/// A numerical procedure failed to meet its contract (non-convergence, singular data).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing an artifact failed; message carries the path and a line/offset.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run configuration violates its schema. `key()` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace superwave
