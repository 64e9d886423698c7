#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

// Violated numerical or geometric precondition (grid too narrow, f(0) ~ 0, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed scenario / configuration input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace biphoton
