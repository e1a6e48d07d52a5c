#pragma once

#include <stdexcept>
#include <string>

namespace elastpass {

// Unsupported plant/controller/environment combination or malformed input.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical evaluation refused (e.g. frequency response requested at a pole).
struct EvaluationError : std::runtime_error {
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace elastpass
