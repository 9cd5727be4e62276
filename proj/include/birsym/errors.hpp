#pragma once

#include <stdexcept>
#include <string>

namespace birsym {

// Malformed arguments: shape mismatches, out-of-range indices, parse errors.
class InputError : public std::invalid_argument {
public:
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A configured resource limit was exceeded (degree cap, submodule guard).
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace birsym
